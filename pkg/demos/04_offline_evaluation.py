"""Offline sign-agreement evaluation against simple baselines.

Splits users 70/30, fits each method on training users only, and judges the
sign of every test user's held-out extremes: +1 when a score's sign matches
the held-out label, 0 on exact zero, -1 otherwise. Accuracy counts only the
+1 judgments, so the symmetric random baseline sits near one third.
"""

from filmrec import (
    EgoGraphPolicy,
    KnnPolicy,
    NaiveBayesPolicy,
    RandomScorePolicy,
    SplitSpec,
    SyntheticSpec,
    evaluate_method,
    generate_synthetic,
    split_users,
)

view = generate_synthetic(SyntheticSpec())
print(f"catalog: {len(view.films)} films, {len(view.users)} users")

sample_size, train_fraction, seed = 100, 0.7, 0
train, test = split_users(view, sample_size, train_fraction, seed)
split = SplitSpec(sample_size, train_fraction, seed)
print(f"split: {len(train.users)} training users / {len(test.users)} test users (seed {seed})")

policies = [
    EgoGraphPolicy(),
    KnnPolicy(k=5),
    NaiveBayesPolicy(),
    RandomScorePolicy(seed),
]

print(f"\n{'method':>12} {'accuracy':>9} {'+1':>5} {'0':>4} {'-1':>5}")
for policy in policies:
    report = evaluate_method(policy, train, test, split=split)
    hist = report.histogram()
    print(f"{report.method:>12} {report.accuracy:9.3f} {hist[1]:5d} {hist[0]:4d} {hist[-1]:5d}")

print("\none judged case in detail:")
report = evaluate_method(EgoGraphPolicy(), train, test, split=split)
first_user = report.judgments[0].user_id
for judgment in report.judgments:
    if judgment.user_id != first_user:
        break
    print(f"  film {judgment.film_id:>4} held as {judgment.label:<13} "
          f"rs={judgment.rs_value:+.4f} -> judged {judgment.score:+d}")
