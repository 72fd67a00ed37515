"""Offline evaluation of ranking policies, plus baselines and synthetic data.

The protocol: split users into train and test pools, fit a policy on the
training pool only, then for each test user hold out their two most-watched
and two least-watched films. The policy scores each held-out film from the
user's remaining history; a score is judged +1 when its sign matches the
held-out label (positive for the most-watched, negative for the
least-watched), 0 when the score is exactly zero, and -1 otherwise.
Accuracy is the fraction of +1 judgments; zeros count against.

Baselines are deliberately simple: a cosine k-nearest-neighbor vote over
viewing vectors, a per-film Bernoulli Naive Bayes over binarized labels, and
a symmetric random scorer whose expected accuracy is one third.
"""

from __future__ import annotations

import csv
import logging
import math
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Protocol, TextIO

from .community import louvain
from .errors import DomainError
from .graph import CentralityTable, FilmGraph, build_graph, hop_distances
from .ingest import ViewMatrix, ViewingEvent, ident_sort_key
from .ranking import recommendation_score
from .similarity import AveragingPolicy, average_similarity

logger = logging.getLogger(__name__)

PREFERRED = "preferred"
NON_PREFERRED = "non_preferred"


# ---------------------------------------------------------------------------
# Splitting and judging


@dataclass(frozen=True)
class SplitSpec:
    sample_size: int
    train_fraction: float
    seed: int


def split_users(
    view: ViewMatrix, sample_size: int, train_fraction: float, seed: int
) -> tuple[ViewMatrix, ViewMatrix]:
    """Sample users without replacement and partition them by user.

    Films are shared across both sides; only the user pools differ. The same
    seed always produces the same split.
    """
    if sample_size > len(view.users):
        raise DomainError(f"sample_size {sample_size} exceeds user count {len(view.users)}")
    if not 0.0 < train_fraction < 1.0:
        raise DomainError(f"train_fraction must be in (0, 1), got {train_fraction}")
    rng = random.Random(seed)
    sample = rng.sample(list(view.users), sample_size)
    n_train = int(round(sample_size * train_fraction))
    if n_train == 0 or n_train == sample_size:
        raise DomainError(f"train_fraction {train_fraction} leaves an empty split side")
    train_users = sample[:n_train]
    test_users = sample[n_train:]
    return view.restrict_users(train_users), view.restrict_users(test_users)


def judge(rs_value: float, label: str) -> int:
    """+1 when the score's sign agrees with the label, 0 on exact zero,
    -1 on disagreement."""
    if label not in (PREFERRED, NON_PREFERRED):
        raise DomainError(f"unknown label: {label}")
    if rs_value == 0.0:
        return 0
    agrees = rs_value > 0.0 if label == PREFERRED else rs_value < 0.0
    return 1 if agrees else -1


@dataclass(frozen=True)
class EvalCase:
    """One test user: two held-out extremes per label plus the remaining
    watched films (the observable context a policy may use)."""

    user_id: str
    held_preferred: tuple[str, str]
    held_non_preferred: tuple[str, str]
    context: dict[str, float]


def make_eval_case(user_id: str, views: Mapping[str, float]) -> EvalCase | None:
    """Build the held-out case, or None when the user watched fewer than
    four films."""
    if len(views) < 4:
        return None
    ordered = sorted(views, key=lambda film: (-views[film], ident_sort_key(film)))
    held_preferred = (ordered[0], ordered[1])
    held_non_preferred = (ordered[-1], ordered[-2])
    held = {*held_preferred, *held_non_preferred}
    context = {film: pct for film, pct in views.items() if film not in held}
    return EvalCase(user_id, held_preferred, held_non_preferred, context)


@dataclass(frozen=True)
class CaseJudgment:
    user_id: str
    film_id: str
    label: str
    rs_value: float
    score: int


@dataclass(frozen=True)
class EvalReport:
    method: str
    split: SplitSpec | None
    judgments: tuple[CaseJudgment, ...]
    skipped_users: tuple[str, ...]
    accuracy: float

    def histogram(self) -> dict[int, int]:
        counts = {1: 0, 0: 0, -1: 0}
        for judgment in self.judgments:
            counts[judgment.score] += 1
        return counts

    def to_json_dict(self) -> dict:
        return {
            "method": self.method,
            "split": None
            if self.split is None
            else {
                "sample_size": self.split.sample_size,
                "train_fraction": self.split.train_fraction,
                "seed": self.split.seed,
            },
            "accuracy": self.accuracy,
            "judgment_histogram": {str(k): v for k, v in self.histogram().items()},
            "skipped_users": list(self.skipped_users),
            "judgments": [
                {
                    "user_id": j.user_id,
                    "film_id": j.film_id,
                    "label": j.label,
                    "rs_value": j.rs_value,
                    "score": j.score,
                }
                for j in self.judgments
            ],
        }


class ScorePolicy(Protocol):
    name: str

    def fit(self, train: ViewMatrix) -> None: ...

    def score_film(self, case: EvalCase, film: str) -> float: ...


def evaluate_method(
    policy: ScorePolicy,
    train: ViewMatrix,
    test: ViewMatrix,
    *,
    split: SplitSpec | None = None,
) -> EvalReport:
    """Fit the policy on training users only and judge it on every test
    user's held-out extremes. Test users with fewer than four watched films
    are skipped (with a warning) and listed in the report."""
    policy.fit(train)
    judgments: list[CaseJudgment] = []
    skipped: list[str] = []
    for user in test.users:
        case = make_eval_case(user, test.user_views(user))
        if case is None:
            logger.warning("skipping test user %s: fewer than 4 watched films", user)
            skipped.append(user)
            continue
        for film in case.held_preferred:
            rs = policy.score_film(case, film)
            judgments.append(CaseJudgment(user, film, PREFERRED, rs, judge(rs, PREFERRED)))
        for film in case.held_non_preferred:
            rs = policy.score_film(case, film)
            judgments.append(CaseJudgment(user, film, NON_PREFERRED, rs, judge(rs, NON_PREFERRED)))
    correct = sum(1 for j in judgments if j.score == 1)
    accuracy = correct / len(judgments) if judgments else 0.0
    return EvalReport(policy.name, split, tuple(judgments), tuple(skipped), accuracy)


# ---------------------------------------------------------------------------
# Policies


class EgoGraphPolicy:
    """The full similarity-graph pipeline: fit builds the similarity matrix,
    thresholded graph, centrality table, and clustering from training users;
    scoring runs the ego-centric recommendation score over the test user's
    context films labeled by the preference threshold.

    ``include_held_out_egos`` additionally lets the held-out films vouch for
    themselves (each held-out film joins its own label's ego list). Default
    is off: scores should rest on independent evidence.
    """

    def __init__(
        self,
        *,
        averaging_policy: AveragingPolicy = AveragingPolicy.COMPARABLE_COUNT,
        edge_threshold: float = 0.0,
        preference_threshold: float = 0.5,
        include_held_out_egos: bool = False,
        name: str = "ego_graph",
    ):
        self.name = name
        self.averaging_policy = averaging_policy
        self.edge_threshold = edge_threshold
        self.preference_threshold = preference_threshold
        self.include_held_out_egos = include_held_out_egos
        self.graph: FilmGraph | None = None
        self.centrality: CentralityTable | None = None
        self.similarity = None
        self.clustering = None
        self._distance_cache: dict[str, dict[str, int]] = {}

    def fit(self, train: ViewMatrix) -> None:
        self.similarity = average_similarity(train, self.averaging_policy)
        self.graph = build_graph(self.similarity, self.edge_threshold)
        self.centrality = CentralityTable.compute(self.graph)
        self.clustering = louvain(self.graph)
        self._distance_cache = {}

    def _distances(self, ego: str) -> dict[str, int]:
        cached = self._distance_cache.get(ego)
        if cached is None:
            cached = hop_distances(self.graph, ego)
            self._distance_cache[ego] = cached
        return cached

    def score_film(self, case: EvalCase, film: str) -> float:
        assert self.graph is not None and self.centrality is not None, "fit() first"
        pref_egos = [f for f, pct in case.context.items() if pct > self.preference_threshold]
        nonpref_egos = [f for f, pct in case.context.items() if pct <= self.preference_threshold]
        if self.include_held_out_egos:
            pref_egos.extend(case.held_preferred)
            nonpref_egos.extend(case.held_non_preferred)
        pref_egos.sort(key=ident_sort_key)
        nonpref_egos.sort(key=ident_sort_key)
        ac = self.centrality.ac(film)

        def value(ego: str) -> float:
            hops = self._distances(ego).get(film)
            if hops is None:
                return 0.0
            return ac / max(hops, 1)

        return recommendation_score(
            (value(ego) for ego in pref_egos),
            (value(ego) for ego in nonpref_egos),
        )


class RandomScorePolicy:
    """Symmetric random scorer: -1, 0, or +1 with equal probability, so the
    expected sign-agreement accuracy is 1/3."""

    def __init__(self, seed: int):
        self.name = "random"
        self._rng = random.Random(seed)

    def fit(self, train: ViewMatrix) -> None:
        pass

    def score_film(self, case: EvalCase, film: str) -> float:
        return self._rng.choice((-1.0, 0.0, 1.0))


def _cosine(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    if len(b) < len(a):
        a, b = b, a
    dot = sum(value * b.get(film, 0.0) for film, value in a.items())
    if dot == 0.0:
        return 0.0
    norm_a = math.sqrt(sum(v * v for v in a.values()))
    norm_b = math.sqrt(sum(v * v for v in b.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return dot / (norm_a * norm_b)


def knn_baseline(
    train: ViewMatrix,
    user_views: Mapping[str, float],
    films: Iterable[str],
    k: int,
) -> dict[str, bool]:
    """Predict preference per film from the k training users most similar to
    the given viewing vector (cosine, absent = 0): preferred when those
    neighbors' similarity-weighted mean percentage on the film exceeds 0.5;
    films none of them watched come back non-preferred."""
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    similarities = [
        (-_cosine(user_views, train.user_views(other)), ident_sort_key(other), other)
        for other in train.users
    ]
    similarities.sort()
    neighbors = [(other, -neg_sim) for neg_sim, _, other in similarities[:k]]
    predictions: dict[str, bool] = {}
    for film in films:
        weight_total = 0.0
        weighted_pct = 0.0
        for other, sim in neighbors:
            pct = train.pct(film, other)
            if pct is None or sim <= 0.0:
                continue
            weight_total += sim
            weighted_pct += sim * pct
        predictions[film] = weight_total > 0.0 and weighted_pct / weight_total > 0.5
    return predictions


def naive_bayes_baseline(
    train: ViewMatrix,
    user_views: Mapping[str, float],
    films: Iterable[str],
) -> dict[str, bool]:
    """Per-film Bernoulli Naive Bayes over binarized labels (pct > 0.5) with
    add-one smoothing. Features are the given user's other watched films'
    binary labels; exact posterior ties resolve to non-preferred."""
    user_labels = {film: pct > 0.5 for film, pct in user_views.items()}
    feature_films = sorted(user_labels, key=ident_sort_key)
    predictions: dict[str, bool] = {}
    for film in films:
        watchers = [(user, pct > 0.5) for user, pct in train.film_views(film).items()]
        n_pref = sum(1 for _, liked in watchers if liked)
        n_non = len(watchers) - n_pref
        log_pref = math.log((n_pref + 1) / (len(watchers) + 2))
        log_non = math.log((n_non + 1) / (len(watchers) + 2))
        for feature in feature_films:
            if feature == film:
                continue
            x = user_labels[feature]
            match_pref = match_non = seen_pref = seen_non = 0
            for user, liked in watchers:
                pct = train.pct(feature, user)
                if pct is None:
                    continue
                feature_label = pct > 0.5
                if liked:
                    seen_pref += 1
                    match_pref += feature_label == x
                else:
                    seen_non += 1
                    match_non += feature_label == x
            log_pref += math.log((match_pref + 1) / (seen_pref + 2))
            log_non += math.log((match_non + 1) / (seen_non + 2))
        predictions[film] = log_pref > log_non
    return predictions


class KnnPolicy:
    """Nearest-neighbor baseline wrapped as a scoring policy (+1/-1)."""

    def __init__(self, k: int = 5):
        self.name = f"knn{k}"
        self.k = k
        self._train: ViewMatrix | None = None

    def fit(self, train: ViewMatrix) -> None:
        self._train = train

    def score_film(self, case: EvalCase, film: str) -> float:
        assert self._train is not None, "fit() first"
        prediction = knn_baseline(self._train, case.context, [film], self.k)
        return 1.0 if prediction[film] else -1.0


class NaiveBayesPolicy:
    """Naive Bayes baseline wrapped as a scoring policy (+1/-1)."""

    def __init__(self):
        self.name = "naive_bayes"
        self._train: ViewMatrix | None = None

    def fit(self, train: ViewMatrix) -> None:
        self._train = train

    def score_film(self, case: EvalCase, film: str) -> float:
        assert self._train is not None, "fit() first"
        prediction = naive_bayes_baseline(self._train, case.context, [film])
        return 1.0 if prediction[film] else -1.0


# ---------------------------------------------------------------------------
# Synthetic data


@dataclass(frozen=True)
class SyntheticSpec:
    """Block-structured stand-in for a real viewing log: films are split
    into planted clusters, every user gets a home cluster, and viewing
    percentages are drawn high inside the home cluster and low outside."""

    film_count: int = 80
    user_count: int = 328
    planted_cluster_count: int = 4
    in_cluster_pct: tuple[float, float] = (0.7, 1.0)
    out_cluster_pct: tuple[float, float] = (0.0, 0.3)
    watch_probability: float = 0.65
    seed: int = 7

    def __post_init__(self):
        if self.film_count < 1 or self.user_count < 1 or self.planted_cluster_count < 1:
            raise DomainError("film, user, and cluster counts must be positive")
        if self.planted_cluster_count > self.film_count:
            raise DomainError("more planted clusters than films")
        for lo, hi in (self.in_cluster_pct, self.out_cluster_pct):
            if not (0.0 <= lo <= hi <= 1.0):
                raise DomainError(f"percentage range outside [0, 1]: ({lo}, {hi})")
        if not 0.0 <= self.watch_probability <= 1.0:
            raise DomainError(f"watch_probability outside [0, 1]: {self.watch_probability}")

    def film_ids(self) -> list[str]:
        return [str(i + 1) for i in range(self.film_count)]

    def user_ids(self) -> list[str]:
        return [str(5000 + i + 1) for i in range(self.user_count)]


def planted_film_clusters(spec: SyntheticSpec) -> dict[str, int]:
    """The ground-truth film clusters (contiguous, balanced blocks)."""
    return {
        film: i * spec.planted_cluster_count // spec.film_count
        for i, film in enumerate(spec.film_ids())
    }


def generate_synthetic(spec: SyntheticSpec) -> ViewMatrix:
    """Draw a seeded block-structured view matrix from the given parameters."""
    rng = random.Random(spec.seed)
    films = spec.film_ids()
    users = spec.user_ids()
    film_cluster = planted_film_clusters(spec)
    home = {user: rng.randrange(spec.planted_cluster_count) for user in users}
    entries: dict[tuple[str, str], float] = {}
    for user in users:
        for film in films:
            if rng.random() >= spec.watch_probability:
                continue
            lo, hi = (
                spec.in_cluster_pct
                if film_cluster[film] == home[user]
                else spec.out_cluster_pct
            )
            entries[(film, user)] = rng.uniform(lo, hi)
    return ViewMatrix(entries, films=films, users=users)


def view_to_events(view: ViewMatrix, total_seconds: float = 3600.0) -> list[ViewingEvent]:
    """Expand a matrix back into one event per stored entry (for CSV dumps)."""
    events = []
    for film in view.films:
        views = view.film_views(film)
        for user in sorted(views, key=ident_sort_key):
            events.append(ViewingEvent(film, user, views[user] * total_seconds, total_seconds))
    return events


def comembership_f1(truth: Mapping[str, int], found: Mapping[str, int]) -> float:
    """Pairwise co-membership F1 between two clusterings of the same items."""
    items = sorted(set(truth) & set(found))
    tp = fp = fn = 0
    for i, a in enumerate(items):
        for b in items[i + 1 :]:
            same_truth = truth[a] == truth[b]
            same_found = found[a] == found[b]
            if same_truth and same_found:
                tp += 1
            elif same_found:
                fp += 1
            elif same_truth:
                fn += 1
    if tp == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2.0 * precision * recall / (precision + recall)


def write_eval_summary_csv(reports: Iterable[EvalReport], stream: TextIO) -> None:
    writer = csv.writer(stream)
    writer.writerow(["method", "sample_size", "train_fraction", "seed", "judgments", "accuracy"])
    for report in reports:
        split = report.split
        writer.writerow(
            [
                report.method,
                split.sample_size if split else "",
                split.train_fraction if split else "",
                split.seed if split else "",
                len(report.judgments),
                repr(report.accuracy),
            ]
        )
