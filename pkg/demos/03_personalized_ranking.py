"""Ego-centric scoring: from one user's history to a ranked list.

Shows the last pipeline stages for a single user: their preference profile,
how each candidate is scored against liked and disliked anchor films
(centrality divided by hop distance), and the cold-start fallback.
"""

from filmrec import (
    PipelineConfig,
    SyntheticSpec,
    ego_centrality,
    generate_synthetic,
    rank_cold_start,
    recommend,
    run_pipeline_from_view,
)

spec = SyntheticSpec(film_count=24, user_count=120, planted_cluster_count=4, seed=11)
view = generate_synthetic(spec)
artifact = run_pipeline_from_view(view, PipelineConfig(edge_threshold=0.28))

# pick a user with both kinds of history
user = next(
    u for u, p in artifact.profiles.items() if len(p.preferred) >= 2 and len(p.non_preferred) >= 2
)
profile = artifact.profiles[user]
print(f"user {user}")
print(f"  preferred ({len(profile.preferred)}): {' '.join(profile.preferred[:6])} ...")
print(f"  non-preferred ({len(profile.non_preferred)}): {' '.join(profile.non_preferred[:6])} ...")

ego = profile.preferred[0]
ego_cluster = artifact.clustering.assignment[ego]
nearby = [f for f, c in artifact.clustering.assignment.items() if c == ego_cluster and f != ego]
far = [f for f, c in artifact.clustering.assignment.items() if c != ego_cluster]
print(f"\nego-centric scores anchored at liked film {ego} (cluster {ego_cluster}):")
for candidate in [*nearby[:4], *far[:2]]:
    score = ego_centrality(artifact.graph, artifact.centrality, candidate, ego)
    where = "reachable" if score.distance is not None else "unreachable, scores 0"
    print(f"  film {candidate}: centrality {artifact.centrality.ac(candidate):.4f} "
          f"/ distance {score.distance} = {score.value:.4f}  ({where})")

ranked = recommend(artifact, user, 8)
print(f"\ntop recommendations for {user} (score = liked-anchor pull minus disliked-anchor pull):")
for rank, (film, rs) in enumerate(ranked.entries, start=1):
    cluster = artifact.clustering.assignment[film]
    print(f"  {rank}. film {film}  rs={rs:+.4f}  (cluster {cluster})")

print("\ncold start: a brand-new user just gets the globally central films")
cold = rank_cold_start(artifact.centrality, 5)
for rank, (film, ac) in enumerate(cold.entries, start=1):
    print(f"  {rank}. film {film}  centrality {ac:.4f}")
