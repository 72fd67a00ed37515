"""From raw viewing events to a film similarity graph.

Walks the first stages of the pipeline on a tiny hand-made log: viewing
percentages, per-user dual similarity (with its two sentinel conventions),
the averaged similarity matrix, and the thresholded graph.
"""

import io

from filmrec import average_similarity, build_graph, build_view_matrix, dual_similarity, parse_events
from filmrec.similarity import NOT_COMPARABLE

EVENTS = """\
film_id,user_id,watch_seconds,total_seconds
1401,59635,2400,2458
6352,44530,540,2469
6352,71326,1680,2469
236,58197,2520,2533
53,59243,1020,2472
53,884,2100,2572
53,59100,2460,2572
1401,59243,1980,2458
236,884,300,2533
1401,884,2458,2458
"""

events = parse_events(io.StringIO(EVENTS))
print(f"parsed {len(events)} events")

view = build_view_matrix(events)
print(f"\nviewing-percentage matrix: {len(view.films)} films x {len(view.users)} users")
for film in view.films:
    row = {user: round(pct, 2) for user, pct in view.film_views(film).items()}
    print(f"  film {film}: {row}")

# Dual similarity compares two percentages for one user. Absent-absent pairs
# carry no information (the -1 sentinel); watched-one-only is hard evidence
# of dissimilarity (0).
print("\ndual similarity examples:")
for a, b in [(0.5, 0.5), (0.2, 0.8), (None, 0.82), (None, None)]:
    ds = dual_similarity(a, b)
    shown = "-1 (not comparable)" if ds == NOT_COMPARABLE else f"{ds:.3f}"
    print(f"  DS({a}, {b}) = {shown}")

sim = average_similarity(view)
print("\naveraged similarity matrix:")
header = "      " + "  ".join(f"{f:>5}" for f in sim.films)
print(header)
for i, film in enumerate(sim.films):
    cells = "  ".join(f"{sim.values[i, j]:5.3f}" for j in range(len(sim.films)))
    print(f"{film:>5} {cells}")

graph = build_graph(sim, edge_threshold=0.0)
print(f"\ngraph: {graph.node_count()} nodes, {graph.edge_count()} edges")
for a, b, weight in graph.edges():
    print(f"  {a} -- {b}  (weight {weight:.3f})")

pruned = build_graph(sim, edge_threshold=0.5)
print(f"\nwith edge_threshold=0.5: {pruned.edge_count()} edges survive")
