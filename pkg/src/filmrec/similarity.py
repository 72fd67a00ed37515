"""Per-user dual similarity and the averaged film-by-film similarity matrix.

Dual similarity compares how much of two films one user watched:

    DS = 2 * min(n_i, n_j) / (n_i + n_j)

with two sentinel conventions. A user who watched neither film carries no
information (NOT_COMPARABLE, exported as -1); a user who watched exactly one
film is hard evidence of dissimilarity (DS = 0). Both percentages being
exactly zero also yields NOT_COMPARABLE, since the ratio is 0/0.

Averaging across users supports two denominators, because "divide by the
number of users" and "divide by the number of informative users" give
different matrices on sparse data:

* COMPARABLE_COUNT (default): divide by the number of users whose DS is not
  the sentinel. Zeros stay in the numerator; they are evidence.
* ALL_USERS: divide by the total user count, the literal averaging rule.

Per film pair, users are accumulated in ascending user order with plain
sequential addition, so results are reproducible bit-for-bit no matter how
the pair loop is partitioned.
"""

from __future__ import annotations

import csv
from enum import Enum
from typing import TextIO

import numpy as np

from .errors import DomainError
from .ingest import ViewMatrix, ident_sort_key

NOT_COMPARABLE = -1.0


class AveragingPolicy(Enum):
    COMPARABLE_COUNT = "comparable_count"
    ALL_USERS = "all_users"


def dual_similarity(n_i: float | None, n_j: float | None) -> float:
    """One user's similarity between two films given viewing percentages.

    ``None`` means the user never watched that film. Returns a value in
    [0, 1], or ``NOT_COMPARABLE`` when the user contributes no information.
    """
    for value in (n_i, n_j):
        if value is not None and not 0.0 <= value <= 1.0:
            raise DomainError(f"viewing percentage outside [0, 1]: {value}")
    if n_i is None and n_j is None:
        return NOT_COMPARABLE
    if n_i is None or n_j is None:
        return 0.0
    if n_i == 0.0 and n_j == 0.0:
        return NOT_COMPARABLE
    return 2.0 * min(n_i, n_j) / (n_i + n_j)


class SimilarityMatrix:
    """Dense symmetric film-by-film average similarity, values in [0, 1]."""

    def __init__(self, films: tuple[str, ...], values: np.ndarray):
        self.films = films
        self.values = values
        self._index = {film: i for i, film in enumerate(films)}

    def __contains__(self, film: str) -> bool:
        return film in self._index

    def value(self, film_i: str, film_j: str) -> float:
        return float(self.values[self._index[film_i], self._index[film_j]])

    def top_similar(self, film: str, k: int) -> list[tuple[str, float]]:
        """The k most similar other films, by descending similarity then id."""
        i = self._index[film]
        scored = [
            (other, float(self.values[i, j]))
            for j, other in enumerate(self.films)
            if j != i
        ]
        scored.sort(key=lambda pair: (-pair[1], ident_sort_key(pair[0])))
        return scored[:k]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimilarityMatrix):
            return NotImplemented
        return self.films == other.films and np.array_equal(self.values, other.values)


def average_similarity(
    view: ViewMatrix,
    policy: AveragingPolicy = AveragingPolicy.COMPARABLE_COUNT,
) -> SimilarityMatrix:
    """Average dual similarity over users for every film pair.

    A pair with no informative user gets 0. The diagonal is 1 for any film
    with at least one watcher; films nobody watched stay all-zero (they end
    up isolated in the graph).
    """
    films = view.films
    users = view.users
    n = len(films)
    values = np.zeros((n, n), dtype=np.float64)
    watchers = [view.film_views(film) for film in films]
    for i in range(n):
        if watchers[i]:
            values[i, i] = 1.0
        for j in range(i + 1, n):
            total = 0.0
            comparable = 0
            for user in users:
                ds = dual_similarity(watchers[i].get(user), watchers[j].get(user))
                if ds != NOT_COMPARABLE:
                    total += ds
                    comparable += 1
            if policy is AveragingPolicy.COMPARABLE_COUNT:
                avg = total / comparable if comparable else 0.0
            else:
                avg = total / len(users) if users else 0.0
            values[i, j] = avg
            values[j, i] = avg
    return SimilarityMatrix(films, values)


def write_dual_similarity_csv(view: ViewMatrix, stream: TextIO) -> None:
    """Debug dump of the full per-user DS tensor in long form, one row per
    (film pair, user), with -1 standing for NOT_COMPARABLE."""
    writer = csv.writer(stream)
    writer.writerow(["film_i", "film_j", "user", "ds"])
    films = view.films
    for i, film_i in enumerate(films):
        views_i = view.film_views(film_i)
        for film_j in films[i + 1 :]:
            views_j = view.film_views(film_j)
            for user in view.users:
                ds = dual_similarity(views_i.get(user), views_j.get(user))
                writer.writerow([film_i, film_j, user, repr(ds)])


def write_similarity_csv(sim: SimilarityMatrix, stream: TextIO) -> None:
    """Square matrix dump: header row of film ids, one row per film."""
    writer = csv.writer(stream)
    writer.writerow(["film_id", *sim.films])
    for i, film in enumerate(sim.films):
        writer.writerow([film, *[repr(float(v)) for v in sim.values[i]]])
