"""Versioned on-disk pipeline artifact.

One JSON document holds everything the serving layer needs: the similarity
matrix, the graph's edge list, the centrality table, the clustering, and the
per-user preference profiles, together with the config snapshot that
produced them. Serialization is canonical (sorted keys, shortest-round-trip
floats), so the same pipeline state always produces the same bytes and a
load/save cycle is lossless. Readers refuse documents written by a newer
format version.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .community import Clustering
from .config import PipelineConfig
from .errors import DataError
from .graph import CentralityRow, CentralityTable, FilmGraph, average_centrality, build_graph
from .profiles import PreferenceProfile
from .similarity import SimilarityMatrix

FORMAT_VERSION = 1


@dataclass(frozen=True)
class PipelineArtifact:
    format_version: int
    config: PipelineConfig
    similarity: SimilarityMatrix
    graph: FilmGraph
    centrality: CentralityTable
    clustering: Clustering
    profiles: dict[str, PreferenceProfile]
    created_at: str

    @classmethod
    def build(
        cls,
        config: PipelineConfig,
        similarity: SimilarityMatrix,
        graph: FilmGraph,
        centrality: CentralityTable,
        clustering: Clustering,
        profiles: dict[str, PreferenceProfile],
    ) -> "PipelineArtifact":
        created = datetime.now(timezone.utc).isoformat()
        return cls(FORMAT_VERSION, config, similarity, graph, centrality, clustering, profiles, created)

    def to_payload(self) -> dict:
        return {
            "format_version": self.format_version,
            "created_at": self.created_at,
            "config": self.config.to_dict(),
            "films": list(self.similarity.films),
            "similarity": [[float(v) for v in row] for row in self.similarity.values],
            "edges": [[a, b, weight] for a, b, weight in self.graph.edges()],
            "centrality": {
                film: [row.degree_c, row.closeness_c, row.betweenness_c, row.avg_c]
                for film, row in self.centrality.rows.items()
            },
            "clustering": {
                "assignment": dict(self.clustering.assignment),
                "modularity": self.clustering.modularity,
            },
            "profiles": {
                user: {
                    "preferred": list(profile.preferred),
                    "non_preferred": list(profile.non_preferred),
                }
                for user, profile in self.profiles.items()
            },
        }

    def payload_without_timestamp(self) -> dict:
        payload = self.to_payload()
        payload.pop("created_at")
        return payload

    def save(self, path: str | Path) -> None:
        text = json.dumps(self.to_payload(), sort_keys=True, separators=(",", ":"))
        Path(path).write_text(text, encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "PipelineArtifact":
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DataError(f"artifact is not valid JSON: {exc}")
        return cls.from_payload(payload)

    @classmethod
    def from_payload(cls, payload: dict) -> "PipelineArtifact":
        version = payload.get("format_version")
        if not isinstance(version, int):
            raise DataError("artifact missing integer format_version")
        if version > FORMAT_VERSION:
            raise DataError(
                f"artifact format_version {version} is newer than supported {FORMAT_VERSION}"
            )
        try:
            config = PipelineConfig.from_dict(payload["config"])
            films = tuple(payload["films"])
            values = np.array(payload["similarity"], dtype=np.float64)
            if values.shape != (len(films), len(films)):
                raise DataError("similarity matrix shape does not match film list")
            similarity = SimilarityMatrix(films, values)
            graph = FilmGraph(films, [(a, b, w) for a, b, w in payload["edges"]])
            centrality = CentralityTable(
                {
                    film: CentralityRow(d, c, b, avg)
                    for film, (d, c, b, avg) in payload["centrality"].items()
                }
            )
            clustering = Clustering(
                dict(payload["clustering"]["assignment"]),
                payload["clustering"]["modularity"],
            )
            profiles = {
                user: PreferenceProfile(user, tuple(entry["preferred"]), tuple(entry["non_preferred"]))
                for user, entry in payload["profiles"].items()
            }
            created_at = payload["created_at"]
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed artifact payload: {exc!r}")
        artifact = cls(
            version,
            config,
            similarity,
            graph,
            centrality,
            clustering,
            profiles,
            created_at,
        )
        artifact.validate()
        return artifact

    def validate(self) -> None:
        """Cheap self-consistency checks: the stored graph must be exactly
        what the stored similarity and threshold produce, and the stored
        average-centrality column must equal the mean of its components."""
        rebuilt = build_graph(self.similarity, self.config.edge_threshold)
        stored_edges = {(a, b): w for a, b, w in self.graph.edges()}
        rebuilt_edges = {(a, b): w for a, b, w in rebuilt.edges()}
        if stored_edges != rebuilt_edges:
            raise DataError("artifact graph does not match similarity matrix and threshold")
        for film, row in self.centrality.rows.items():
            expected = average_centrality(row.degree_c, row.closeness_c, row.betweenness_c)
            if row.avg_c != expected:
                raise DataError(f"artifact centrality row for {film} is inconsistent")

    def with_timestamp(self, created_at: str) -> "PipelineArtifact":
        return replace(self, created_at=created_at)
