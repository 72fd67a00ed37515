import json

import pytest

from filmrec import (
    DataError,
    DomainError,
    PipelineArtifact,
    PipelineConfig,
    StageError,
    SyntheticSpec,
    generate_synthetic,
    is_cold_start,
    recommend,
    run_pipeline,
    run_pipeline_from_view,
)
from filmrec.config import load_config, parse_config_text
from filmrec.evaluation import view_to_events
from filmrec.similarity import AveragingPolicy


@pytest.fixture(scope="module")
def small_view():
    return generate_synthetic(
        SyntheticSpec(film_count=12, user_count=20, planted_cluster_count=2, seed=5)
    )


@pytest.fixture(scope="module")
def small_artifact(small_view):
    return run_pipeline_from_view(small_view, PipelineConfig())


@pytest.fixture()
def events_file(tmp_path, small_view):
    path = tmp_path / "events.csv"
    lines = ["film_id,user_id,watch_seconds,total_seconds"]
    for event in view_to_events(small_view):
        lines.append(
            f"{event.film_id},{event.user_id},{event.watch_seconds!r},{event.total_seconds!r}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


class TestConfig:
    def test_parse_text(self):
        text = "# comment\nedge_threshold = 0.25\naveraging_policy = all_users\nclamp = false\n"
        config = PipelineConfig.from_dict(parse_config_text(text))
        assert config.edge_threshold == 0.25
        assert config.averaging_policy is AveragingPolicy.ALL_USERS
        assert config.clamp is False

    def test_unknown_key_rejected(self):
        with pytest.raises(DataError, match="unknown config key"):
            PipelineConfig.from_dict({"wat": 1})

    def test_bad_value_rejected(self):
        with pytest.raises(DataError):
            PipelineConfig.from_dict({"edge_threshold": "lots"})

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "pipeline.conf"
        path.write_text("seed = 3\npreference_threshold = 0.6\n")
        config = load_config(path)
        assert config.seed == 3
        assert config.preference_threshold == 0.6

    def test_snapshot_round_trip(self):
        config = PipelineConfig(edge_threshold=0.3, seed=11)
        assert PipelineConfig.from_dict(config.to_dict()) == config


class TestRunPipeline:
    def test_from_events_file(self, events_file):
        artifact = run_pipeline(events_file, PipelineConfig())
        assert len(artifact.similarity.films) == 12
        assert max(artifact.clustering.assignment.values()) + 1 >= 2
        assert set(artifact.profiles) == set(artifact.profiles)

    def test_default_synthetic_run(self, small_artifact, small_view):
        assert small_artifact.graph.nodes == small_view.films
        assert len(small_artifact.profiles) == 20

    def test_empty_events_fails_at_ingest(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("film_id,user_id,watch_seconds,total_seconds\n")
        with pytest.raises(StageError) as excinfo:
            run_pipeline(path, PipelineConfig())
        assert excinfo.value.stage == "ingest"

    def test_rerun_is_byte_identical_except_timestamp(self, events_file):
        first = run_pipeline(events_file, PipelineConfig())
        second = run_pipeline(events_file, PipelineConfig())
        assert first.payload_without_timestamp() == second.payload_without_timestamp()

    def test_config_validation(self, small_view):
        with pytest.raises(DomainError):
            run_pipeline_from_view(small_view, PipelineConfig(edge_threshold=2.0))


class TestArtifactSerialization:
    def test_round_trip_is_lossless(self, tmp_path, small_artifact):
        path = tmp_path / "artifact.json"
        small_artifact.save(path)
        loaded = PipelineArtifact.load(path)
        assert loaded.payload_without_timestamp() == small_artifact.payload_without_timestamp()
        assert loaded.created_at == small_artifact.created_at

    def test_round_trip_preserves_recommendations(self, tmp_path, small_artifact):
        path = tmp_path / "artifact.json"
        small_artifact.save(path)
        loaded = PipelineArtifact.load(path)
        for user in list(small_artifact.profiles)[:5]:
            assert recommend(loaded, user, 5) == recommend(small_artifact, user, 5)

    def test_save_is_deterministic(self, tmp_path, small_artifact):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        small_artifact.save(a)
        small_artifact.save(b)
        assert a.read_bytes() == b.read_bytes()

    def test_newer_version_refused(self, tmp_path, small_artifact):
        path = tmp_path / "artifact.json"
        payload = small_artifact.to_payload()
        payload["format_version"] = 99
        path.write_text(json.dumps(payload))
        with pytest.raises(DataError, match="newer"):
            PipelineArtifact.load(path)

    def test_tampered_graph_rejected(self, tmp_path, small_artifact):
        path = tmp_path / "artifact.json"
        payload = small_artifact.to_payload()
        payload["edges"] = payload["edges"][:-1]  # drop one edge
        path.write_text(json.dumps(payload))
        with pytest.raises(DataError, match="graph"):
            PipelineArtifact.load(path)

    def test_tampered_centrality_rejected(self, tmp_path, small_artifact):
        path = tmp_path / "artifact.json"
        payload = small_artifact.to_payload()
        film = next(iter(payload["centrality"]))
        payload["centrality"][film][3] += 0.1
        path.write_text(json.dumps(payload))
        with pytest.raises(DataError, match="centrality"):
            PipelineArtifact.load(path)

    def test_garbage_file_rejected(self, tmp_path):
        path = tmp_path / "junk.json"
        path.write_text("not json at all {")
        with pytest.raises(DataError, match="JSON"):
            PipelineArtifact.load(path)

    def test_missing_sections_rejected(self, tmp_path, small_artifact):
        path = tmp_path / "artifact.json"
        payload = small_artifact.to_payload()
        del payload["centrality"]
        path.write_text(json.dumps(payload))
        with pytest.raises(DataError, match="malformed"):
            PipelineArtifact.load(path)


class TestRecommend:
    def test_known_user_gets_cluster_candidates(self, small_artifact):
        user = next(u for u, p in small_artifact.profiles.items() if p.preferred)
        ranked = recommend(small_artifact, user, 5)
        assert ranked.user_id == user
        assert len(ranked.entries) <= 5
        preferred = set(small_artifact.profiles[user].preferred)
        assert not preferred & set(ranked.films())
        wanted_clusters = {
            small_artifact.clustering.assignment[f] for f in preferred
        }
        for film in ranked.films():
            assert small_artifact.clustering.assignment[film] in wanted_clusters

    def test_unknown_user_gets_cold_start(self, small_artifact):
        ranked = recommend(small_artifact, "nobody", 3)
        assert is_cold_start(small_artifact, "nobody")
        assert ranked.user_id == "nobody"
        top = sorted(
            small_artifact.centrality.rows,
            key=lambda f: -small_artifact.centrality.ac(f),
        )[:3]
        assert set(ranked.films()) == set(top)

    def test_history_less_user_gets_cold_start(self, small_view):
        from filmrec import ViewMatrix

        entries = small_view.entries()
        # a user whose only watch is 20%: watched, but prefers nothing
        entries[("1", "zzz")] = 0.2
        view = ViewMatrix(entries, films=small_view.films, users=[*small_view.users, "zzz"])
        artifact = run_pipeline_from_view(view, PipelineConfig())
        assert is_cold_start(artifact, "zzz")
        ranked = recommend(artifact, "zzz", 4)
        assert len(ranked.entries) == 4

    def test_k_must_be_positive(self, small_artifact):
        with pytest.raises(DomainError):
            recommend(small_artifact, "anyone", 0)
