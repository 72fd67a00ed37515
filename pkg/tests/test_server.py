import json
import threading
import urllib.error
import urllib.request

import pytest

from filmrec import PipelineConfig, SyntheticSpec, generate_synthetic, run_pipeline_from_view
from filmrec.server import create_server, parse_bind


@pytest.fixture(scope="module")
def artifact():
    view = generate_synthetic(
        SyntheticSpec(film_count=10, user_count=16, planted_cluster_count=2, seed=9)
    )
    return run_pipeline_from_view(view, PipelineConfig())


@pytest.fixture(scope="module")
def base_url(artifact):
    server = create_server(artifact, "127.0.0.1", 0)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    yield f"http://{host}:{port}"
    server.shutdown()
    server.server_close()
    thread.join(timeout=5)


def get(url: str):
    with urllib.request.urlopen(url, timeout=10) as response:
        return response.status, json.loads(response.read())


def get_error(url: str) -> tuple[int, dict]:
    try:
        with urllib.request.urlopen(url, timeout=10) as response:
            return response.status, json.loads(response.read())
    except urllib.error.HTTPError as exc:
        return exc.code, json.loads(exc.read())


def test_health(base_url):
    status, payload = get(f"{base_url}/v1/health")
    assert status == 200
    assert payload["status"] == "ok"
    assert payload["films"] == 10


def test_recommendations_for_known_user(base_url, artifact):
    user = next(u for u, p in artifact.profiles.items() if p.preferred)
    status, payload = get(f"{base_url}/v1/users/{user}/recommendations?k=3")
    assert status == 200
    assert payload["user_id"] == user
    assert payload["cold_start"] is False
    assert 0 < len(payload["items"]) <= 3
    assert all(set(item) == {"film_id", "score"} for item in payload["items"])


def test_recommendations_unknown_user_is_cold_start(base_url):
    status, payload = get(f"{base_url}/v1/users/stranger/recommendations?k=4")
    assert status == 200
    assert payload["cold_start"] is True
    assert len(payload["items"]) == 4


def test_identical_requests_identical_responses(base_url):
    url = f"{base_url}/v1/users/stranger/recommendations?k=5"
    assert get(url) == get(url)


def test_similar_films(base_url, artifact):
    film = artifact.similarity.films[0]
    status, payload = get(f"{base_url}/v1/films/{film}/similar?k=3")
    assert status == 200
    assert isinstance(payload, list) and len(payload) == 3
    scores = [item["similarity"] for item in payload]
    assert scores == sorted(scores, reverse=True)
    assert all(item["film_id"] != film for item in payload)


def test_similar_unknown_film_404(base_url):
    status, payload = get_error(f"{base_url}/v1/films/nope/similar")
    assert status == 404
    assert "unknown film" in payload["error"]


def test_malformed_k_400(base_url):
    status, payload = get_error(f"{base_url}/v1/users/u/recommendations?k=banana")
    assert status == 400
    assert "k" in payload["error"]
    status, _ = get_error(f"{base_url}/v1/users/u/recommendations?k=0")
    assert status == 400


def test_unknown_route_404(base_url):
    status, _ = get_error(f"{base_url}/v2/anything")
    assert status == 404


def test_parse_bind():
    assert parse_bind("0.0.0.0:80") == ("0.0.0.0", 80)
    with pytest.raises(ValueError):
        parse_bind("8080")
