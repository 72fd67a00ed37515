"""Read-only recommendation serving over HTTP.

Builds an artifact, serves it from a background thread, and exercises the
three endpoints the way a client would.
"""

import json
import threading
import urllib.request

from filmrec import PipelineConfig, SyntheticSpec, generate_synthetic, run_pipeline_from_view
from filmrec.server import create_server

view = generate_synthetic(SyntheticSpec(film_count=20, user_count=60, planted_cluster_count=3, seed=2))
artifact = run_pipeline_from_view(view, PipelineConfig())

server = create_server(artifact, "127.0.0.1", 0)
thread = threading.Thread(target=server.serve_forever, daemon=True)
thread.start()
host, port = server.server_address[:2]
base = f"http://{host}:{port}"
print(f"serving artifact on {base}")


def get(path: str):
    with urllib.request.urlopen(base + path, timeout=10) as response:
        return json.loads(response.read())


print("\nGET /v1/health")
print(" ", get("/v1/health"))

user = next(u for u, p in artifact.profiles.items() if p.preferred)
print(f"\nGET /v1/users/{user}/recommendations?k=5")
payload = get(f"/v1/users/{user}/recommendations?k=5")
print(f"  cold_start={payload['cold_start']}")
for item in payload["items"]:
    print(f"  film {item['film_id']}: {item['score']:+.4f}")

print("\nGET /v1/users/someone-new/recommendations?k=3  (unknown user)")
payload = get("/v1/users/someone-new/recommendations?k=3")
print(f"  cold_start={payload['cold_start']}, items={[i['film_id'] for i in payload['items']]}")

film = artifact.similarity.films[0]
print(f"\nGET /v1/films/{film}/similar?k=5")
for item in get(f"/v1/films/{film}/similar?k=5"):
    print(f"  film {item['film_id']}: similarity {item['similarity']:.4f}")

server.shutdown()
server.server_close()
print("\nserver stopped")
