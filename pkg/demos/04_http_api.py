"""Exercise the HTTP surface end to end through an in-process client.
The same endpoints serve a browser frontend; `python -m conceptspace
--corpus ... --embeddings ... --port 8000` runs the real server."""

from data import write_fixture
from fastapi.testclient import TestClient

from conceptspace.service import create_app

corpus, vectors = write_fixture()
client = TestClient(create_app())

resp = client.post("/sessions", json={
    "corpus_path": str(corpus),
    "embeddings_path": str(vectors),
    "config": {"iterations": 500},
})
sid = resp.json()["id"]
print("session:", sid)

state = client.get(f"/sessions/{sid}/state").json()
print(f"generation {state['generation']}, "
      f"{len(state['layout']['objects'])} canvas objects, "
      f"{len(state['layout']['voronoi'])} voronoi cells")

topics = client.get(f"/sessions/{sid}/state", params={"view": "topic"}).json()
for t in topics["topics"]["topics"]:
    print(f"  topic {t['id']} [{t['case']}]: "
          + ", ".join(k["word"] for k in t["top_keywords"][:4]))

hits = client.get(f"/sessions/{sid}/search", params={"q": "tax"}).json()
print("\nsearch 'tax':", [h["word"] for h in hits["results"]])

xray = client.get(f"/sessions/{sid}/xray",
                  params={"x": 0.5, "y": 0.5, "r": 0.4}).json()
print("x-ray at center:", {k: len(v) for k, v in xray.items() if v})

print("\nabstraction level up and back:")
print(" ", client.put(f"/sessions/{sid}/abstraction", json={"level": 1}).json())
print(" ", client.put(f"/sessions/{sid}/abstraction", json={"level": 0}).json())

quality = client.get(f"/sessions/{sid}/quality").json()
print(f"\nrmsstd={quality['rmsstd']:.4f} s_dbw={quality['s_dbw']:.4f}")

recs = client.get(f"/sessions/{sid}/recommendations").json()
print(f"{len(recs['recommendations'])} recommendations waiting")
