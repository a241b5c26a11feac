"""Run the whole pipeline once and look at every intermediate product:
corpus statistics, seed concepts, the anchored projection, the concept
hierarchy and the topic model it induces."""

from data import write_fixture

from conceptspace import Config, Session

corpus, vectors = write_fixture()
config = Config(iterations=500)  # full 5000 is overkill for 8 utterances

print("building session from", corpus.name, "...")
session = Session.create(corpus, vectors, config)

print("\n--- corpus ---")
print(f"{session.stats.n_docs} documents, "
      f"{len(session.stats.vocabulary)} vocabulary entries, "
      f"{session.stats.total_tokens} tokens")

print("\n--- concept hierarchy ---")
for sc in session.hierarchy.super_concepts:
    print(f"[{sc.label}]")
    for cw in sc.concepts:
        desc = ", ".join(session.hierarchy.concepts[cw].descriptor_words()[:6])
        print(f"  {cw}: {desc}")
print(f"base words: {len(session.hierarchy.base_words)}")

print("\n--- projection ---")
for cw in sorted(session.hierarchy.concepts):
    x, y = session.projection.coords[cw]
    print(f"  {cw:12s} ({x:6.3f}, {y:6.3f})  <- anchored")

print("\n--- topics ---")
cases = session.topic_cases()
for topic in session.topic_model.topics:
    words = ", ".join(w for w, _ in topic.top_keywords(5))
    print(f"topic {topic.id} ({cases.get(topic.id, '?')}): "
          f"{len(topic.doc_ids)} docs | {words}")

print("\n--- quality ---")
for key, value in session.quality()["topic_model"].items():
    print(f"  {key:18s} {value:8.4f}")
