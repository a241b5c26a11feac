"""Break the hierarchy on purpose, then let the recommendation queue
point at the damage and repair it. Watch S_Dbw fall."""

from data import write_fixture

from conceptspace import ActionKind, Config, RefinementAction, Session
from conceptspace.refinement import apply, s_dbw

corpus, vectors = write_fixture()
session = Session.create(corpus, vectors, Config(iterations=500))
h = session.hierarchy


def clusters_of(hierarchy):
    return {cw: [session.projection.coords[w]
                 for w in [cw] + hierarchy.concepts[cw].descriptor_words()
                 if w in session.projection.coords]
            for cw in hierarchy.concepts}


print("concepts:", ", ".join(sorted(h.concepts)))
victim = next(w for cw in h.concepts
              for w in h.concepts[cw].descriptor_words())
owner = h.descriptor_owner(victim)
wrong = next(c for c in sorted(h.concepts) if c != owner)
print(f"misfiling '{victim}' from '{owner}' into '{wrong}' ...")
session.apply_action(RefinementAction(
    ActionKind.REASSIGN_PARENT, [victim], destination=wrong))
print(f"S_Dbw after the damage: {s_dbw(clusters_of(session.hierarchy)):.4f}")

queue = session.recommendations()
print(f"\n{len(queue)} recommendations; top of the queue:")
for rec in queue[:3]:
    print(f"  {rec.word}: {rec.action.kind.value} "
          f"(impact {rec.impact:.3f}) - {rec.rationale}")

if queue:
    top = queue[0]
    print(f"\naccepting {top.action.kind.value} on '{top.word}' ...")
    session.apply_action(top.action)
    print(f"S_Dbw after the fix:    {s_dbw(clusters_of(session.hierarchy)):.4f}")

print(f"\naction log has {len(session.action_log)} entries; "
      "each records pre and post hierarchy hashes for replay")
