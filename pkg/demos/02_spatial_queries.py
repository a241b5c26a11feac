"""The spatial toolbox on its own: quadtree nearest neighbors, region
and radius queries, and the super-concept Voronoi tessellation."""

import random

from conceptspace import QuadTree, voronoi
from conceptspace.layout import polygon_area

rng = random.Random(0)
coords = {f"word{i:03d}": (rng.random(), rng.random()) for i in range(300)}
qt = QuadTree(coords)

q = (0.5, 0.5)
print("6 nearest neighbors of the canvas center:")
for word, dist in qt.knn(q, 6):
    print(f"  {word}  d={dist:.4f}")

inside = qt.region_query(0.4, 0.4, 0.6, 0.6)
print(f"\n{len(inside)} words in the central 0.2 x 0.2 box")

hits = qt.radius_query(q, 0.1)
print(f"{len(hits)} words within radius 0.1 of the center")

print("\nvoronoi over ten sites:")
sites = {f"s{i}": (rng.random(), rng.random()) for i in range(10)}
diagram = voronoi(sites)
total = 0.0
for name in sorted(diagram.cells):
    area = polygon_area(diagram.cells[name])
    total += area
    print(f"  {name}: {len(diagram.cells[name])} vertices, area {area:.4f}")
print(f"  cells tile the viewport: total area = {total:.6f}")
