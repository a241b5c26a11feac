"""Canvas mapping: viewport rescaling, label overlap reduction,
position-derived LAB coloring and super-concept Voronoi cells."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import DegenerateExtent
from .hierarchy import ConceptHierarchy
from .quadtree import QuadTree
from .spatialization import Projection2D

# label height per hierarchy layer: doubled going up
SIZE_CLASS = {
    "BASE": 1.0,
    "KEYWORD": 2.0,
    "DESCRIPTOR": 2.0,
    "DOCUMENT": 4.0,
    "CONCEPT": 4.0,
    "TOPIC": 8.0,
    "SUPER_CONCEPT": 8.0,
}
CHAR_WIDTH = 0.6  # of the size class, fixed-width label model
MAX_OVERLAP_ITERATIONS = 50
CANVAS_UNIT = 0.01  # one size-class unit in viewport coordinates


@dataclass
class CanvasObject:
    id: str
    layer: str
    x: float
    y: float
    w: float
    h: float
    color: str = "#000000"

    @property
    def box(self) -> tuple[float, float, float, float]:
        return (self.x - self.w / 2, self.y - self.h / 2,
                self.x + self.w / 2, self.y + self.h / 2)


def make_object(word: str, layer: str, x: float, y: float) -> CanvasObject:
    size = SIZE_CLASS[layer] * CANVAS_UNIT
    return CanvasObject(word, layer, x, y,
                        w=max(len(word), 1) * CHAR_WIDTH * size, h=size)


def rescale(proj: Projection2D, width: float = 1.0,
            height: float = 1.0) -> Projection2D:
    """Affine map putting the coordinate extent exactly onto the viewport."""
    xs = [p[0] for p in proj.coords.values()]
    ys = [p[1] for p in proj.coords.values()]
    if not xs:
        raise DegenerateExtent("empty projection")
    sx, sy = max(xs) - min(xs), max(ys) - min(ys)
    if sx == 0 and sy == 0 and len(xs) > 1:
        raise DegenerateExtent("all points coincident")

    def map_axis(v, lo, span, out):
        return (v - lo) / span * out if span > 0 else out / 2

    coords = {
        w: (map_axis(x, min(xs), sx, width), map_axis(y, min(ys), sy, height))
        for w, (x, y) in proj.coords.items()
    }
    anchors = {w: coords[w] for w in proj.anchors if w in coords}
    return Projection2D(coords=coords, anchors=anchors, kl_trace=dict(proj.kl_trace))


def _overlap_area(a: CanvasObject, b: CanvasObject) -> float:
    ax0, ay0, ax1, ay1 = a.box
    bx0, by0, bx1, by1 = b.box
    w = min(ax1, bx1) - max(ax0, bx0)
    h = min(ay1, by1) - max(ay0, by0)
    return w * h if w > 0 and h > 0 else 0.0


def total_overlap(objects: list[CanvasObject]) -> float:
    return sum(_overlap_area(a, b)
               for i, a in enumerate(objects) for b in objects[i + 1:])


def reduce_overlap(objects: list[CanvasObject],
                   qt: QuadTree | None = None,
                   viewport: tuple[float, float] = (1.0, 1.0),
                   max_iterations: int = MAX_OVERLAP_ITERATIONS
                   ) -> list[CanvasObject]:
    """Push overlapping boxes apart symmetrically until overlap-free or the
    iteration budget runs out; overlap area never increases and objects
    never leave the viewport."""
    objs = [replace(o) for o in objects]
    vw, vh = viewport

    def clamp(o: CanvasObject) -> None:
        o.x = min(max(o.x, o.w / 2), vw - o.w / 2)
        o.y = min(max(o.y, o.h / 2), vh - o.h / 2)

    for _ in range(max_iterations):
        before = total_overlap(objs)
        if before == 0:
            break
        snapshot = [(o.x, o.y) for o in objs]
        for i, a in enumerate(objs):
            for b in objs[i + 1:]:
                if _overlap_area(a, b) == 0:
                    continue
                dx, dy = b.x - a.x, b.y - a.y
                dist = math.hypot(dx, dy)
                if dist == 0:
                    dx, dy, dist = 1.0, 0.0, 1.0  # coincident: push along x
                ux, uy = dx / dist, dy / dist
                ax0, ay0, ax1, ay1 = a.box
                bx0, by0, bx1, by1 = b.box
                pen = min(min(ax1, bx1) - max(ax0, bx0),
                          min(ay1, by1) - max(ay0, by0))
                step = pen / 2 + 1e-6
                a.x -= ux * step / 2
                a.y -= uy * step / 2
                b.x += ux * step / 2
                b.y += uy * step / 2
                clamp(a)
                clamp(b)
        if total_overlap(objs) > before:
            for (x, y), o in zip(snapshot, objs):
                o.x, o.y = x, y
            break
    return objs


def _lab_to_srgb_hex(l: float, a: float, b: float) -> str:
    """D65 CIELAB to sRGB with gamut clamping."""
    fy = (l + 16) / 116
    fx = fy + a / 500
    fz = fy - b / 200

    def finv(t):
        return t ** 3 if t > 6 / 29 else 3 * (6 / 29) ** 2 * (t - 4 / 29)

    xn, yn, zn = 0.95047, 1.0, 1.08883
    x, y, z = xn * finv(fx), yn * finv(fy), zn * finv(fz)
    r = 3.2406 * x - 1.5372 * y - 0.4986 * z
    g = -0.9689 * x + 1.8758 * y + 0.0415 * z
    bl = 0.0557 * x - 0.2040 * y + 1.0570 * z

    def gamma(c):
        c = min(max(c, 0.0), 1.0)
        return 12.92 * c if c <= 0.0031308 else 1.055 * c ** (1 / 2.4) - 0.055

    return "#{:02x}{:02x}{:02x}".format(
        *(round(gamma(c) * 255) for c in (r, g, bl)))


LAB_LIGHTNESS = 60.0
LAB_RANGE = 80.0


def position_color(x: float, y: float,
                   viewport: tuple[float, float] = (1.0, 1.0)) -> str:
    a = (x / viewport[0] * 2 - 1) * LAB_RANGE
    b = (y / viewport[1] * 2 - 1) * LAB_RANGE
    return _lab_to_srgb_hex(LAB_LIGHTNESS, a, b)


def assign_colors(h: ConceptHierarchy, proj: Projection2D,
                  viewport: tuple[float, float] = (1.0, 1.0)) -> dict[str, str]:
    """Concept color is a pure function of its position; descriptors
    inherit the parent concept's color byte-exactly."""
    colors: dict[str, str] = {}
    for cw, concept in h.concepts.items():
        x, y = proj.coords.get(cw, (viewport[0] / 2, viewport[1] / 2))
        color = position_color(x, y, viewport)
        colors[cw] = color
        for d in concept.descriptors:
            colors[d.word] = color
    return colors


def color_conflicts(h: ConceptHierarchy, proj: Projection2D, qt: QuadTree,
                    k: int = 6) -> set[str]:
    """Descriptors whose parent disagrees with the modal parent of their
    k spatial neighbors — the double-encoding outlier signal."""
    parent: dict[str, str] = {}
    for cw, concept in h.concepts.items():
        parent[cw] = cw
        for d in concept.descriptors:
            parent[d.word] = cw
    flagged: set[str] = set()
    for w, own in parent.items():
        if w in h.concepts or w not in qt.coords:
            continue
        neighbors = [n for n, _ in qt.knn(qt.coords[w], k, exclude={w})
                     if n in parent]
        if not neighbors:
            continue
        counts: dict[str, int] = {}
        for n in neighbors:
            counts[parent[n]] = counts.get(parent[n], 0) + 1
        modal = min(p for p, c in counts.items() if c == max(counts.values()))
        if modal != own:
            flagged.add(w)
    return flagged


@dataclass
class VoronoiDiagram:
    sites: dict[str, tuple[float, float]]
    cells: dict[str, list[tuple[float, float]]] = field(default_factory=dict)


def _clip_halfplane(poly: list[tuple[float, float]], nx: float, ny: float,
                    c: float) -> list[tuple[float, float]]:
    """Keep the part of poly with nx*x + ny*y <= c (Sutherland-Hodgman)."""
    out: list[tuple[float, float]] = []
    n = len(poly)
    for i in range(n):
        px, py = poly[i]
        qx, qy = poly[(i + 1) % n]
        pin = nx * px + ny * py <= c
        qin = nx * qx + ny * qy <= c
        if pin:
            out.append((px, py))
        if pin != qin:
            denom = nx * (qx - px) + ny * (qy - py)
            t = (c - nx * px - ny * py) / denom
            out.append((px + t * (qx - px), py + t * (qy - py)))
    return out


def voronoi(sites: dict[str, tuple[float, float]],
            viewport: tuple[float, float] = (1.0, 1.0)) -> VoronoiDiagram:
    """Cell of each site = viewport clipped by the bisector half-planes
    against every other site. Coincident sites get a tiny deterministic
    perturbation first."""
    vw, vh = viewport
    placed: dict[str, tuple[float, float]] = {}
    seen: set[tuple[float, float]] = set()
    for name in sorted(sites):
        x, y = sites[name]
        bump = 0
        while (x, y) in seen:
            bump += 1
            x, y = x + 1e-9 * bump, y + 1e-9 * bump
        seen.add((x, y))
        placed[name] = (x, y)

    diagram = VoronoiDiagram(sites=placed)
    box = [(0.0, 0.0), (vw, 0.0), (vw, vh), (0.0, vh)]
    for name, (sx, sy) in placed.items():
        poly = list(box)
        for other, (ox, oy) in placed.items():
            if other == name or not poly:
                continue
            nx, ny = ox - sx, oy - sy
            c = (ox * ox + oy * oy - sx * sx - sy * sy) / 2
            poly = _clip_halfplane(poly, nx, ny, c)
        diagram.cells[name] = poly
    return diagram


def polygon_area(poly: list[tuple[float, float]]) -> float:
    if len(poly) < 3:
        return 0.0
    s = 0.0
    for i in range(len(poly)):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % len(poly)]
        s += x0 * y1 - x1 * y0
    return abs(s) / 2


def export_layout(objects: list[CanvasObject], diagram: VoronoiDiagram,
                  path: str | Path | None = None) -> dict:
    data = {
        "objects": [
            {"id": o.id, "layer": o.layer, "x": o.x, "y": o.y,
             "w": o.w, "h": o.h, "color": o.color}
            for o in objects
        ],
        "voronoi": [
            {"site": name, "polygon": [list(p) for p in poly]}
            for name, poly in diagram.cells.items()
        ],
    }
    if path is not None:
        Path(path).write_text(json.dumps(data, indent=1))
    return data
