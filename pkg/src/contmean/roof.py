"""Edge-pair mean distances as volumes under a lower envelope of planes.

For points at arclength ``x`` on ``e = uv`` (from ``u``) and ``y`` on
``f = u'v'`` (from ``u'``) the distance is the minimum of four affine
functions, one per pair of endpoints the connecting path leaves through.
Each plane's minimization region is a convex polygon: the rectangle
``[0,|e|] x [0,|f|]`` clipped by the half-planes where it beats every other
plane.  Integrating each plane over its region gives the mean exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidParameter
from .graph import Edge
from .shortest_paths import DistanceMatrix
from .tolerance import DEFAULT_TOL, Tolerance

Point = tuple[float, float]


@dataclass(frozen=True)
class Plane:
    """``z = cx * x + cy * y + c0``, the paths through corner ``corner`` of the rectangle."""

    cx: float
    cy: float
    c0: float
    corner: tuple[int, int]
    weight: float

    def __call__(self, x: float, y: float) -> float:
        return self.cx * x + self.cy * y + self.c0


@dataclass(frozen=True)
class Region:
    plane: int
    polygon: tuple[Point, ...]
    area: float
    volume: float


@dataclass(frozen=True)
class RoofDiagram:
    width: float
    height: float
    planes: tuple[Plane, ...]
    regions: tuple[Region, ...]

    @property
    def area(self) -> float:
        return self.width * self.height


def corner_planes(dm: DistanceMatrix, e: Edge, f: Edge) -> list[Plane]:
    """The four candidate planes, in the order (u,u'), (u,v'), (v,u'), (v,v')."""
    le, lf = e.length, f.length
    ru, rv = dm.rows[e.u], dm.rows[e.v]
    out = []
    for p_end, sx, ox in ((e.u, 1.0, 0.0), (e.v, -1.0, le)):
        row = ru if p_end == e.u else rv
        for q_end, sy, oy in ((f.u, 1.0, 0.0), (f.v, -1.0, lf)):
            w = row[q_end]
            out.append(Plane(sx, sy, ox + oy + w, (p_end, q_end), w))
    return out


def _rect(width: float, height: float) -> list[Point]:
    return [(0.0, 0.0), (width, 0.0), (width, height), (0.0, height)]


def _dominated(p: Plane, q: Plane, corners: list[Point], slack: float) -> bool:
    return all(q(x, y) <= p(x, y) + slack for x, y in corners)


def clip_halfplane(poly: list[Point], a: float, b: float, c: float) -> list[Point]:
    """Sutherland-Hodgman clip of a convex polygon to ``a*x + b*y + c <= 0``."""
    if not poly:
        return poly
    out: list[Point] = []
    prev = poly[-1]
    fp = a * prev[0] + b * prev[1] + c
    for cur in poly:
        fc = a * cur[0] + b * cur[1] + c
        if fc <= 0:
            if fp > 0:
                t = fp / (fp - fc)
                out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
            out.append(cur)
        elif fp <= 0:
            t = fp / (fp - fc)
            out.append((prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])))
        prev, fp = cur, fc
    return out


def polygon_area_centroid(poly: list[Point] | tuple[Point, ...]) -> tuple[float, float, float]:
    """Signed-area shoelace; returns ``(area, cx, cy)`` with area >= 0 for CCW input."""
    n = len(poly)
    if n < 3:
        return 0.0, 0.0, 0.0
    # shift to the first vertex for conditioning
    x0, y0 = poly[0]
    a2 = sx = sy = 0.0
    for k in range(1, n - 1):
        x1, y1 = poly[k][0] - x0, poly[k][1] - y0
        x2, y2 = poly[k + 1][0] - x0, poly[k + 1][1] - y0
        cross = x1 * y2 - x2 * y1
        a2 += cross
        sx += cross * (x1 + x2)
        sy += cross * (y1 + y2)
    if a2 == 0:
        return 0.0, x0, y0
    return a2 / 2.0, x0 + sx / (3.0 * a2), y0 + sy / (3.0 * a2)


def build_roof(dm: DistanceMatrix, e: Edge, f: Edge, tol: Tolerance = DEFAULT_TOL) -> RoofDiagram:
    """Lower envelope of the endpoint planes over the ``|e| x |f|`` rectangle."""
    le, lf = e.length, f.length
    corners = _rect(le, lf)
    cand = corner_planes(dm, e, f)
    scale = max(max(p.weight for p in cand), le, lf)
    slack = tol.eps(scale)
    kept: list[Plane] = []
    for k, p in enumerate(cand):
        # drop planes that never attain the minimum (shared endpoints leave two)
        dominated = False
        for kk, q in enumerate(cand):
            if kk == k or not _dominated(p, q, corners, slack):
                continue
            if kk > k and _dominated(q, p, corners, slack):
                continue  # coincident planes: keep the first
            dominated = True
            break
        if not dominated:
            kept.append(p)

    min_area = tol.abs * le * lf
    regions = []
    for k, p in enumerate(kept):
        poly = corners
        for kk, q in enumerate(kept):
            if kk == k:
                continue
            # p <= q  <=>  (p.cx - q.cx) x + (p.cy - q.cy) y + (p.c0 - q.c0) <= 0
            poly = clip_halfplane(poly, p.cx - q.cx, p.cy - q.cy, p.c0 - q.c0)
            if not poly:
                break
        area, cx, cy = polygon_area_centroid(poly)
        if area <= min_area:
            continue
        regions.append(Region(k, tuple(poly), area, area * p(cx, cy)))
    return RoofDiagram(le, lf, tuple(kept), tuple(regions))


def _prism_volume(poly: tuple[Point, ...], plane: Plane) -> float:
    # fan triangulation; a truncated prism over a triangle has volume area * mean corner height
    x0, y0 = poly[0]
    h0 = plane(x0, y0)
    vol = 0.0
    for k in range(1, len(poly) - 1):
        (x1, y1), (x2, y2) = poly[k], poly[k + 1]
        area = 0.5 * ((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0))
        vol += area * (h0 + plane(x1, y1) + plane(x2, y2)) / 3.0
    return vol


def roof_mean(roof: RoofDiagram, method: str = "centroid") -> float:
    """Total volume under the roof divided by the base area.

    ``method="prism"`` recomputes each region's volume by splitting it into
    triangles and averaging corner heights, for differential testing.
    """
    if method == "centroid":
        vol = sum(r.volume for r in roof.regions)
    elif method == "prism":
        vol = sum(_prism_volume(r.polygon, roof.planes[r.plane]) for r in roof.regions)
    else:
        raise ValueError(f"unknown integration method {method!r}")
    return vol / roof.area


def same_edge_mean(length: float) -> float:
    """Mean distance between two points of one segment: ``length / 3``.

    The roof over the square is ``z = |x - y|``, two planes meeting on the diagonal.
    """
    if not length > 0:
        raise InvalidParameter(f"edge length must be positive, got {length!r}")
    return length / 3.0


def roof_pair_mean(dm: DistanceMatrix, e: Edge, f: Edge, tol: Tolerance = DEFAULT_TOL) -> float:
    return roof_mean(build_roof(dm, e, f, tol))
