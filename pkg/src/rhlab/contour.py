"""Oriented composed contours built from segments, truncated rays and circles.

Every arc is parametrized over the reference interval [-1, 1].  Straight arcs
(segments and truncated rays) use the affine map from start to end; full
circles and circular arcs use the angle, traversed in the arc's orientation.
The (+) side of an arc is the side on the left when moving along it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateArc, OverlappingArcs

VERTEX_TOL = 1e-12

STRAIGHT_KINDS = ("segment", "ray")
ROUND_KINDS = ("circle", "arc")


@dataclass(frozen=True)
class Arc:
    """A single oriented arc.

    For straight kinds ``start``/``end`` fix position and orientation.  For
    round kinds ``center``, ``radius``, ``theta0`` and ``sweep`` describe the
    underlying circle; ``orientation`` is +1 for counterclockwise traversal
    and -1 for clockwise.  A full circle has ``sweep = 2*pi``.
    """

    kind: str
    start: complex = 0j
    end: complex = 0j
    center: complex = 0j
    radius: float = 0.0
    theta0: float = 0.0
    sweep: float = 0.0
    orientation: int = 1
    angle: float | None = None
    rmax: float | None = None

    @property
    def is_straight(self) -> bool:
        return self.kind in STRAIGHT_KINDS

    @property
    def is_closed(self) -> bool:
        return self.kind == "circle"

    @property
    def length(self) -> float:
        if self.is_straight:
            return float(abs(self.end - self.start))
        return float(self.radius * self.sweep)

    def _angles(self, t):
        t = np.asarray(t, dtype=float)
        if self.orientation > 0:
            return self.theta0 + self.sweep * (t + 1) / 2
        return self.theta0 + self.sweep - self.sweep * (t + 1) / 2

    def point(self, t):
        """Map reference parameter(s) t in [-1, 1] to the plane."""
        t = np.asarray(t, dtype=float)
        if self.is_straight:
            return self.start + (self.end - self.start) * (t + 1) / 2
        return self.center + self.radius * np.exp(1j * self._angles(t))

    def derivative(self, t):
        """dz/dt along the arc."""
        t = np.asarray(t, dtype=float)
        if self.is_straight:
            return np.full(t.shape, (self.end - self.start) / 2, dtype=complex)
        th = self._angles(t)
        return self.orientation * 1j * self.radius * np.exp(1j * th) * self.sweep / 2

    def endpoints(self):
        if self.is_closed:
            return ()
        return (complex(self.point(-1.0)), complex(self.point(1.0)))

    def to_reference(self, z):
        """Inverse of the straight-arc parametrization (any complex z)."""
        if not self.is_straight:
            raise TypeError("to_reference is defined for straight arcs only")
        z = np.asarray(z, dtype=complex)
        return 2 * (z - self.start) / (self.end - self.start) - 1


def segment(a, b) -> Arc:
    a, b = complex(a), complex(b)
    if abs(a - b) <= VERTEX_TOL:
        raise DegenerateArc(f"segment endpoints coincide at {a}")
    return Arc("segment", start=a, end=b)


def ray(angle: float, rmax: float, outward: bool = True, rmin: float = 0.0) -> Arc:
    if rmax - rmin <= VERTEX_TOL:
        raise DegenerateArc("ray truncation radius must exceed its base radius")
    e = np.exp(1j * angle)
    a, b = rmin * e, rmax * e
    if not outward:
        a, b = b, a
    return Arc("ray", start=complex(a), end=complex(b), angle=float(angle), rmax=float(rmax))


def circle(center=0.0, radius: float = 1.0, orientation: int = 1) -> Arc:
    if radius <= 0:
        raise DegenerateArc("circle radius must be positive")
    return Arc("circle", center=complex(center), radius=float(radius), theta0=0.0,
               sweep=2 * np.pi, orientation=1 if orientation > 0 else -1)


def circular_arc(center, radius: float, theta0: float, theta1: float) -> Arc:
    """Arc of a circle traversed from angle theta0 to theta1 (either direction)."""
    if radius <= 0 or abs(theta1 - theta0) * radius <= VERTEX_TOL:
        raise DegenerateArc("circular arc has zero length")
    if abs(theta1 - theta0) >= 2 * np.pi:
        raise DegenerateArc("circular arc must sweep less than a full turn; use circle()")
    lo, hi = min(theta0, theta1), max(theta0, theta1)
    return Arc("arc", center=complex(center), radius=float(radius), theta0=float(lo),
               sweep=float(hi - lo), orientation=1 if theta1 > theta0 else -1)


@dataclass(frozen=True)
class Vertex:
    point: complex
    # (arc index, +1 if the arc starts here / -1 if it ends here)
    ends: tuple = field(default_factory=tuple)

    @property
    def degree(self) -> int:
        return len(self.ends)


@dataclass(frozen=True)
class Contour:
    arcs: tuple
    vertices: tuple

    def __len__(self):
        return len(self.arcs)

    @property
    def length(self) -> float:
        return float(sum(a.length for a in self.arcs))

    @property
    def radius(self) -> float:
        """Largest distance from the origin reached by the contour."""
        r = 0.0
        for a in self.arcs:
            if a.is_straight:
                r = max(r, abs(a.start), abs(a.end))
            else:
                r = max(r, abs(a.center) + a.radius)
        return r


# ---------------------------------------------------------------------------
# intersections

def _angle_in_arc(arc: Arc, theta: float, tol: float) -> bool:
    if arc.kind == "circle":
        return True
    d = (theta - arc.theta0) % (2 * np.pi)
    return d <= arc.sweep + tol / arc.radius or d >= 2 * np.pi - tol / arc.radius


def _is_endpoint(arc: Arc, z: complex, tol: float) -> bool:
    return any(abs(z - e) <= tol for e in arc.endpoints())


def _straight_straight(a: Arc, b: Arc, tol: float):
    p, r = a.start, a.end - a.start
    q, s = b.start, b.end - b.start
    cross = (r.conjugate() * s).imag
    qp = q - p
    if abs(cross) <= tol * abs(r) * abs(s):
        # parallel: overlapping only if collinear with a shared interior stretch
        if abs((r.conjugate() * qp).imag) > tol * abs(r):
            return []
        t0 = (qp * r.conjugate()).real / abs(r) ** 2
        t1 = ((qp + s) * r.conjugate()).real / abs(r) ** 2
        lo, hi = max(0.0, min(t0, t1)), min(1.0, max(t0, t1))
        if hi - lo > tol / abs(r):
            return None  # overlap along a stretch
        if hi - lo >= -tol / abs(r):
            return [p + lo * r]
        return []
    t = (qp.conjugate() * s).imag / cross
    u = (qp.conjugate() * r).imag / cross
    eps_t, eps_u = tol / abs(r), tol / abs(s)
    if -eps_t <= t <= 1 + eps_t and -eps_u <= u <= 1 + eps_u:
        return [p + t * r]
    return []


def _straight_round(a: Arc, c: Arc, tol: float):
    p, d = a.start - c.center, a.end - a.start
    A = abs(d) ** 2
    B = 2 * (p.conjugate() * d).real
    C = abs(p) ** 2 - c.radius ** 2
    disc = B * B - 4 * A * C
    if disc < -tol * A:
        return []
    sq = np.sqrt(max(disc, 0.0))
    pts = []
    for t in {(-B - sq) / (2 * A), (-B + sq) / (2 * A)}:
        if -tol / np.sqrt(A) <= t <= 1 + tol / np.sqrt(A):
            z = a.start + t * d
            if _angle_in_arc(c, np.angle(z - c.center), tol):
                pts.append(z)
    return pts


def _round_round(a: Arc, b: Arc, tol: float):
    d = b.center - a.center
    dist = abs(d)
    if dist <= tol and abs(a.radius - b.radius) <= tol:
        # same circle: overlap unless the angular ranges only touch
        if a.kind == "circle" or b.kind == "circle":
            return None
        n = 2048
        th = a.theta0 + a.sweep * (np.arange(n) + 0.5) / n
        if any(_angle_in_arc(b, x, -tol) for x in th):
            return None
        pts = [e for e in a.endpoints() if _is_endpoint(b, e, tol)]
        return pts
    if dist > a.radius + b.radius + tol or dist < abs(a.radius - b.radius) - tol or dist <= tol:
        return []
    x = (dist ** 2 + a.radius ** 2 - b.radius ** 2) / (2 * dist)
    h = np.sqrt(max(a.radius ** 2 - x ** 2, 0.0))
    base = a.center + x * d / dist
    pts = []
    for sgn in (1, -1):
        z = base + sgn * 1j * h * d / dist
        if _angle_in_arc(a, np.angle(z - a.center), tol) and _angle_in_arc(b, np.angle(z - b.center), tol):
            pts.append(z)
    return pts


def _intersections(a: Arc, b: Arc, tol: float):
    if a.is_straight and b.is_straight:
        return _straight_straight(a, b, tol)
    if a.is_straight:
        return _straight_round(a, b, tol)
    if b.is_straight:
        return _straight_round(b, a, tol)
    return _round_round(a, b, tol)


def build_contour(spec) -> Contour:
    """Validate a list of arcs (or declarative dicts) and build the vertex table.

    Raises OverlappingArcs when two arcs meet anywhere other than at shared
    endpoints.
    """
    arcs = tuple(a if isinstance(a, Arc) else arc_from_dict(a) for a in spec)
    tol = VERTEX_TOL
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            pts = _intersections(arcs[i], arcs[j], tol)
            if pts is None:
                raise OverlappingArcs(f"arcs {i} and {j} overlap along a stretch")
            for z in pts:
                if not (_is_endpoint(arcs[i], z, 1e3 * tol) and _is_endpoint(arcs[j], z, 1e3 * tol)):
                    raise OverlappingArcs(f"arcs {i} and {j} intersect at interior point {z:.6g}")
    # vertices: endpoint clusters shared by at least two arc ends
    ends = []
    for k, a in enumerate(arcs):
        for sign, z in zip((+1, -1), a.endpoints()):
            ends.append((z, k, sign))
    clusters: list[list] = []
    for z, k, sign in ends:
        for cl in clusters:
            if abs(cl[0][0] - z) <= tol:
                cl.append((z, k, sign))
                break
        else:
            clusters.append([(z, k, sign)])
    vertices = tuple(Vertex(point=cl[0][0], ends=tuple((k, s) for _, k, s in cl))
                     for cl in clusters if len(cl) >= 2)
    return Contour(arcs=arcs, vertices=vertices)


def _cplx(v):
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


def arc_from_dict(d: dict) -> Arc:
    """Build an arc from the declarative JSON schema.

    ``{"kind": "segment", "endpoints": [[x0, y0], [x1, y1]], "orientation": "forward"}``
    ``{"kind": "circle", "center": [x, y], "radius": r, "orientation": "ccw"}``
    ``{"kind": "ray", "angle": a, "rmax": R, "orientation": "outward"}``
    """
    if not isinstance(d, dict) or "kind" not in d:
        raise ValueError("arc entry must be an object with a 'kind' field")
    kind = d["kind"]
    orient = d.get("orientation")
    if kind == "segment":
        a, b = (_cplx(e) for e in d["endpoints"])
        if orient in ("reverse", "backward"):
            a, b = b, a
        return segment(a, b)
    if kind == "ray":
        return ray(float(d["angle"]), float(d["rmax"]), outward=(orient or "outward") == "outward",
                   rmin=float(d.get("rmin", 0.0)))
    if kind == "circle":
        o = -1 if orient in ("cw", "clockwise") else 1
        return circle(_cplx(d.get("center", 0.0)), float(d["radius"]), o)
    if kind == "arc":
        th = d["angles"]
        return circular_arc(_cplx(d.get("center", 0.0)), float(d["radius"]), float(th[0]), float(th[1]))
    raise ValueError(f"unknown arc kind {kind!r}")


# ---------------------------------------------------------------------------
# discretization

def chebyshev_points(n: int) -> np.ndarray:
    """First-kind Chebyshev points on (-1, 1) in increasing order."""
    k = np.arange(n)
    return -np.cos(np.pi * (2 * k + 1) / (2 * n))


def collocation_nodes(arc: Arc, n: int) -> np.ndarray:
    """Interior collocation nodes of an arc.

    Open arcs get first-kind Chebyshev points (never the endpoints), ordered
    along the orientation.  Full circles get n equispaced angles starting at
    angle 0, listed counterclockwise regardless of orientation.
    """
    if n < 2:
        raise ValueError("need at least two nodes")
    if arc.kind == "circle":
        return arc.center + arc.radius * np.exp(2j * np.pi * np.arange(n) / n)
    return arc.point(chebyshev_points(n))


def arclength_speed(arc: Arc, t) -> np.ndarray:
    """|dz/ds| after reparametrizing by arc length (should be 1)."""
    t = np.asarray(t, dtype=float)
    dz = arc.derivative(t)
    ds_dt = arc.length / 2
    return np.abs(dz) / ds_dt


# ---------------------------------------------------------------------------
# Carleson constant estimate

def _length_in_disk(arc: Arc, z: complex, r: float) -> float:
    if arc.is_straight:
        p, d = arc.start - z, arc.end - arc.start
        A = abs(d) ** 2
        B = 2 * (p.conjugate() * d).real
        C = abs(p) ** 2 - r * r
        disc = B * B - 4 * A * C
        if disc <= 0:
            return 0.0
        sq = np.sqrt(disc)
        lo = max(0.0, (-B - sq) / (2 * A))
        hi = min(1.0, (-B + sq) / (2 * A))
        return max(0.0, hi - lo) * np.sqrt(A)
    w = z - arc.center
    R = arc.radius
    aw = abs(w)
    if aw < 1e-300:
        return arc.length if r >= R else 0.0
    kappa = (R * R + aw * aw - r * r) / (2 * R * aw)
    if kappa >= 1:
        return 0.0
    if kappa <= -1:
        return arc.length
    half = np.arccos(kappa)
    if arc.kind == "circle":
        return 2 * half * R
    s = (np.angle(w) - half - arc.theta0) % (2 * np.pi)
    total = 0.0
    for start in (s, s - 2 * np.pi):
        lo, hi = max(start, 0.0), min(start + 2 * half, arc.sweep)
        total += max(0.0, hi - lo)
    return total * R


def carleson_constant(contour: Contour, radii, probe_points: int = 33):
    """Lower estimate of sup over (z on contour, r > 0) of length(contour ∩ D_r(z)) / r.

    Probe centres are ``probe_points`` equally spaced parameter values per arc
    (endpoints included).  Returns ``(lambda_hat, z_best, r_best)``.
    """
    t = np.linspace(-1, 1, probe_points)
    best = (0.0, None, None)
    for arc in contour.arcs:
        for z in np.atleast_1d(arc.point(t)):
            for r in radii:
                val = sum(_length_in_disk(a, complex(z), float(r)) for a in contour.arcs) / r
                if val > best[0]:
                    best = (val, complex(z), float(r))
    return best
