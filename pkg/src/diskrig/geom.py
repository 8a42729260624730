"""Exact-tolerance primitives for disks in the plane.

Points are complex numbers; disks are (center, radius) pairs.  All predicates
classify with the fixed tolerance EPS_GEOM so that downstream discrete case
analysis is stable.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import AngleUndefined, DegenerateTriple, NotTransverse

EPS_GEOM = 1e-9
EPS_ANGLE = 1e-7

Point = complex


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        if not (self.radius > EPS_GEOM):
            raise ValueError(f"radius must exceed {EPS_GEOM}: {self.radius}")
        if not (math.isfinite(self.center.real) and math.isfinite(self.center.imag)):
            raise ValueError("center must be finite")

    def point_at(self, theta: float) -> complex:
        return self.center + self.radius * np.exp(1j * theta)

    def angle_of(self, z: complex) -> float:
        return float(np.angle(z - self.center))

    def contains(self, z: complex, *, strict: bool = False) -> bool:
        d = abs(z - self.center)
        if strict:
            return d < self.radius - EPS_GEOM
        return d <= self.radius + EPS_GEOM


class DiskRelation(enum.Enum):
    DISJOINT = "Disjoint"
    EXTERNALLY_TANGENT = "ExternallyTangent"
    OVERLAPPING = "Overlapping"
    INTERNALLY_TANGENT = "InternallyTangent"
    FIRST_CONTAINS_SECOND = "FirstContainsSecond"
    SECOND_CONTAINS_FIRST = "SecondContainsFirst"
    EQUAL = "Equal"


def disk_relation(a: Disk, b: Disk) -> DiskRelation:
    """Classify the ordered pair by center distance vs radius sums/differences."""
    d = abs(a.center - b.center)
    if d <= EPS_GEOM and abs(a.radius - b.radius) <= EPS_GEOM:
        return DiskRelation.EQUAL
    if abs(d - (a.radius + b.radius)) <= EPS_GEOM:
        return DiskRelation.EXTERNALLY_TANGENT
    if d > a.radius + b.radius:
        return DiskRelation.DISJOINT
    if abs(d - abs(a.radius - b.radius)) <= EPS_GEOM:
        return DiskRelation.INTERNALLY_TANGENT
    if d < abs(a.radius - b.radius):
        if a.radius > b.radius:
            return DiskRelation.FIRST_CONTAINS_SECOND
        return DiskRelation.SECOND_CONTAINS_FIRST
    return DiskRelation.OVERLAPPING


def overlaps(a: Disk, b: Disk) -> bool:
    return disk_relation(a, b) is DiskRelation.OVERLAPPING


def meets(a: Disk, b: Disk) -> bool:
    return disk_relation(a, b) in (
        DiskRelation.OVERLAPPING,
        DiskRelation.EXTERNALLY_TANGENT,
    )


def overlap_angle(a: Disk, b: Disk) -> float:
    """External intersection angle of an overlapping or tangent pair, in [0, pi)."""
    rel = disk_relation(a, b)
    if rel is DiskRelation.EXTERNALLY_TANGENT:
        return 0.0
    if rel is not DiskRelation.OVERLAPPING:
        raise AngleUndefined(f"pair is {rel.value}; overlap angle needs contact")
    d = abs(a.center - b.center)
    x = (d * d - a.radius * a.radius - b.radius * b.radius) / (2 * a.radius * b.radius)
    return float(np.arccos(np.clip(x, -1.0, 1.0)))


def circle_intersections(a: Disk, b: Disk) -> tuple[complex, complex]:
    """Ordered pair (u, v): u is where the positively-oriented boundary of a
    enters b, v is where the boundary of b enters a."""
    if disk_relation(a, b) is not DiskRelation.OVERLAPPING:
        raise NotTransverse("boundaries do not cross at two distinct points")
    d = abs(b.center - a.center)
    along = (a.radius**2 - b.radius**2 + d * d) / (2 * d)
    h2 = a.radius**2 - along**2
    if h2 <= (EPS_GEOM * max(a.radius, 1.0)) ** 2:
        raise NotTransverse("near-tangent crossing")
    h = math.sqrt(h2)
    axis = (b.center - a.center) / d
    mid = a.center + along * axis
    p, q = mid + 1j * axis * h, mid - 1j * axis * h
    # CCW tangent of circle a at z is i*(z - c_a); entering b means heading
    # toward b's center.
    tang = 1j * (p - a.center)
    if (tang.conjugate() * (b.center - p)).real > 0:
        return p, q
    return q, p


def tangency_point(a: Disk, b: Disk) -> complex:
    d = abs(b.center - a.center)
    if abs(d - (a.radius + b.radius)) > 10 * EPS_GEOM * max(1.0, d):
        raise NotTransverse("disks are not externally tangent")
    return a.center + (b.center - a.center) * (a.radius / d)


def tangent_angle_oracle(a: Disk, b: Disk) -> float:
    """Overlap angle measured from boundary tangent vectors at the corner u:
    pi minus the unsigned angle between the two CCW tangents."""
    u, _ = circle_intersections(a, b)
    ta = 1j * (u - a.center)
    tb = 1j * (u - b.center)
    cosang = (ta.conjugate() * tb).real / (abs(ta) * abs(tb))
    return math.pi - float(np.arccos(np.clip(cosang, -1.0, 1.0)))


def triple_intersection_nonempty(a: Disk, b: Disk, c: Disk) -> bool:
    """Whether the three closed disks share a common point.

    Uses the boundary-point criterion: valid when no disk of the triple
    contains another, which the configuration invariant guarantees.  Tangency
    points count as witnesses.
    """
    disks = (a, b, c)
    for i in range(3):
        for j in range(i + 1, 3):
            rel = disk_relation(disks[i], disks[j])
            if rel in (
                DiskRelation.FIRST_CONTAINS_SECOND,
                DiskRelation.SECOND_CONTAINS_FIRST,
                DiskRelation.INTERNALLY_TANGENT,
                DiskRelation.EQUAL,
            ):
                raise DegenerateTriple(f"containment between disks {i} and {j}")
    for i, j, k in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
        di, dj, dk = disks[i], disks[j], disks[k]
        rel = disk_relation(di, dj)
        if rel is DiskRelation.OVERLAPPING:
            witnesses = circle_intersections(di, dj)
        elif rel is DiskRelation.EXTERNALLY_TANGENT:
            witnesses = (tangency_point(di, dj),)
        else:
            continue
        if any(dk.contains(w) for w in witnesses):
            return True
    return False


# --- circular arcs and two-disk regions -------------------------------------


@dataclass(frozen=True)
class Arc:
    """CCW arc of a circle from angle a0 spanning da in (0, 2*pi]."""

    disk: Disk
    a0: float
    da: float

    def point(self, t):
        return self.disk.center + self.disk.radius * np.exp(1j * (self.a0 + self.da * np.asarray(t)))

    @property
    def start(self) -> complex:
        return complex(self.point(0.0))

    @property
    def end(self) -> complex:
        return complex(self.point(1.0))

    def length(self) -> float:
        return self.disk.radius * self.da


def arc_between(disk: Disk, za: complex, zb: complex) -> Arc:
    """CCW arc of disk's boundary from za to zb (points assumed on the circle)."""
    a0 = disk.angle_of(za)
    da = (disk.angle_of(zb) - a0) % (2 * math.pi)
    if da == 0.0:
        da = 2 * math.pi
    return Arc(disk, a0, da)


def arc_contains_angle(arc: Arc, theta: float, margin: float = 0.0) -> bool:
    t = (theta - arc.a0) % (2 * math.pi)
    return margin <= t <= arc.da - margin


def arc_circle_crossings(arc: Arc, other: Disk) -> list[complex]:
    """Transverse crossing points of the arc with the other disk's boundary."""
    if disk_relation(arc.disk, other) is not DiskRelation.OVERLAPPING:
        return []
    pts = circle_intersections(arc.disk, other)
    out = []
    for p in pts:
        if arc_contains_angle(arc, arc.disk.angle_of(p)):
            out.append(p)
    return out


def arc_in_disk(arc: Arc, other: Disk) -> bool:
    """Whether the closed arc lies inside the closed disk `other`.

    Exact: the distance to other's center is extremal at the arc endpoints or
    at the point of the carrier circle radially opposite other's center.
    """
    cands = [arc.start, arc.end]
    if abs(arc.disk.center - other.center) > EPS_GEOM:
        away = arc.disk.angle_of(arc.disk.center + (arc.disk.center - other.center))
        if arc_contains_angle(arc, away):
            cands.append(arc.disk.point_at(away))
    return all(other.contains(z) for z in cands)


@dataclass(frozen=True)
class Lens:
    """Closed intersection A cap B of two overlapping disks."""

    a: Disk
    b: Disk

    @property
    def corners(self) -> tuple[complex, complex]:
        return circle_intersections(self.a, self.b)

    def boundary_arcs(self) -> tuple[Arc, Arc]:
        u, v = self.corners
        return arc_between(self.a, u, v), arc_between(self.b, v, u)

    def contains(self, z: complex, *, strict: bool = False) -> bool:
        return self.a.contains(z, strict=strict) and self.b.contains(z, strict=strict)

    def sample_point(self) -> complex:
        u, v = self.corners
        return (u + v) / 2


@dataclass(frozen=True)
class Lune:
    """Closed difference A \\ int(B) of two overlapping disks."""

    a: Disk
    b: Disk

    def boundary_arcs(self) -> tuple[Arc, Arc]:
        u, v = circle_intersections(self.a, self.b)
        # part of the boundary of a outside b, plus part of boundary of b
        # inside a traversed backwards; as unoriented arcs:
        return arc_between(self.a, v, u), arc_between(self.b, v, u)

    def contains(self, z: complex, *, strict: bool = False) -> bool:
        if strict:
            return self.a.contains(z, strict=True) and not self.b.contains(z)
        return self.a.contains(z) and not self.b.contains(z, strict=True)

    def sample_point(self) -> complex:
        # the point of the boundary of a farthest from b is always outside b
        axis = (self.a.center - self.b.center) / abs(self.a.center - self.b.center)
        return self.a.center + self.a.radius * axis


def _region_arcs(region) -> list[Arc]:
    return list(region.boundary_arcs())


def regions_meet(r1, r2) -> bool:
    """Whether two closed lens/lune regions intersect (exact circle tests)."""
    for a1 in _region_arcs(r1):
        for a2 in _region_arcs(r2):
            for p in arc_circle_crossings(a1, a2.disk):
                if arc_contains_angle(a2, a2.disk.angle_of(p)):
                    # boundary curves cross inside both arcs; but the crossing
                    # must lie on both region boundaries, which it does by
                    # construction.
                    if r1.contains(p) and r2.contains(p):
                        return True
    # no boundary crossing: disjoint or nested
    if r2.contains(r1.sample_point()) or r1.contains(r2.sample_point()):
        return True
    for a1 in _region_arcs(r1):
        if r2.contains(complex(a1.point(0.5))):
            return True
    for a2 in _region_arcs(r2):
        if r1.contains(complex(a2.point(0.5))):
            return True
    return False


def lens_in_disk(lens: Lens, d: Disk) -> bool:
    return all(arc_in_disk(arc, d) for arc in lens.boundary_arcs())


def lens_contains_lens(outer: Lens, inner: Lens) -> bool:
    """Whether inner lens is contained in outer lens (no boundary crossings
    assumed checked by the caller via eye_boundary_crossings)."""
    u, v = inner.corners
    return outer.contains(u) and outer.contains(v) and outer.contains(inner.sample_point())


def solve_apollonius(d1: Disk, d2: Disk, d3: Disk) -> Disk:
    """Disk externally tangent to all three given disks (inscribed in their
    interstice).  Solves |c - c_i| = r + r_i by eliminating the quadratic terms."""
    c1, c2, c3 = d1.center, d2.center, d3.center
    r1, r2, r3 = d1.radius, d2.radius, d3.radius

    def row(ci, ri, cj, rj):
        # (|c-ci|^2 - (r+ri)^2) - (|c-cj|^2 - (r+rj)^2) = 0
        ax = 2 * (cj.real - ci.real)
        ay = 2 * (cj.imag - ci.imag)
        ar = 2 * (ri - rj)
        rhs = (abs(cj) ** 2 - abs(ci) ** 2) - (rj * rj - ri * ri)
        return ax, ay, ar, rhs

    a1x, a1y, a1r, b1 = row(c1, r1, c2, r2)
    a2x, a2y, a2r, b2 = row(c1, r1, c3, r3)
    det = a1x * a2y - a2x * a1y
    if abs(det) < 1e-14:
        raise DegenerateTriple("collinear centers in Apollonius solve")
    # c = p + r*q  (componentwise affine in r)
    px = (b1 * a2y - b2 * a1y) / det
    py = (a1x * b2 - a2x * b1) / det
    qx = -(a1r * a2y - a2r * a1y) / det
    qy = -(a1x * a2r - a2x * a1r) / det
    # plug into |c - c1|^2 = (r + r1)^2
    ex, ey = px - c1.real, py - c1.imag
    A = qx * qx + qy * qy - 1.0
    B = 2 * (ex * qx + ey * qy) - 2 * r1
    C = ex * ex + ey * ey - r1 * r1
    if abs(A) < 1e-14:
        roots = [-C / B]
    else:
        disc = B * B - 4 * A * C
        if disc < 0:
            raise DegenerateTriple("no real Apollonius solution")
        roots = [(-B - math.sqrt(disc)) / (2 * A), (-B + math.sqrt(disc)) / (2 * A)]
    best = None
    for r in roots:
        if r <= EPS_GEOM:
            continue
        c = complex(px + r * qx, py + r * qy)
        cand = Disk(c, r)
        # inscribed: externally tangent, not swallowing any input disk
        if all(abs(c - d.center) > d.radius for d in (d1, d2, d3)):
            if best is None or cand.radius < best.radius:
                best = cand
    if best is None:
        raise DegenerateTriple("no inscribed Apollonius disk")
    return best
