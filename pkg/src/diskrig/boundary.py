"""Sampled boundary curves, faithful correspondences, winding numbers, and the
fixed-point index, including the multiply-connected sum and index additivity.

The canonical faithful map is the arc-proportional one: every pair-intersection
corner of one configuration is pinned to its counterpart, and each arc between
consecutive pinned points is mapped proportionally in angle.  Optional interior
pins (used e.g. to force specific point identifications) and random monotone
reparametrizations refine the same structure, so restrictions to disks, eyes,
and sub-configurations all agree with the full map where they overlap; the
additivity identities are then exact.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .config import DiskConfiguration, contact_graph
from .errors import (
    CoincidentCorner,
    CombinatoricsMismatch,
    CornerOffBoundary,
    DegenerateContact,
    GluingMismatch,
    NearFixedPoint,
    PointOnCurve,
)
from .geom import (
    EPS_GEOM,
    Disk,
    DiskRelation,
    circle_intersections,
    disk_relation,
    tangency_point,
)

TWO_PI = 2 * math.pi
BASE_STEP = TWO_PI / 512
CORNER_WINDOW = 0.05
CORNER_REFINE = 8
MAX_REFINE_STEP = TWO_PI / 8192
MIN_DISP = 10 * EPS_GEOM


# --- winding numbers -----------------------------------------------------------


def winding_number(samples: np.ndarray, z: complex) -> int:
    """Winding number of the closed sampled curve around z."""
    rel = np.asarray(samples) - z
    if np.min(np.abs(rel)) <= EPS_GEOM:
        raise PointOnCurve("query point lies on the curve")
    return _winding_of_closed(rel)


def _winding_of_closed(rel: np.ndarray) -> int:
    ang = np.angle(rel)
    d = np.diff(ang, append=ang[:1])
    d = (d + math.pi) % TWO_PI - math.pi
    total = float(d.sum()) / TWO_PI
    n = round(total)
    if abs(total - n) >= 0.01:
        raise PointOnCurve(f"winding residual {total - n:.3g} too large; refine sampling")
    return int(n)


@dataclass
class OrientedCurve:
    samples: np.ndarray
    orientation: int  # +1 positive (counterclockwise), -1 negative

    def __post_init__(self):
        if len(self.samples) < 32:
            raise ValueError("need at least 32 samples")


def signed_area(samples: np.ndarray) -> float:
    z = np.asarray(samples)
    w = np.roll(z, -1)
    return float(0.5 * np.sum(z.real * w.imag - z.imag * w.real))


def sample_disk_boundary(disk: Disk, corners=()) -> OrientedCurve:
    """Counterclockwise samples with max step 2*pi/512, corners included
    exactly, and x8 refinement within 0.05 rad of each corner."""
    thetas = []
    for z in corners:
        if abs(abs(z - disk.center) - disk.radius) > 1e-6 * max(1.0, disk.radius):
            raise CornerOffBoundary(f"{z} not on boundary")
        thetas.append(disk.angle_of(z))
    if not thetas:
        grid = np.arange(512) * BASE_STEP
        return OrientedCurve(disk.center + disk.radius * np.exp(1j * grid), +1)
    order = np.argsort([t % TWO_PI for t in thetas])
    corner_pts = [corners[k] for k in order]
    thetas = [thetas[k] % TWO_PI for k in order]
    samples = []
    for k, t0 in enumerate(thetas):
        t1 = thetas[(k + 1) % len(thetas)]
        span = (t1 - t0) % TWO_PI or TWO_PI
        pts = disk.center + disk.radius * np.exp(1j * (t0 + _arc_offsets(span, True, True)))
        pts[0] = corner_pts[k]  # corners appear exactly as samples
        samples.append(pts)
    return OrientedCurve(np.concatenate(samples), +1)


def _arc_offsets(span: float, refine_start: bool, refine_end: bool, density: int = 1) -> np.ndarray:
    """Strictly increasing offsets in [0, span) starting at 0: uniform at the
    base step with x8 refinement inside the corner windows."""
    step = BASE_STEP / density
    n = max(4, int(math.ceil(span / step)))
    pts = set(np.linspace(0.0, span, n, endpoint=False))
    fine = step / CORNER_REFINE
    win = min(CORNER_WINDOW, span / 2)
    if refine_start:
        pts.update(np.arange(0.0, win, fine))
    if refine_end:
        pts.update(span - np.arange(fine, win, fine))
    out = np.array(sorted(p for p in pts if 0.0 <= p < span - 1e-15))
    return out


# --- boundary complexes ----------------------------------------------------------


@dataclass(frozen=True)
class CornerRef:
    """Identity of a corner: the unordered pair and which intersection point
    ('u' and 'v' follow the convention for the pair in sorted label order;
    't' marks a tangency)."""

    pair: tuple
    kind: str
    point: complex


@dataclass
class BoundaryArc:
    vertex: object
    a0: float
    da: float
    start: CornerRef | None
    end: CornerRef | None


@dataclass
class BoundaryCurve:
    pieces: list

    def vertex_sequence(self):
        return [p.vertex for p in self.pieces]

    def signature(self):
        return [(p.vertex, p.end.pair if p.end else None) for p in self.pieces]


@dataclass
class BoundaryComplex:
    config: DiskConfiguration
    curves: list

    def curve_samples(self, density: int = 1):
        return [_sample_curve(self.config, c, density) for c in self.curves]


def _pair_corners(config, i, j):
    """Corner refs of the pair {i, j}, canonical for sorted label order."""
    si, sj = sorted((i, j), key=str)
    a, b = config.disks[si], config.disks[sj]
    rel = disk_relation(a, b)
    if rel is DiskRelation.OVERLAPPING:
        u, v = circle_intersections(a, b)
        return (CornerRef((si, sj), "u", u), CornerRef((si, sj), "v", v))
    if rel is DiskRelation.EXTERNALLY_TANGENT:
        t = tangency_point(a, b)
        return (CornerRef((si, sj), "t", t),)
    return ()


def boundary_complex(config: DiskConfiguration) -> BoundaryComplex:
    """Trace the union boundary into positively oriented curves with arcs
    labeled by owning disk and corners at pair-intersection points."""
    covered = {i: [] for i in config.labels}  # (start_angle, end_angle, start_ref, end_ref)
    markers = {i: [] for i in config.labels}  # tangency splits: (angle, ref)
    for i, j in itertools.combinations(config.labels, 2):
        refs = _pair_corners(config, i, j)
        if not refs:
            continue
        if len(refs) == 1:
            (tref,) = refs
            for v in (i, j):
                markers[v].append((config.disks[v].angle_of(tref.point), tref))
            continue
        uref, vref = refs
        si, sj = uref.pair
        # boundary of disk si inside disk sj runs u -> v; of sj inside si runs v -> u
        covered[si].append((config.disks[si].angle_of(uref.point), config.disks[si].angle_of(vref.point), uref, vref))
        covered[sj].append((config.disks[sj].angle_of(vref.point), config.disks[sj].angle_of(uref.point), vref, uref))
    free = {}
    for i in config.labels:
        free[i] = _free_arcs(config.disks[i], i, covered[i], markers[i])
    # successor index: free arc starting at a given corner ref on a given disk
    start_index = {}
    for i, arcs in free.items():
        for a in arcs:
            if a.start is not None:
                start_index[(i, a.start.pair, a.start.kind)] = a
    curves = []
    unused = {id(a): a for arcs in free.values() for a in arcs}
    for i in config.labels:
        for a in free[i]:
            if id(a) not in unused:
                continue
            piece = a
            cycle = []
            while id(piece) in unused:
                del unused[id(piece)]
                cycle.append(piece)
                if piece.end is None:
                    break
                other = piece.end.pair[0] if piece.end.pair[1] == piece.vertex else piece.end.pair[1]
                key = (other, piece.end.pair, piece.end.kind)
                if key not in start_index:
                    raise DegenerateContact(f"no continuation at corner {piece.end}")
                piece = start_index[key]
            curves.append(BoundaryCurve(cycle))
    return BoundaryComplex(config, curves)


def _free_arcs(disk, vertex, intervals, marks):
    """Complement of the covered intervals on one circle, split at tangency
    marks, as BoundaryArc pieces."""
    if not intervals and not marks:
        return [BoundaryArc(vertex, 0.0, TWO_PI, None, None)]
    if not intervals:
        marks = sorted(marks)
        arcs = []
        for k, (t0, ref0) in enumerate(marks):
            t1, ref1 = marks[(k + 1) % len(marks)]
            span = (t1 - t0) % TWO_PI or TWO_PI
            arcs.append(BoundaryArc(vertex, t0, span, ref0, ref1))
        return arcs
    events = sorted(((a0 % TWO_PI, (a1 - a0) % TWO_PI, s, e) for a0, a1, s, e in intervals))
    if sum(iv[1] for iv in events) >= TWO_PI - EPS_GEOM:
        raise DegenerateContact(f"disk {vertex} has no free boundary")
    # disjoint cyclically ordered intervals tile the circle together with
    # their end-to-next-start gaps; an overlap makes a gap wrap a full turn
    walked = sum(iv[1] for iv in events) + sum(
        ((b0 - (a0 + da)) % TWO_PI)
        for (a0, da, _s, _e), (b0, _db, _s2, _e2) in zip(events, events[1:] + events[:1])
    )
    if abs(walked - TWO_PI) > 1e-9:
        raise DegenerateContact(f"covered intervals overlap on disk {vertex}")
    arcs = []
    for k, (a0, da, _, eref_prev) in enumerate(events):
        b0, _, sref_next, _ = events[(k + 1) % len(events)]
        start_angle = (a0 + da) % TWO_PI
        span = (b0 - start_angle) % TWO_PI
        if span <= 1e-12:
            raise DegenerateContact(f"zero-length free arc on disk {vertex}")
        sub_marks = sorted(
            ((t - start_angle) % TWO_PI, ref) for t, ref in marks if 0 < (t - start_angle) % TWO_PI < span
        )
        prev_off, prev_ref = 0.0, eref_prev
        for off, mref in sub_marks:
            arcs.append(BoundaryArc(vertex, (start_angle + prev_off) % TWO_PI, off - prev_off, prev_ref, mref))
            prev_off, prev_ref = off, mref
        arcs.append(BoundaryArc(vertex, (start_angle + prev_off) % TWO_PI, span - prev_off, prev_ref, sref_next))
    return arcs


def _sample_curve(config, curve: BoundaryCurve, density: int = 1):
    """(points, vertices, thetas) arrays for one traced curve."""
    pts, verts, thetas = [], [], []
    for piece in curve.pieces:
        disk = config.disks[piece.vertex]
        offs = _arc_offsets(piece.da, piece.start is not None, piece.end is not None, density)
        ang = piece.a0 + offs
        pts.append(disk.center + disk.radius * np.exp(1j * ang))
        verts.extend([piece.vertex] * len(offs))
        thetas.append(ang)
    return np.concatenate(pts), verts, np.concatenate(thetas)


# --- the faithful correspondence -------------------------------------------------


@dataclass
class VertexArcMap:
    """Orientation-preserving circle map pinned at the node angles."""

    disk: Disk
    disk_t: Disk
    nodes: list  # sorted (theta, theta_t)

    def eval_theta(self, theta):
        theta = np.asarray(theta, dtype=float)
        if not self.nodes:
            return theta
        t0 = np.array([n[0] for n in self.nodes])
        t1 = np.array([n[1] for n in self.nodes])
        rel = (theta[..., None] - t0) % TWO_PI
        idx = np.argmin(rel, axis=-1)
        lo = t0[idx]
        lo_t = t1[idx]
        nxt = (idx + 1) % len(self.nodes)
        span = (t0[nxt] - lo) % TWO_PI
        span = np.where(span == 0, TWO_PI, span)
        span_t = (t1[nxt] - lo_t) % TWO_PI
        span_t = np.where(span_t == 0, TWO_PI, span_t)
        frac = ((theta - lo) % TWO_PI) / span
        return lo_t + frac * span_t

    def eval_point(self, theta):
        tt = self.eval_theta(theta)
        return self.disk_t.center + self.disk_t.radius * np.exp(1j * tt)


@dataclass
class SampledLoopMap:
    """A closed sampled curve with its image samples."""

    src: np.ndarray
    dst: np.ndarray

    def displacement(self):
        return self.dst - self.src


@dataclass
class IndexReport:
    eta: int
    per_curve: list
    min_displacement: float


@dataclass
class FaithfulMap:
    config: DiskConfiguration
    config_t: DiskConfiguration
    complex_src: BoundaryComplex
    complex_dst: BoundaryComplex
    vmaps: dict
    pairing: list  # (src curve index, dst curve index)
    density: int = 1

    def loops(self, density=None):
        density = density or self.density
        out = []
        for si, _di in self.pairing:
            pts, verts, thetas = _sample_curve(self.config, self.complex_src.curves[si], density)
            dst = _eval_vmaps(self.vmaps, verts, thetas)
            out.append(SampledLoopMap(pts, dst))
        return out

    def min_displacement(self):
        return min(float(np.min(np.abs(l.displacement()))) for l in self.loops())

    def subset_loops(self, subset, density=None):
        """Sampled loops of the faithful map restricted to the union of the
        given vertex subset (uses the same vertex maps, so additivity
        identities are exact)."""
        sub = self.config.restricted(subset)
        cx = boundary_complex(sub)
        density = density or self.density
        out = []
        for curve in cx.curves:
            pts, verts, thetas = _sample_curve(sub, curve, density)
            dst = _eval_vmaps(self.vmaps, verts, thetas)
            out.append(SampledLoopMap(pts, dst))
        return out

    def disk_loop(self, vertex, density=None) -> SampledLoopMap:
        """delta_v: the induced map on the full circle of one disk."""
        vm = self.vmaps[vertex]
        density = density or self.density
        if not vm.nodes:
            th = np.arange(512 * density) * (TWO_PI / (512 * density))
        else:
            parts = []
            for k, (t0, _) in enumerate(vm.nodes):
                t1 = vm.nodes[(k + 1) % len(vm.nodes)][0]
                span = (t1 - t0) % TWO_PI or TWO_PI
                parts.append(t0 + _arc_offsets(span, True, True, density))
            th = np.concatenate(parts)
        src = vm.disk.center + vm.disk.radius * np.exp(1j * th)
        return SampledLoopMap(src, vm.eval_point(th))

    def eye_loop(self, i, j, density=None) -> SampledLoopMap:
        """epsilon_ij: the induced map on the eye boundary of pair {i, j}."""
        si, sj = sorted((i, j), key=str)
        a, b = self.config.disks[si], self.config.disks[sj]
        u, v = circle_intersections(a, b)
        density = density or self.density
        a0 = a.angle_of(u)
        da = (a.angle_of(v) - a0) % TWO_PI
        b0 = b.angle_of(v)
        db = (b.angle_of(u) - b0) % TWO_PI
        th_a = a0 + _arc_offsets(da, True, True, density)
        th_b = b0 + _arc_offsets(db, True, True, density)
        src = np.concatenate([a.center + a.radius * np.exp(1j * th_a), b.center + b.radius * np.exp(1j * th_b)])
        dst = np.concatenate([self.vmaps[si].eval_point(th_a), self.vmaps[sj].eval_point(th_b)])
        return SampledLoopMap(src, dst)


def _eval_vmaps(vmaps, verts, thetas):
    out = np.empty(len(thetas), dtype=complex)
    groups = {}
    for idx, v in enumerate(verts):
        groups.setdefault(v, []).append(idx)
    for v, idxs in groups.items():
        sel = np.asarray(idxs)
        out[sel] = vmaps[v].eval_point(thetas[sel])
    return out


def _match_curves(cx_src: BoundaryComplex, cx_dst: BoundaryComplex):
    """Pair curves by arc-label combinatorics (cyclic signature match)."""
    if len(cx_src.curves) != len(cx_dst.curves):
        raise CombinatoricsMismatch(
            f"{len(cx_src.curves)} vs {len(cx_dst.curves)} boundary curves"
        )
    used = set()
    pairing = []
    for si, c in enumerate(cx_src.curves):
        sig = c.signature()
        found = None
        for di, ct in enumerate(cx_dst.curves):
            if di in used:
                continue
            sig_t = ct.signature()
            if len(sig) != len(sig_t):
                continue
            if _cyclic_equal(sig, sig_t):
                found = di
                break
        if found is None:
            raise CombinatoricsMismatch(f"no matching curve for signature {sig}")
        used.add(found)
        pairing.append((si, found))
    return pairing


def _cyclic_equal(a, b):
    if len(a) != len(b):
        return False
    if len(a) == 1:
        return a[0][0] == b[0][0]
    n = len(a)
    for r in range(n):
        if all(a[k] == b[(k + r) % n] for k in range(n)):
            return True
    return False


def build_faithful_map(config, config_tilde, *, pins=None, rng=None, n_random_pins=0, density=1) -> FaithfulMap:
    """Arc-proportional faithful correspondence between the union boundaries.

    pins: optional {vertex: [(z, z_tilde), ...]} extra point identifications
    (points are projected onto the circles).  rng/n_random_pins inserts random
    monotone reparametrization nodes, producing a different faithful map with
    the same corner structure.
    """
    inc = contact_graph(config)
    inc_t = contact_graph(config_tilde)
    if not inc.same_combinatorics(inc_t):
        raise CombinatoricsMismatch("contact graphs differ")
    cx = boundary_complex(config)
    cx_t = boundary_complex(config_tilde)
    pairing = _match_curves(cx, cx_t)

    vmaps = {}
    for v in config.labels:
        d, dt = config.disks[v], config_tilde.disks[v]
        nodes = []
        for w in config.labels:
            if w == v:
                continue
            refs = _pair_corners(config, v, w)
            refs_t = _pair_corners(config_tilde, v, w)
            if len(refs) != len(refs_t):
                raise CombinatoricsMismatch(f"pair ({v},{w}) differs in contact type")
            for ref, ref_t in zip(refs, refs_t):
                if abs(ref.point - ref_t.point) <= MIN_DISP:
                    raise CoincidentCorner(f"corner of pair {ref.pair} is fixed")
                nodes.append((d.angle_of(ref.point) % TWO_PI, dt.angle_of(ref_t.point) % TWO_PI))
        if pins and v in pins:
            for z, zt in pins[v]:
                nodes.append((d.angle_of(_project(d, z)) % TWO_PI, dt.angle_of(_project(dt, zt)) % TWO_PI))
        nodes = sorted(set(nodes))
        _check_monotone(nodes, v)
        vm = VertexArcMap(d, dt, nodes)
        if rng is not None and n_random_pins and nodes:
            vm = _randomize_vmap(vm, rng, n_random_pins)
        vmaps[v] = vm
    return FaithfulMap(config, config_tilde, cx, cx_t, vmaps, pairing, density)


def _project(disk, z):
    return disk.center + disk.radius * (z - disk.center) / abs(z - disk.center)


def _check_monotone(nodes, v):
    if len(nodes) < 2:
        return
    t_t = [n[1] for n in nodes]
    # target angles must be cyclically increasing along with the sources
    rotated = [(x - t_t[0]) % TWO_PI for x in t_t]
    if any(b <= a for a, b in zip(rotated, rotated[1:])):
        raise CombinatoricsMismatch(f"node order reverses on disk {v}")


def _randomize_vmap(vm: VertexArcMap, rng, n_pins) -> VertexArcMap:
    nodes = list(vm.nodes)
    out = list(nodes)
    for _ in range(n_pins):
        k = int(rng.integers(len(nodes)))
        t0, t0t = nodes[k]
        t1, t1t = nodes[(k + 1) % len(nodes)]
        span = (t1 - t0) % TWO_PI or TWO_PI
        span_t = (t1t - t0t) % TWO_PI or TWO_PI
        f, g = sorted(rng.uniform(0.1, 0.9, size=2))
        out.append(((t0 + f * span) % TWO_PI, (t0t + g * span_t) % TWO_PI))
    return VertexArcMap(vm.disk, vm.disk_t, sorted(out))


# --- the index -------------------------------------------------------------------


def robust_loop_index(builder, max_density: int = 16) -> int:
    """loop_index over builder(density), doubling the sampling density while
    the fixed-point-free certificate fails (up to the spec's densest grid)."""
    density = 1
    while True:
        try:
            return loop_index(builder(density))
        except NearFixedPoint:
            density *= 2
            if density > max_density:
                raise


def loop_index(loop: SampledLoopMap) -> int:
    disp = loop.displacement()
    rel = np.abs(disp)
    if np.min(rel) <= MIN_DISP:
        raise NearFixedPoint(f"min displacement {np.min(rel):.3g}")
    chord = np.abs(np.diff(loop.src, append=loop.src[:1])) + np.abs(np.diff(loop.dst, append=loop.dst[:1]))
    gap = np.minimum(rel, np.roll(rel, -1)) - chord
    if np.min(gap) <= 0:
        raise NearFixedPoint("displacement certificate fails between samples")
    return _winding_of_closed(disp)


def fixed_point_index(fmap) -> IndexReport:
    """Per-curve displacement winding and the multiply-connected sum.

    Accepts a FaithfulMap (refining the sampling on NearFixedPoint up to the
    spec's densest grid) or an explicit list of SampledLoopMap.
    """
    if isinstance(fmap, SampledLoopMap):
        loops_fn = lambda density: [fmap]
        max_density = 1
    elif isinstance(fmap, FaithfulMap):
        loops_fn = fmap.loops
        max_density = int(BASE_STEP / MAX_REFINE_STEP)
    else:
        loops_list = list(fmap)
        loops_fn = lambda density: loops_list
        max_density = 1
    density = 1
    while True:
        try:
            loops = loops_fn(density)
            per_curve = [loop_index(l) for l in loops]
            break
        except NearFixedPoint:
            density *= 2
            if density > max_density:
                raise
    min_disp = min(float(np.min(np.abs(l.displacement()))) for l in loops)
    return IndexReport(int(sum(per_curve)), per_curve, min_disp)


def index_additivity(map_k: SampledLoopMap, map_l: SampledLoopMap):
    """Glue two loop maps along their (single) shared boundary arc and return
    (eta(glued), eta(K) + eta(L))."""
    key = lambda z: (round(z.real, 9), round(z.imag, 9))
    keys_k = [key(z) for z in map_k.src]
    keys_l = [key(z) for z in map_l.src]
    shared = set(keys_k) & set(keys_l)
    if len(shared) < 2:
        raise GluingMismatch("no shared boundary arc")
    lk = _rotate_shared_to_suffix(map_k, [k in shared for k in keys_k])
    ll = _rotate_shared_to_suffix(map_l, [k in shared for k in keys_l])
    (free_k_src, free_k_dst), (shared_k_src, shared_k_dst) = lk
    (free_l_src, free_l_dst), (shared_l_src, shared_l_dst) = ll
    agree = {key(z): w for z, w in zip(shared_k_src, shared_k_dst)}
    for z, w in zip(shared_l_src, shared_l_dst):
        w2 = agree.get(key(z))
        if w2 is None or abs(w - w2) > 1e-7:
            raise GluingMismatch("maps disagree on the shared arc")
    glued = SampledLoopMap(
        np.concatenate([free_k_src, free_l_src]), np.concatenate([free_k_dst, free_l_dst])
    )
    eta_glued = loop_index(glued)
    eta_parts = loop_index(map_k) + loop_index(map_l)
    return eta_glued, eta_parts


def _rotate_shared_to_suffix(loop: SampledLoopMap, mask):
    n = len(mask)
    starts = [k for k in range(n) if mask[k] and not mask[(k - 1) % n]]
    if len(starts) != 1:
        raise GluingMismatch("shared samples are not a single contiguous arc")
    s = starts[0]
    idx = [(s + k) % n for k in range(n)]
    shared_idx = [k for k in idx if mask[k]]
    free_idx = [k for k in idx if not mask[k]]
    # keep the two junction samples (arc endpoints) on the free part
    free_idx = [shared_idx[-1]] + free_idx + [shared_idx[0]]
    src, dst = np.asarray(loop.src), np.asarray(loop.dst)
    return (
        (src[free_idx], dst[free_idx]),
        (src[shared_idx], dst[shared_idx]),
    )
