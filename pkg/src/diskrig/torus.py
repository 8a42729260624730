"""Torus parametrization of a transverse pair of boundary curves: crossing
classification, the two-sided index formula, and synthesis of boundary
homeomorphisms from monotone paths, including the exhaustive zero-index eye
map search and the three-point prescription construction.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .boundary import SampledLoopMap, _winding_of_closed, loop_index, robust_loop_index, winding_number
from .config import Eye
from .errors import (
    AlternationViolated,
    BasePointOnBoundary,
    DegenerateInput,
    HypothesesViolated,
    NoNonnegativeRoute,
    NotTransverse,
    NoZeroIndexMap,
    PathThroughTorusPoint,
)
from .geom import (
    EPS_GEOM,
    Arc,
    Disk,
    DiskRelation,
    Lune,
    arc_between,
    arc_contains_angle,
    circle_intersections,
    disk_relation,
    regions_meet,
)

TWO_PI = 2 * math.pi
EPS_TORUS = 1e-4


# --- arc chains -----------------------------------------------------------------


@dataclass
class ArcChain:
    """Closed positively oriented curve made of CCW circular arcs."""

    pieces: list  # of Arc
    marks: dict = field(default_factory=dict)  # name -> absolute param in [0,1)

    def __post_init__(self):
        self._lens = np.array([p.length() for p in self.pieces])
        self.total = float(self._lens.sum())
        self._cum = np.concatenate([[0.0], np.cumsum(self._lens)]) / self.total

    @classmethod
    def from_disk(cls, disk: Disk) -> "ArcChain":
        return cls([Arc(disk, 0.0, TWO_PI)])

    @classmethod
    def from_eye(cls, eye: Eye) -> "ArcChain":
        a1 = arc_between(eye.disk_i, eye.corner_u, eye.corner_v)
        a2 = arc_between(eye.disk_j, eye.corner_v, eye.corner_u)
        chain = cls([a1, a2])
        chain.marks["u"] = 0.0
        chain.marks["v"] = float(chain._cum[1])
        return chain

    def point(self, s):
        s = np.asarray(s, dtype=float) % 1.0
        idx = np.clip(np.searchsorted(self._cum, s, side="right") - 1, 0, len(self.pieces) - 1)
        out = np.empty(s.shape, dtype=complex)
        for k, piece in enumerate(self.pieces):
            mask = idx == k
            if not np.any(mask):
                continue
            frac = (s[mask] - self._cum[k]) / (self._cum[k + 1] - self._cum[k])
            out[mask] = piece.point(frac)
        if out.ndim == 0:
            return complex(out)
        return out

    def param_of(self, z: complex) -> float:
        """Normalized arclength parameter of a point lying on the chain."""
        best = None
        for k, piece in enumerate(self.pieces):
            if abs(abs(z - piece.disk.center) - piece.disk.radius) > 1e-7 * max(1.0, piece.disk.radius):
                continue
            t = (piece.disk.angle_of(z) - piece.a0) % TWO_PI
            if t <= piece.da + 1e-12:
                frac = min(t / piece.da, 1.0)
                s = self._cum[k] + frac * (self._cum[k + 1] - self._cum[k])
                cand = float(s % 1.0)
                if best is None or abs(complex(self.point(cand)) - z) < abs(complex(self.point(best)) - z):
                    best = cand
        if best is None:
            raise NotTransverse(f"point {z} not on chain")
        return best

    def distance(self, z: complex) -> float:
        """Exact distance from a point to the chain."""
        best = math.inf
        for piece in self.pieces:
            radial = piece.disk.angle_of(z)
            if arc_contains_angle(piece, radial):
                best = min(best, abs(abs(z - piece.disk.center) - piece.disk.radius))
            best = min(best, abs(z - piece.start), abs(z - piece.end))
        return best

    def dense_samples(self, n: int = 2048) -> np.ndarray:
        return self.point(np.arange(n) / n)


def chain_of(obj) -> ArcChain:
    if isinstance(obj, ArcChain):
        return obj
    if isinstance(obj, Disk):
        return ArcChain.from_disk(obj)
    if isinstance(obj, Eye):
        return ArcChain.from_eye(obj)
    raise TypeError(f"cannot build a boundary chain from {type(obj)}")


# --- parametrization ---------------------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    kind: str  # "p": boundary of K entering K~; "pt": boundary of K~ entering K
    s: float  # param on K
    s_t: float  # param on K~
    point: complex


@dataclass
class TorusParametrization:
    chain: ArcChain
    chain_t: ArcChain
    crossings: list

    @property
    def M(self) -> int:
        return sum(1 for c in self.crossings if c.kind == "p")

    def points(self, kind):
        return [c for c in self.crossings if c.kind == kind]


def build_parametrization(k_obj, kt_obj) -> TorusParametrization:
    """Locate and classify all boundary crossings; verifies the alternation law
    along both curves."""
    chain = chain_of(k_obj)
    chain_t = chain_of(kt_obj)
    crossings = []
    for piece in chain.pieces:
        for piece_t in chain_t.pieces:
            rel = disk_relation(piece.disk, piece_t.disk)
            if rel in (DiskRelation.EXTERNALLY_TANGENT, DiskRelation.INTERNALLY_TANGENT):
                raise NotTransverse("tangent circles in the pair")
            if rel is not DiskRelation.OVERLAPPING:
                continue
            for z in circle_intersections(piece.disk, piece_t.disk):
                ta = (piece.disk.angle_of(z) - piece.a0) % TWO_PI
                tb = (piece_t.disk.angle_of(z) - piece_t.a0) % TWO_PI
                if ta > piece.da or tb > piece_t.da:
                    continue
                tangent = 1j * (z - piece.disk.center)
                entering = (tangent.conjugate() * (piece_t.disk.center - z)).real > 0
                crossings.append(
                    Crossing("p" if entering else "pt", chain.param_of(z), chain_t.param_of(z), z)
                )
    _check_alternation(crossings)
    return TorusParametrization(chain, chain_t, crossings)


def _check_alternation(crossings):
    kinds_p = sum(1 for c in crossings if c.kind == "p")
    if 2 * kinds_p != len(crossings):
        raise AlternationViolated("unequal numbers of entering/exiting crossings")
    for key in ("s", "s_t"):
        seq = [c.kind for c in sorted(crossings, key=lambda c: getattr(c, key))]
        for a, b in zip(seq, seq[1:] + seq[:1]):
            if a == b:
                raise AlternationViolated(f"crossings do not alternate along {key}")
    coords = [getattr(c, k) for c in crossings for k in ("s",)]
    coords_t = [c.s_t for c in crossings]
    for vals in (coords, coords_t):
        sv = sorted(vals)
        if any(b - a < 1e-12 for a, b in zip(sv, sv[1:])):
            raise AlternationViolated("crossings share a torus coordinate")


# --- graph maps (monotone torus paths) ------------------------------------------------


@dataclass
class GraphMap:
    """Boundary homeomorphism given by its monotone graph in base-shifted
    torus coordinates: y(x) with x, y in [0, 1], endpoints (0,0) -> (1,1)."""

    param: TorusParametrization
    base_s: float  # kappa(u)
    base_st: float  # kappa~(u~)
    xs: np.ndarray
    ys: np.ndarray

    def eval_y(self, x):
        return np.interp(np.asarray(x, dtype=float), self.xs, self.ys)

    def loop(self, n: int = 4096) -> SampledLoopMap:
        grid = self._sample_grid(n)
        y = self.eval_y(grid)
        src = self.param.chain.point((grid + self.base_s) % 1.0)
        dst = self.param.chain_t.point((y + self.base_st) % 1.0)
        return SampledLoopMap(src, dst)

    def _sample_grid(self, n: int) -> np.ndarray:
        pts = set(np.linspace(0.0, 1.0, n, endpoint=False))
        pts.update(x % 1.0 for x in self.xs if 0 <= x < 1)
        fine = 1.0 / (32 * n)
        for c in self.param.crossings:
            x = (c.s - self.base_s) % 1.0
            lo = max(0.0, x - 0.01)
            hi = min(1.0 - 1e-12, x + 0.01)
            pts.update(np.arange(lo, hi, fine))
        return np.array(sorted(pts))

    def source_point(self, x: float) -> complex:
        return complex(self.param.chain.point((x + self.base_s) % 1.0))

    def image_point(self, x: float) -> complex:
        return complex(self.param.chain_t.point((self.eval_y(x) + self.base_st) % 1.0))


def shifted_crossings(param: TorusParametrization, base_s: float, base_st: float):
    return [
        (c.kind, (c.s - base_s) % 1.0, (c.s_t - base_st) % 1.0) for c in param.crossings
    ]


def index_via_torus(gmap: GraphMap, u: complex | None = None) -> int:
    """Evaluate both variants of the torus index formula; they must agree.

    u defaults to the graph's base point.  The base point must be off the
    other curve (and its image off this curve).
    """
    param = gmap.param
    if u is None:
        x_u = 0.0
    else:
        x_u = (param.chain.param_of(u) - gmap.base_s) % 1.0
    u_pt = gmap.source_point(x_u)
    ut_pt = gmap.image_point(x_u)
    if param.chain_t.distance(u_pt) <= 10 * EPS_GEOM or param.chain.distance(ut_pt) <= 10 * EPS_GEOM:
        raise BasePointOnBoundary("base point or its image lies on the other curve")
    w1 = winding_number(param.chain.dense_samples(), ut_pt)
    w2 = winding_number(param.chain_t.dense_samples(), u_pt)
    y_u = gmap.eval_y(x_u)
    p_down = p_up = pt_down = pt_up = 0
    for kind, x, y in shifted_crossings(param, gmap.base_s, gmap.base_st):
        xr = (x - x_u) % 1.0
        yr = (y - y_u) % 1.0
        below = yr < _eval_rebased(gmap, x_u, y_u, xr)
        if kind == "p":
            p_down += below
            p_up += not below
        else:
            pt_down += below
            pt_up += not below
    eta_down = w1 + w2 - p_down + pt_down
    eta_up = w1 + w2 + p_up - pt_up
    if eta_down != eta_up:
        raise AlternationViolated(f"formula variants disagree: {eta_down} vs {eta_up}")
    return int(eta_down)


def _eval_rebased(gmap: GraphMap, x_u: float, y_u: float, xr: float) -> float:
    """Graph function in coordinates re-based at (x_u, gamma(x_u)); the graph
    extends periodically as Gamma(x) = eval_y(x mod 1) + floor(x)."""
    t = xr + x_u
    if t < 1.0:
        return gmap.eval_y(t) - y_u
    return gmap.eval_y(t - 1.0) + 1.0 - y_u


def verify_local_windings(param: TorusParametrization) -> bool:
    """w(zeta(p)) = +1 and w(zeta(p~)) = -1 for a small coordinate square
    around every crossing."""
    if not param.crossings:
        return True
    gaps = []
    for vals in ([c.s for c in param.crossings], [c.s_t for c in param.crossings]):
        sv = sorted(vals)
        gaps.extend(((b - a) % 1.0) for a, b in zip(sv, sv[1:] + sv[:1]))
    h = min(0.01, min(g for g in gaps if g > 0) / 4)
    n = 64
    t = np.arange(n) / n
    for c in param.crossings:
        xs = np.concatenate([c.s - h + 2 * h * t, np.full(n, c.s + h), c.s + h - 2 * h * t, np.full(n, c.s - h)])
        ys = np.concatenate([np.full(n, c.s_t - h), c.s_t - h + 2 * h * t, np.full(n, c.s_t + h), c.s_t + h - 2 * h * t])
        disp = param.chain_t.point(ys % 1.0) - param.chain.point(xs % 1.0)
        w = _winding_of_closed(disp)
        expected = 1 if c.kind == "p" else -1
        if w != expected:
            return False
    return True


# --- monotone path construction ----------------------------------------------------


def _feasible(below, above):
    for sx, sy in below:
        for tx, ty in above:
            if sx < tx and sy > ty:
                return False
    return True


def _construct_path(points, labels, waypoints, margin=EPS_TORUS):
    """Monotone PL path from (0,0) to (1,1) through the waypoints, keeping
    each labeled point strictly below/above with the given margin."""
    nodes = [(0.0, 0.0)] + sorted(waypoints) + [(1.0, 1.0)]
    xs = [0.0]
    ys = [0.0]
    for (x0, y0), (x1, y1) in zip(nodes, nodes[1:]):
        seg = [
            (px, py, lab)
            for (px, py), lab in zip(points, labels)
            if x0 + 1e-15 < px < x1 - 1e-15 and y0 + 1e-15 < py < y1 - 1e-15
        ]
        seg.sort()
        h_prev = y0
        for px, py, lab in seg:
            lo = h_prev
            hi = y1
            for qx, qy, qlab in seg:
                if qlab == "below" and qx <= px + margin:
                    lo = max(lo, qy + margin)
                if qlab == "above" and qx >= px - margin:
                    hi = min(hi, qy - margin)
            if lo >= hi:
                raise PathThroughTorusPoint("no corridor at constraint column")
            h = (max(lo, h_prev) + hi) / 2
            if h <= h_prev:
                raise PathThroughTorusPoint("monotonicity pinch")
            xs.append(px)
            ys.append(h)
            h_prev = h
        xs.append(x1)
        ys.append(y1)
    # deduplicate while keeping strict monotonicity
    out_x, out_y = [xs[0]], [ys[0]]
    for x, y in zip(xs[1:], ys[1:]):
        if x > out_x[-1] + 1e-15 and y > out_y[-1] + 1e-15:
            out_x.append(x)
            out_y.append(y)
        elif x >= 1.0 - 1e-15 and y >= 1.0 - 1e-15:
            out_x.append(1.0)
            out_y.append(1.0)
    if out_x[-1] != 1.0:
        out_x.append(1.0)
        out_y.append(1.0)
    return np.array(out_x), np.array(out_y)


def path_to_homeomorphism(param: TorusParametrization, base_s, base_st, xs, ys) -> GraphMap:
    """The boundary homeomorphism whose graph is the given monotone path."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if np.any(np.diff(xs) <= 0) or np.any(np.diff(ys) <= 0):
        raise DegenerateInput("path must be strictly monotone in both coordinates")
    gmap = GraphMap(param, base_s, base_st, xs, ys)
    for kind, x, y in shifted_crossings(param, base_s, base_st):
        if abs(gmap.eval_y(x) - y) < EPS_TORUS / 2:
            raise PathThroughTorusPoint(f"path hits torus point at x={x:.4f}")
    return gmap


def _eta_of_assignment(w_total, assignment):
    p_down = sum(1 for kind, below in assignment if kind == "p" and below)
    pt_down = sum(1 for kind, below in assignment if kind == "pt" and below)
    return w_total - p_down + pt_down


def _route_search(param, base_s, base_st, waypoints, w_total, target):
    """Enumerate below/above assignments consistent with the waypoints and the
    monotone separation constraint; yield GraphMaps achieving target eta."""
    shifted = shifted_crossings(param, base_s, base_st)
    forced = []
    free = []
    for kind, x, y in shifted:
        force = None
        for wx, wy in waypoints:
            if x < wx and y > wy:
                force = "above"
            elif x > wx and y < wy:
                force = "below"
        if force:
            forced.append((kind, x, y, force == "below"))
        else:
            free.append((kind, x, y))
    results = []
    for bits in itertools.product((True, False), repeat=len(free)):
        assignment = [(k, b) for k, _, _, b in forced] + [
            (k, bit) for (k, _, _), bit in zip(free, bits)
        ]
        if _eta_of_assignment(w_total, assignment) != target:
            continue
        below = [(x, y) for (k, x, y, b) in forced if b] + [
            (x, y) for (k, x, y), bit in zip(free, bits) if bit
        ]
        above = [(x, y) for (k, x, y, b) in forced if not b] + [
            (x, y) for (k, x, y), bit in zip(free, bits) if not bit
        ]
        if not _feasible(below, above):
            continue
        pts = below + above
        labels = ["below"] * len(below) + ["above"] * len(above)
        gmap = None
        for margin in (0.02, 0.005, EPS_TORUS):
            try:
                xs, ys = _construct_path(pts, labels, waypoints, margin=margin)
                gmap = path_to_homeomorphism(param, base_s, base_st, xs, ys)
                break
            except (PathThroughTorusPoint, DegenerateInput):
                continue
        if gmap is not None:
            results.append(gmap)
    return results


def random_monotone_graph(param: TorusParametrization, rng, base_s=None, base_st=None) -> GraphMap:
    """A random valid monotone path map for the pair (used by the formula
    equivalence experiments)."""
    if base_s is None:
        base_s, base_st = default_base(param)
    shifted = shifted_crossings(param, base_s, base_st)
    for _ in range(64):
        bits = rng.random(len(shifted)) < 0.5
        below = [(x, y) for (k, x, y), b in zip(shifted, bits) if b]
        above = [(x, y) for (k, x, y), b in zip(shifted, bits) if not b]
        if not _feasible(below, above):
            continue
        pts = below + above
        labels = ["below"] * len(below) + ["above"] * len(above)
        try:
            xs, ys = _construct_path(pts, labels, [])
            return path_to_homeomorphism(param, base_s, base_st, xs, ys)
        except (PathThroughTorusPoint, DegenerateInput):
            continue
    raise NoNonnegativeRoute("could not sample a monotone path")


def default_base(param: TorusParametrization):
    """Base pair at arc midpoints away from all crossings; smallest parameter
    wins ties."""
    cands_s = _gap_midpoints([c.s for c in param.crossings])
    cands_t = _gap_midpoints([c.s_t for c in param.crossings])
    return cands_s[0], cands_t[0]


def _gap_midpoints(vals):
    if not vals:
        return [0.0]
    sv = sorted(vals)
    mids = [((a + ((b - a) % 1.0) / 2) % 1.0) for a, b in zip(sv, sv[1:] + [sv[0] + 1.0])]
    return sorted(mids)


# --- zero-index eye maps and three-point prescriptions -------------------------------


def _w_total(param: TorusParametrization, base_s, base_st) -> int:
    u_pt = complex(param.chain.point(base_s))
    ut_pt = complex(param.chain_t.point(base_st))
    w1 = winding_number(param.chain.dense_samples(), ut_pt)
    w2 = winding_number(param.chain_t.dense_samples(), u_pt)
    return w1 + w2


def check_eye_pair_hypotheses(eye: Eye, eye_t: Eye):
    """Hypotheses of the zero-index proposition: neither eye contains the
    other and both pairs of difference regions meet."""
    param = build_parametrization(eye, eye_t)
    if param.M == 0:
        lens, lens_t = eye.lens, eye_t.lens
        u, v = lens.corners
        ut, vt = lens_t.corners
        if lens_t.contains(u) or lens.contains(ut):
            raise HypothesesViolated("one eye contains the other")
        return param  # disjoint eyes: the trivial case needs no further hypotheses
    if param.M > 3:
        raise HypothesesViolated(f"eye boundaries cross {2 * param.M} > 6 times")
    a, b = eye.disk_i, eye.disk_j
    at, bt = eye_t.disk_i, eye_t.disk_j
    if not regions_meet(Lune(a, b), Lune(at, bt)):
        raise HypothesesViolated("A-side difference regions do not meet")
    if not regions_meet(Lune(b, a), Lune(bt, at)):
        raise HypothesesViolated("B-side difference regions do not meet")
    return param


def find_zero_index_eye_map(eye: Eye, eye_t: Eye) -> GraphMap:
    """Faithful (corner-respecting) indexable map with eta = 0, by exhaustive
    monotone path search through the corner-pair waypoint."""
    param = check_eye_pair_hypotheses(eye, eye_t)
    base_s = param.chain.marks["u"]
    base_st = param.chain_t.marks["u"]
    cx = (param.chain.marks["v"] - base_s) % 1.0
    cy = (param.chain_t.marks["v"] - base_st) % 1.0
    w_total = _w_total(param, base_s, base_st)
    routes = _route_search(param, base_s, base_st, [(cx, cy)], w_total, target=0)
    for gmap in routes:
        report_eta = graph_eta(gmap)
        if report_eta == 0 and index_via_torus(gmap) == 0:
            return gmap
    raise NoZeroIndexMap(f"no faithful eta=0 map among {len(routes)} candidate routes (M={param.M})")


def graph_eta(gmap: GraphMap) -> int:
    """Directly computed displacement winding of a graph map, refining the
    sampling while the fixed-point-free certificate fails."""
    return robust_loop_index(lambda d: gmap.loop(4096 * d), max_density=16)


def three_point_map(k_obj, kt_obj, zs, zts) -> tuple[GraphMap, int]:
    """Indexable homeomorphism with eta >= 0 through the three prescriptions
    z_i -> z~_i (points in positively oriented order, off the other curve)."""
    param = build_parametrization(k_obj, kt_obj)
    s = [param.chain.param_of(z) for z in zs]
    st = [param.chain_t.param_of(z) for z in zts]
    base_s, base_st = s[0], st[0]
    xs = [(x - base_s) % 1.0 for x in s]
    ys = [(y - base_st) % 1.0 for y in st]
    if not (0 == xs[0] < xs[1] < xs[2] and 0 == ys[0] < ys[1] < ys[2]):
        raise DegenerateInput("prescription points are not in positive cyclic order")
    waypoints = [(xs[1], ys[1]), (xs[2], ys[2])]
    w_total = _w_total(param, base_s, base_st)
    for target in range(0, w_total + param.M + 1):
        routes = _route_search(param, base_s, base_st, waypoints, w_total, target)
        for gmap in routes:
            eta = graph_eta(gmap)
            if eta == target and eta >= 0:
                return gmap, eta
    raise NoNonnegativeRoute("no nonnegative-index route through the prescriptions")
