"""Randomized hypothesis-class generators and strict-inequality checks for the
geometric lemmas: the numerical verification layer.

Every check validates its hypothesis predicate independently of the inequality
computation and returns the inequality margin in radians; hypothesis-valid
instances must come out strictly positive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DiskConfiguration, classify_triple, is_general_position, is_thin
from .errors import HypothesesViolated, HypothesisUnmet
from .geom import (
    Arc,
    Disk,
    DiskRelation,
    Lens,
    Lune,
    arc_between,
    arc_circle_crossings,
    arc_in_disk,
    circle_intersections,
    disk_relation,
    lens_in_disk,
    overlap_angle,
    overlaps,
    regions_meet,
    triple_intersection_nonempty,
)

TWO_PI = 2 * math.pi


@dataclass
class LemmaInstance:
    lemma_id: str
    disks: dict
    margin: float = math.nan


def _pair_distance(r1: float, r2: float, theta: float) -> float:
    """Center distance realizing a given overlap angle (any theta < pi)."""
    return math.sqrt(r1 * r1 + r2 * r2 + 2 * r1 * r2 * math.cos(theta))


def _no_containment(*disks) -> bool:
    for i in range(len(disks)):
        for j in range(i + 1, len(disks)):
            if disk_relation(disks[i], disks[j]) not in (
                DiskRelation.DISJOINT,
                DiskRelation.OVERLAPPING,
                DiskRelation.EXTERNALLY_TANGENT,
            ):
                return False
    return True


# --- four-disk quadrilateral ----------------------------------------------------


def four_disk_hypothesis(disks) -> bool:
    """A curvilinear-quadrilateral bounded complementary component whose four
    sides come from the four disks in cyclic order."""
    d = [disks[k] for k in range(4)]
    for k in range(4):
        if not overlaps(d[k], d[(k + 1) % 4]):
            return False
    for k in range(2):
        if disk_relation(d[k], d[k + 2]) is not DiskRelation.DISJOINT:
            return False
    centroid = sum(x.center for x in d) / 4
    if any(x.contains(centroid) for x in d):
        return False
    corners = []
    for k in range(4):
        a, b = d[k], d[(k + 1) % 4]
        cands = circle_intersections(a, b)
        inner = min(cands, key=lambda z: abs(z - centroid))
        others = [d[m] for m in range(4) if m not in (k, (k + 1) % 4)]
        if any(o.contains(inner) for o in others):
            return False
        corners.append(inner)
    # quadrilateral sides: the arc of each circle between its two corners must
    # stay clear of the other disks
    for k in range(4):
        za = corners[(k - 1) % 4]  # corner with previous disk
        zb = corners[k]  # corner with next disk
        arc = _near_arc(d[k], za, zb, centroid)
        others = [d[m] for m in range(4) if m != k]
        for o in others:
            pts = arc_circle_crossings(arc, o)
            interior = [z for z in pts if abs(z - arc.start) > 1e-9 and abs(z - arc.end) > 1e-9]
            if interior:
                return False
        mid = complex(arc.point(0.5))
        if any(o.contains(mid, strict=True) for o in others):
            return False
    return True


def _near_arc(disk, za, zb, toward) -> Arc:
    a1 = arc_between(disk, za, zb)
    a2 = arc_between(disk, zb, za)
    return min((a1, a2), key=lambda a: abs(complex(a.point(0.5)) - toward))


def check_four_disk(instance: LemmaInstance) -> float:
    disks = instance.disks
    if not four_disk_hypothesis(disks):
        raise HypothesisUnmet("not a four-disk quadrilateral configuration")
    total = sum(overlap_angle(disks[k], disks[(k + 1) % 4]) for k in range(4))
    instance.margin = TWO_PI - total
    return instance.margin


def generate_four_disk(rng) -> LemmaInstance | None:
    side = rng.uniform(1.55, 1.95)
    base = [0j, complex(side, 0), complex(side, side), complex(0, side)]
    disks = {}
    for k in range(4):
        c = base[k] + complex(*rng.normal(0, 0.06, 2))
        disks[k] = Disk(c, rng.uniform(0.85, 1.1))
    inst = LemmaInstance("four_disk", disks)
    return inst if four_disk_hypothesis(disks) else None


# --- meat -----------------------------------------------------------------------


def meat_hypothesis(disks) -> bool:
    D, Dt = disks["D"], disks["Dt"]
    dm, dp = disks["dm"], disks["dp"]
    if disk_relation(D, Dt) is not DiskRelation.FIRST_CONTAINS_SECOND:
        return False
    for d in (dm, dp):
        for body in (D, Dt):
            if not overlaps(d, body):
                return False
    if not _no_containment(dm, dp):
        return False
    if not _no_containment(dm, D) or not _no_containment(dp, D):
        return False
    try:
        if triple_intersection_nonempty(dm, dp, D):
            return False
    except Exception:
        return False
    return True


def check_meat(instance: LemmaInstance) -> float:
    d = instance.disks
    if not meat_hypothesis(d):
        raise HypothesisUnmet("meat cast invalid")
    lhs = overlap_angle(d["Dt"], d["dm"]) + overlap_angle(d["Dt"], d["dp"])
    rhs = overlap_angle(d["D"], d["dm"]) + overlap_angle(d["D"], d["dp"])
    instance.margin = rhs - lhs
    return instance.margin


def generate_meat(rng, *, shrink=None) -> LemmaInstance | None:
    D = Disk(0j, 1.0)
    s = shrink if shrink is not None else rng.uniform(0.55, 0.9)
    off = rng.uniform(0, (1 - s) * 0.85)
    ang = rng.uniform(0, TWO_PI)
    Dt = Disk(off * np.exp(1j * ang), s)
    phi = rng.uniform(0, TWO_PI)
    dphi = rng.uniform(0.9 * math.pi / 2, 1.25 * math.pi)
    disks = {"D": D, "Dt": Dt}
    for name, p in (("dm", phi), ("dp", phi + dphi)):
        r = rng.uniform(0.6, 1.4)
        dist = rng.uniform(max(1.02, 0.75 + r * 0.5), 0.95 + r)
        disks[name] = Disk(dist * np.exp(1j * p), r)
    inst = LemmaInstance("meat", disks)
    return inst if meat_hypothesis(disks) else None


# --- finlandia --------------------------------------------------------------------


def finlandia_hypothesis(disks) -> bool:
    A, B, At, Bt = disks["A"], disks["B"], disks["At"], disks["Bt"]
    if not overlaps(A, B) or not overlaps(At, Bt):
        return False
    if disk_relation(A, At) is not DiskRelation.FIRST_CONTAINS_SECOND:
        return False
    if disk_relation(B, Bt) is not DiskRelation.FIRST_CONTAINS_SECOND:
        return False
    if disk_relation(B, At) is DiskRelation.FIRST_CONTAINS_SECOND:
        return False
    if disk_relation(A, Bt) is DiskRelation.FIRST_CONTAINS_SECOND:
        return False
    if abs(overlap_angle(A, B) - overlap_angle(At, Bt)) > 1e-9:
        return False
    # the cross angles in the conclusion must be defined
    return overlaps(At, B) and overlaps(A, Bt)


def check_finlandia(instance: LemmaInstance) -> float:
    d = instance.disks
    if not finlandia_hypothesis(d):
        raise HypothesisUnmet("finlandia cast invalid")
    theta = overlap_angle(d["A"], d["B"])
    instance.margin = overlap_angle(d["At"], d["B"]) + overlap_angle(d["A"], d["Bt"]) - 2 * theta
    return instance.margin


def generate_finlandia(rng, *, shrink=None) -> LemmaInstance | None:
    theta = rng.uniform(0.15, 0.9) * math.pi
    rB = rng.uniform(0.7, 1.3)
    A = Disk(0j, 1.0)
    B = Disk(_pair_distance(1.0, rB, theta) + 0j, rB)
    st = shrink if shrink is not None else rng.uniform(0.6, 0.92)
    rat = st * rng.uniform(0.9, 1.0)
    cat = complex(*rng.normal(0, (1 - rat) * 0.4, 2))
    At = Disk(cat, rat)
    rbt = rB * st * rng.uniform(0.85, 1.0)
    direction = np.exp(1j * rng.uniform(-0.5, 0.5))
    Bt = Disk(cat + _pair_distance(rat, rbt, theta) * direction, rbt)
    disks = {"A": A, "B": B, "At": At, "Bt": Bt}
    inst = LemmaInstance("finlandia", disks)
    return inst if finlandia_hypothesis(disks) else None


# --- mogwai ------------------------------------------------------------------------


def mogwai_hypothesis(disks) -> bool:
    A, B, C = disks["A"], disks["B"], disks["C"]
    if not _no_containment(A, B, C):
        return False
    if not overlaps(A, C):
        return False
    return lens_in_disk(Lens(A, C), B)


def check_mogwai(instance: LemmaInstance) -> float:
    d = instance.disks
    if not mogwai_hypothesis(d):
        raise HypothesisUnmet("mogwai cast invalid")
    if not overlaps(d["A"], d["B"]):
        instance.margin = -math.inf  # lemma asserts the overlap; flag loudly
        return instance.margin
    instance.margin = overlap_angle(d["A"], d["B"]) - overlap_angle(d["A"], d["C"])
    return instance.margin


def generate_mogwai(rng, *, closeness=None) -> LemmaInstance | None:
    A = Disk(0j, 1.0)
    rC = rng.uniform(0.5, 1.4)
    theta = rng.uniform(0.1, 0.85) * math.pi
    C = Disk(_pair_distance(1.0, rC, theta) * np.exp(1j * rng.uniform(0, TWO_PI)), rC)
    lens = Lens(A, C)
    u, v = lens.corners
    mid = (u + v) / 2
    slack = closeness if closeness is not None else rng.uniform(0.15, 0.9)
    center = mid + complex(*rng.normal(0, 0.1, 2))
    radius = max(abs(u - center), abs(v - center)) * (1 + slack)
    B = Disk(center, radius)
    disks = {"A": A, "B": B, "C": C}
    inst = LemmaInstance("mogwai", disks)
    return inst if mogwai_hypothesis(disks) else None


# --- contained loops ------------------------------------------------------------------


def contained_loops_hypothesis(solid, dashed) -> bool:
    n = len(solid)
    if n < 3 or len(dashed) != n:
        return False
    for i in range(n):
        if disk_relation(solid[i], dashed[i]) is not DiskRelation.FIRST_CONTAINS_SECOND:
            return False
        if not overlaps(solid[i], solid[(i + 1) % n]):
            return False
        if not overlaps(dashed[i], dashed[(i + 1) % n]):
            return False
    for i in range(n):
        for j in range(i + 2, n):
            if (i, j) == (0, n - 1):
                continue
            if disk_relation(solid[i], solid[j]) is not DiskRelation.DISJOINT:
                return False
    cfg = DiskConfiguration(list(enumerate(solid)))
    cfg_t = DiskConfiguration(list(enumerate(dashed)))
    if not is_thin(cfg)[0] or not is_thin(cfg_t)[0]:
        return False
    return is_general_position(cfg, cfg_t)[0]


def check_contained_loops(instance: LemmaInstance) -> float:
    solid = instance.disks["solid"]
    dashed = instance.disks["dashed"]
    if not contained_loops_hypothesis(solid, dashed):
        raise HypothesisUnmet("contained-loops cast invalid")
    n = len(solid)
    s1 = sum(overlap_angle(solid[i], solid[(i + 1) % n]) for i in range(n))
    s2 = sum(overlap_angle(dashed[i], dashed[(i + 1) % n]) for i in range(n))
    instance.margin = s1 - s2
    return instance.margin


def generate_contained_loops(rng, *, n=None) -> LemmaInstance | None:
    n = n or int(rng.integers(3, 9))
    R = 2.0
    gap = 2 * R * math.sin(math.pi / n)
    base_r = gap / 2 * rng.uniform(1.08, 1.30)
    solid = []
    dashed = []
    for k in range(n):
        ang = TWO_PI * k / n + rng.normal(0, 0.02)
        c = R * np.exp(1j * ang)
        r = base_r * rng.uniform(0.97, 1.05)
        solid.append(Disk(c, r))
        s = rng.uniform(0.88, 0.96)
        off = complex(*rng.normal(0, r * (1 - s) * 0.3, 2))
        dashed.append(Disk(c + off, r * s))
    inst = LemmaInstance("contained_loops", {"solid": solid, "dashed": dashed})
    return inst if contained_loops_hypothesis(solid, dashed) else None


HEX_CHAIN_SOLID = [
    Disk(1.56 + 1.01j, 1.56),
    Disk(3.06 + 2.21j, 1.38),
    Disk(4.83 + 1.66j, 1.21),
    Disk(6.16 + 0.55j, 0.94),
    Disk(5.68 - 1.41j, 1.62),
    Disk(2.92 - 1.59j, 2.0),
]
HEX_CHAIN_NESTED = [
    Disk(1.53 + 0.92j, 1.41),
    Disk(3.03 + 2.28j, 1.25),
    Disk(4.87 + 1.62j, 1.07),
    Disk(6.12 + 0.57j, 0.82),
    Disk(5.72 - 1.37j, 1.44),
    Disk(2.99 - 1.5j, 1.77),
]


# --- hat / shoes / pop (three-disk configurations via the topological codes) -------------


def _triple_code(dm: Disk, dp: Disk, D: Disk):
    try:
        return classify_triple(dm, dp, D, "Atilde").letter
    except (HypothesesViolated, Exception):
        return None


def hat_hypothesis(disks) -> bool:
    dm, dp, D = disks["dm"], disks["dp"], disks["D"]
    if not (overlaps(dm, dp) and overlaps(dm, D) and overlaps(dp, D)):
        return False
    if not _no_containment(dm, dp, D):
        return False
    return _triple_code(dm, dp, D) == "c"


def check_hat(instance: LemmaInstance) -> float:
    d = instance.disks
    if not hat_hypothesis(d):
        raise HypothesisUnmet("hat cast invalid")
    lhs = math.pi + overlap_angle(d["dm"], d["dp"])
    rhs = overlap_angle(d["dm"], d["D"]) + overlap_angle(d["dp"], d["D"])
    instance.margin = rhs - lhs
    return instance.margin


def generate_hat(rng) -> LemmaInstance | None:
    r1, r2 = rng.uniform(0.6, 1.1, 2)
    theta = rng.uniform(0.2, 0.95) * math.pi
    dm = Disk(0j, r1)
    dp = Disk(_pair_distance(r1, r2, theta) + 0j, r2)
    u, v = circle_intersections(dm, dp)
    mid = (u + v) / 2
    R = abs(u - mid) * rng.uniform(1.4, 3.0) + rng.uniform(0.2, 0.8)
    D = Disk(mid + complex(*rng.normal(0, 0.15, 2)), R)
    disks = {"dm": dm, "dp": dp, "D": D}
    inst = LemmaInstance("hat", disks)
    return inst if hat_hypothesis(disks) else None


def shoes_hypothesis(disks) -> bool:
    dm, dp, D = disks["dm"], disks["dp"], disks["D"]
    if not (overlaps(dm, dp) and overlaps(dm, D) and overlaps(dp, D)):
        return False
    if not _no_containment(dm, dp, D):
        return False
    return _triple_code(dm, dp, D) in ("d", "e")


def check_shoes(instance: LemmaInstance) -> float:
    d = instance.disks
    if not shoes_hypothesis(d):
        raise HypothesisUnmet("shoes cast invalid")
    lhs = overlap_angle(d["dm"], d["D"]) + overlap_angle(d["dp"], d["D"])
    rhs = math.pi + overlap_angle(d["dm"], d["dp"])
    instance.margin = rhs - lhs
    return instance.margin


def generate_shoes(rng) -> LemmaInstance | None:
    r1, r2 = rng.uniform(0.7, 1.2, 2)
    theta = rng.uniform(0.25, 0.9) * math.pi
    dm = Disk(0j, r1)
    dp = Disk(_pair_distance(r1, r2, theta) + 0j, r2)
    u, v = circle_intersections(dm, dp)
    corner = u if rng.random() < 0.5 else v
    R = rng.uniform(0.45, 1.0)
    D = Disk(corner + complex(*rng.normal(0, R * 0.35, 2)), R)
    disks = {"dm": dm, "dp": dp, "D": D}
    inst = LemmaInstance("shoes", disks)
    return inst if shoes_hypothesis(disks) else None


def pop_hypothesis(disks) -> bool:
    dm, dp, D = disks["dm"], disks["dp"], disks["D"]
    if not (overlaps(dm, dp) and overlaps(dm, D) and overlaps(dp, D)):
        return False
    if not _no_containment(dm, dp, D):
        return False
    return _triple_code(dm, dp, D) in ("c", "g")


def check_pop(instance: LemmaInstance) -> float:
    d = instance.disks
    if not pop_hypothesis(d):
        raise HypothesisUnmet("pop cast invalid")
    base = overlap_angle(d["dm"], d["dp"])
    instance.margin = min(overlap_angle(d["dm"], d["D"]), overlap_angle(d["dp"], d["D"])) - base
    return instance.margin


def generate_pop(rng) -> LemmaInstance | None:
    if rng.random() < 0.5:
        inst = generate_hat(rng)
        if inst is not None:
            inst = LemmaInstance("pop", inst.disks)
            return inst if pop_hypothesis(inst.disks) else None
        return None
    # pop1: small disk swallowed by the union of two larger overlapping disks
    r1, r2 = rng.uniform(0.9, 1.3, 2)
    theta = rng.uniform(0.3, 0.8) * math.pi
    dm = Disk(0j, r1)
    dist = _pair_distance(r1, r2, theta)
    dp = Disk(dist + 0j, r2)
    R = rng.uniform(0.3, 0.62)
    D = Disk(complex(dist / 2 + rng.normal(0, 0.08), rng.normal(0, 0.08)), R)
    disks = {"dm": dm, "dp": dp, "D": D}
    inst = LemmaInstance("pop", disks)
    return inst if pop_hypothesis(disks) and _triple_code(dm, dp, D) == "g" else None


# --- eye lemmas -----------------------------------------------------------------------


@dataclass
class EyeQuadruple:
    A: Disk
    B: Disk
    At: Disk
    Bt: Disk

    def corners(self):
        u, v = circle_intersections(self.A, self.B)
        ut, vt = circle_intersections(self.At, self.Bt)
        return u, v, ut, vt

    def eye_regions(self):
        return Lens(self.A, self.B), Lens(self.At, self.Bt)


def quadruple_general_position(q: EyeQuadruple) -> bool:
    cfg = DiskConfiguration([("a", q.A), ("b", q.B)])
    cfg_t = DiskConfiguration([("a", q.At), ("b", q.Bt)])
    if not overlaps(q.A, q.B) or not overlaps(q.At, q.Bt):
        return False
    return is_general_position(cfg, cfg_t)[0]


def eye_boundary_crossings(q: EyeQuadruple) -> int:
    return len(eye_boundary_crossing_pairs(q))


def eye_boundary_crossing_pairs(q: EyeQuadruple):
    """Eye-boundary crossing points tagged by (plain circle, tilde circle):
    each tag is ("A"|"B", "At"|"Bt")."""
    E, Et = q.eye_regions()
    arcs = list(zip(("A", "B"), E.boundary_arcs()))
    arcs_t = list(zip(("At", "Bt"), Et.boundary_arcs()))
    out = []
    for name, a in arcs:
        for name_t, b in arcs_t:
            for z in arc_circle_crossings(a, b.disk):
                t = (b.disk.angle_of(z) - b.a0) % TWO_PI
                if t <= b.da:
                    out.append(((name, name_t), z))
    return out


def check_eye_lemmas(q: EyeQuadruple) -> dict:
    """Verify every applicable eye-lemma conclusion on the quadruple."""
    if not quadruple_general_position(q):
        raise HypothesisUnmet("quadruple not in general position")
    u, v, ut, vt = q.corners()
    E, Et = q.eye_regions()
    n_cross = eye_boundary_crossings(q)
    report = {"crossings": n_cross, "lem1_ok": n_cross in (0, 2, 4, 6)}

    a_meet = regions_meet(Lune(q.A, q.B), Lune(q.At, q.Bt))
    b_meet = regions_meet(Lune(q.B, q.A), Lune(q.Bt, q.At))
    report["diff_regions_meet"] = (a_meet, b_meet)

    if n_cross == 6 and a_meet and b_meet:
        ok = not (Et.contains(u) or Et.contains(v) or E.contains(ut) or E.contains(vt))
        report["lem2_ok"] = ok

    report["lem3"] = _lem3_report(q)

    if n_cross == 4 and E.contains(ut, strict=True) and E.contains(vt, strict=True) and not Et.contains(u) and not Et.contains(v):
        # the threaded configuration also requires the crossings to pair the
        # tilde eye arcs with the opposite plain circles
        tags = sorted(t for t, _z in eye_boundary_crossing_pairs(q))
        if tags == [("A", "Bt"), ("A", "Bt"), ("B", "At"), ("B", "At")]:
            report["lem4_ok"] = (not a_meet) and (not b_meet)

    if Et.contains(u, strict=True) and E.contains(ut, strict=True):
        report["lem5_ok"] = (not a_meet) or (not b_meet)
    return report


def _lem3_report(q: EyeQuadruple):
    """The four disjointness implications; each entry is (hypothesis_held,
    conclusion_ok or None)."""
    u, v, ut, vt = q.corners()
    arc_at = arc_between(q.At, ut, vt)  # [u~ -> v~] along the eye boundary of At
    arc_bt = arc_between(q.Bt, vt, ut)
    arc_a = arc_between(q.A, u, v)
    arc_b = arc_between(q.B, v, u)
    out = []
    cases = [
        (arc_at, q.A, arc_bt, lambda: not regions_meet(Lune(q.B, q.A), Lune(q.Bt, q.At))),
        (arc_bt, q.B, arc_at, lambda: not regions_meet(Lune(q.A, q.B), Lune(q.At, q.Bt))),
        (arc_a, q.At, arc_b, lambda: not regions_meet(Lune(q.Bt, q.At), Lune(q.B, q.A))),
        (arc_b, q.Bt, arc_a, lambda: not regions_meet(Lune(q.At, q.Bt), Lune(q.A, q.B))),
    ]
    for inside_arc, big, other_arc, conclusion in cases:
        hyp = arc_in_disk(inside_arc, big) and len(arc_circle_crossings(other_arc, big)) > 0
        out.append((hyp, conclusion() if hyp else None))
    return out


def generate_eye_quadruple(rng, *, mode="free") -> EyeQuadruple | None:
    """Random general-position quadruples; mode biases toward higher crossing
    counts ("rotate" reuses the base pair rotated about the eye center)."""
    theta = rng.uniform(0.2, 0.95) * math.pi
    rB = rng.uniform(0.7, 1.3)
    A = Disk(0j, 1.0)
    B = Disk(_pair_distance(1.0, rB, theta) + 0j, rB)
    if mode == "rotate":
        u, v = circle_intersections(A, B)
        pivot = (u + v) / 2 + complex(*rng.normal(0, 0.05, 2))
        rot = np.exp(1j * rng.uniform(0.15, math.pi - 0.15))
        scale = rng.uniform(0.9, 1.12)
        move = complex(*rng.normal(0, 0.08, 2))
        f = lambda z: pivot + (z - pivot) * rot * scale + move
        At = Disk(f(A.center), A.radius * scale)
        Bt = Disk(f(B.center), B.radius * scale)
    else:
        thetat = rng.uniform(0.2, 0.95) * math.pi
        rAt, rBt = rng.uniform(0.6, 1.4, 2)
        ct = complex(*rng.normal(0, 0.8, 2))
        direction = np.exp(1j * rng.uniform(0, TWO_PI))
        At = Disk(ct, rAt)
        Bt = Disk(ct + _pair_distance(rAt, rBt, thetat) * direction, rBt)
    q = EyeQuadruple(A, B, At, Bt)
    try:
        if not quadruple_general_position(q):
            return None
    except Exception:
        return None
    return q


# --- registry used by the CLI and the acceptance suite ------------------------------


SUITES = {
    "four_disk": (generate_four_disk, check_four_disk),
    "meat": (generate_meat, check_meat),
    "finlandia": (generate_finlandia, check_finlandia),
    "mogwai": (generate_mogwai, check_mogwai),
    "contained_loops": (generate_contained_loops, check_contained_loops),
    "hat": (generate_hat, check_hat),
    "shoes": (generate_shoes, check_shoes),
    "pop": (generate_pop, check_pop),
}


def run_suite(lemma_id: str, seed: int, count: int):
    """Generate `count` hypothesis-valid instances and return their margins."""
    rng = np.random.default_rng(seed)
    gen, check = SUITES[lemma_id]
    margins = []
    attempts = 0
    while len(margins) < count:
        attempts += 1
        if attempts > 400 * count:
            raise HypothesisUnmet(f"generator for {lemma_id} starves: {len(margins)}/{count}")
        inst = gen(rng)
        if inst is None:
            continue
        margins.append(check(inst))
    return margins
