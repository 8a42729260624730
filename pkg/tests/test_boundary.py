import math

import numpy as np
import pytest

from diskrig.boundary import (
    SampledLoopMap,
    boundary_complex,
    build_faithful_map,
    fixed_point_index,
    index_additivity,
    loop_index,
    sample_disk_boundary,
    signed_area,
    winding_number,
)
from diskrig.config import DiskConfiguration
from diskrig.errors import (
    CoincidentCorner,
    CombinatoricsMismatch,
    CornerOffBoundary,
    NearFixedPoint,
    PointOnCurve,
)
from diskrig.geom import Disk
from diskrig.moebius import apply_disk, dilation_about

NEGIDX_C = DiskConfiguration([(1, Disk(3.18 - 0.05j, 1.51)), (2, Disk(5.02 + 0.05j, 1.43))])
NEGIDX_CT = DiskConfiguration([(1, Disk(2.85 - 0.02j, 1.46)), (2, Disk(5.54 + 0.05j, 1.57))])
NEGIDX_PINS = {
    1: [(3.75 + 1.32j, 1.75 + 0.88j), (3.89 - 1.36j, 1.71 - 0.90j)],
    2: [(4.45 + 1.34j, 6.79 + 0.98j), (4.45 - 1.24j, 6.73 - 0.94j)],
}


def _circle(n=256, r=1.0, center=0j):
    return center + r * np.exp(1j * np.linspace(0, 2 * math.pi, n, endpoint=False))


def test_winding_number_cases():
    circ = _circle()
    assert winding_number(circ, 0j) == 1
    assert winding_number(circ, 3 + 0j) == 0
    assert winding_number(circ[::-1], 0j) == -1
    with pytest.raises(PointOnCurve):
        winding_number(circ, 1 + 0j)


def test_sample_disk_boundary():
    curve = sample_disk_boundary(Disk(0j, 1.0))
    assert len(curve.samples) == 512
    curve = sample_disk_boundary(Disk(0j, 1.0), corners=[1 + 0j, -1 + 0j])
    arr = np.asarray(curve.samples)
    assert np.min(np.abs(arr - 1)) == 0.0
    assert np.min(np.abs(arr + 1)) == 0.0
    # corner refinement: spacing near the corner is 8x finer than the base step
    angles = np.sort(np.angle(arr) % (2 * math.pi))
    gaps = np.diff(angles)
    near = gaps[angles[:-1] < 0.04]
    assert near.max() <= (2 * math.pi / 512) / 8 + 1e-12
    with pytest.raises(CornerOffBoundary):
        sample_disk_boundary(Disk(0j, 1.0), corners=[2 + 0j])


def test_boundary_complex_shapes():
    single = boundary_complex(DiskConfiguration([("a", Disk(0j, 1.0))]))
    assert len(single.curves) == 1
    assert len(single.curves[0].pieces) == 1

    two = boundary_complex(DiskConfiguration([("a", Disk(0j, 1.0)), ("b", Disk(1 + 0j, 1.0))]))
    assert len(two.curves) == 1
    assert [p.vertex for p in two.curves[0].pieces] in (["a", "b"], ["b", "a"])

    ring_items = []
    n = 6
    for k in range(n):
        ring_items.append((k, Disk(2 * np.exp(2j * math.pi * k / n), 1.2)))
    ring = boundary_complex(DiskConfiguration(ring_items))
    assert len(ring.curves) == 2
    areas = sorted(signed_area(pts) for pts, _v, _t in ring.curve_samples())
    assert areas[0] < 0 < areas[1]  # inner curve clockwise, outer counterclockwise


def test_faithful_map_translation():
    c = DiskConfiguration([("a", Disk(0j, 1.0)), ("b", Disk(1 + 0j, 1.0))])
    ct = c.transformed(lambda d: Disk(d.center + 5, d.radius))
    fmap = build_faithful_map(c, ct)
    rep = fixed_point_index(fmap)
    assert rep.eta == 0
    assert abs(rep.min_displacement - 5) < 0.2


def test_faithful_map_identical_raises():
    c = DiskConfiguration([("a", Disk(0j, 1.0)), ("b", Disk(1 + 0j, 1.0))])
    with pytest.raises(CoincidentCorner):
        build_faithful_map(c, c)


def test_faithful_map_combinatorics_mismatch():
    c = DiskConfiguration([("a", Disk(0j, 1.0)), ("b", Disk(1 + 0j, 1.0))])
    far = DiskConfiguration([("a", Disk(0j, 1.0)), ("b", Disk(5 + 0j, 1.0))])
    with pytest.raises(CombinatoricsMismatch):
        build_faithful_map(c, far)


def test_fixed_point_index_radial():
    # boundary of the unit disk onto a concentric radius-3 circle
    src = _circle(512)
    dst = 3 * src
    assert loop_index(SampledLoopMap(src, dst)) == 1


def test_fixed_point_index_translation_circle():
    src = _circle(512)
    assert loop_index(SampledLoopMap(src, src + 5)) == 0


def test_negative_index_counterexample():
    fmap = build_faithful_map(NEGIDX_C, NEGIDX_CT, pins=NEGIDX_PINS)
    assert fixed_point_index(fmap).eta == -1
    # without the pinned identifications the arc-proportional map gives +1
    plain = build_faithful_map(NEGIDX_C, NEGIDX_CT)
    assert fixed_point_index(plain).eta == 1


def test_index_inverse_invariance(rng):
    from conftest import random_overlapping_pair

    done = 0
    while done < 200:
        a, b = random_overlapping_pair(rng)
        c = DiskConfiguration([("k", a)])
        shift = complex(*rng.normal(0, 2, 2))
        scale = rng.uniform(0.5, 1.8)
        ct = DiskConfiguration([("k", Disk(b.center + shift, b.radius * scale))])
        try:
            fwd = build_faithful_map(c, ct, rng=rng, n_random_pins=2)
            bwd = build_faithful_map(ct, c)
            # invert the forward map exactly by swapping the node roles
            vm = fwd.vmaps["k"]
            bwd.vmaps["k"].nodes = sorted((tt, t) for t, tt in vm.nodes)
            e1 = fixed_point_index(fwd).eta
            e2 = fixed_point_index(bwd).eta
        except (NearFixedPoint, CoincidentCorner):
            continue
        assert e1 == e2
        done += 1


def test_metric_disk_index_nonnegative(rng):
    # eta >= 0 for any indexable map between metric disk boundaries, all
    # relation classes; containment gives exactly 1, disjoint gives exactly 0
    done = 0
    while done < 300:
        d1 = Disk(complex(*rng.normal(0, 1.5, 2)), rng.uniform(0.4, 1.5))
        d2 = Disk(complex(*rng.normal(0, 1.5, 2)), rng.uniform(0.4, 1.5))
        c = DiskConfiguration([("k", d1)])
        ct = DiskConfiguration([("k", d2)])
        try:
            fmap = build_faithful_map(c, ct, rng=rng, n_random_pins=3)
            eta = fixed_point_index(fmap).eta
        except (NearFixedPoint, CoincidentCorner):
            continue
        assert eta >= 0
        rel = abs(d1.center - d2.center)
        if rel + d2.radius < d1.radius or rel + d1.radius < d2.radius:
            assert eta == 1
        if rel > d1.radius + d2.radius:
            assert eta == 0
        done += 1


def test_index_additivity_disjoint_targets():
    # a disk split along a chord, mapped by a common translation far away
    n = 400
    t = np.linspace(0, math.pi, n)
    upper = np.concatenate([np.exp(1j * t[:-1]), np.linspace(-1, 1, n)[:-1]])
    lower = np.concatenate([np.exp(1j * (t + math.pi))[:-1], np.linspace(1, -1, n)[:-1]])
    shift = 7 + 2j
    mk = SampledLoopMap(upper, upper + shift)
    ml = SampledLoopMap(lower, lower + shift)
    glued, parts = index_additivity(mk, ml)
    assert glued == parts == 0


def test_index_additivity_nested_target():
    # glued disk maps into a larger concentric disk: 1 = eta_K + eta_L
    n = 400
    t = np.linspace(0, math.pi, n)
    chord = np.linspace(-1, 1, n)
    upper = np.concatenate([np.exp(1j * t[:-1]), chord[:-1]])
    lower = np.concatenate([np.exp(1j * (t + math.pi))[:-1], (-chord)[:-1]])
    f = lambda z: 3 * z - 0.6j  # expansion with fixed point 0.3j in the upper half
    mk = SampledLoopMap(upper, f(upper))
    ml = SampledLoopMap(lower, f(lower))
    glued, parts = index_additivity(mk, ml)
    assert glued == parts == 1
    assert loop_index(mk) == 1 and loop_index(ml) == 0


def test_index_additivity_shared_arc_cancels():
    # displacement contributions along the shared arc cancel: the glued index
    # equals the sum regardless of the map chosen on the shared arc
    n = 300
    t = np.linspace(0, math.pi, n)
    chord = np.linspace(-1, 1, n)
    upper = np.concatenate([np.exp(1j * t[:-1]), chord[:-1]])
    lower = np.concatenate([np.exp(1j * (t + math.pi))[:-1], (-chord)[:-1]])
    f = lambda z: z * np.exp(0.3j * np.abs(z)) + 4j
    mk = SampledLoopMap(upper, f(upper))
    ml = SampledLoopMap(lower, f(lower))
    glued, parts = index_additivity(mk, ml)
    assert glued == parts


def test_index_stability_resample_and_jitter(rng):
    fmap = build_faithful_map(NEGIDX_C, NEGIDX_CT, pins=NEGIDX_PINS)
    base = fixed_point_index(fmap).eta
    dense = [loop_index(l) for l in fmap.loops(density=2)]
    assert sum(dense) == base
    jit = 1e-10
    c_j = NEGIDX_C.transformed(lambda d: Disk(d.center + complex(jit, -jit), d.radius + jit))
    fmap_j = build_faithful_map(c_j, NEGIDX_CT, pins=NEGIDX_PINS)
    assert fixed_point_index(fmap_j).eta == base


def test_tangency_packing_pair():
    # classical packing case: tangency contacts trace through pinch points,
    # the union has one outer curve plus six interstice curves, and with no
    # eyes the additivity identity reduces to eta == sum of per-disk indices
    from diskrig.solver import FixedBoundaryRadii, flower, layout, solve_radii
    from diskrig.subsumption import index_lower_bound

    tri = flower(6)
    c = layout(tri, solve_radii(tri, {}, FixedBoundaryRadii({k: 1.0 for k in range(1, 7)})), {})
    other = {k: [1.3, 0.8, 1.1, 0.9, 1.2, 1.0][k - 1] for k in range(1, 7)}
    ct = layout(tri, solve_radii(tri, {}, FixedBoundaryRadii(other)), {})
    fmap = build_faithful_map(c, ct)
    rep = fixed_point_index(fmap)
    assert len(rep.per_curve) == 7
    bound = index_lower_bound(c, ct)
    assert rep.eta >= bound
    deltas = sum(loop_index(fmap.disk_loop(v)) for v in c.labels)
    assert rep.eta == deltas


def test_multiply_connected_ring_pair(rng):
    items = [(k, Disk(2 * np.exp(2j * math.pi * k / 6), 1.2)) for k in range(6)]
    c = DiskConfiguration(items)
    m = dilation_about(0.1 + 0.05j, 0.93)
    ct = c.transformed(lambda d: apply_disk(m, d))
    fmap = build_faithful_map(c, ct)
    rep = fixed_point_index(fmap)
    assert len(rep.per_curve) == 2
    assert rep.eta == sum(rep.per_curve)
    # decomposition invariance: permuting the curve pairing order cannot
    # change the sum
    assert fixed_point_index(fmap).eta == rep.eta
