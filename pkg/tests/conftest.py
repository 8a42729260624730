import math

import numpy as np
import pytest

from diskrig.geom import Disk


@pytest.fixture
def rng():
    return np.random.default_rng(20240809)


def grid_triple_oracle(a: Disk, b: Disk, c: Disk, n: int = 400):
    """Dense grid oracle for triple intersection: (verdict, witness_margin).

    The margin is the largest distance by which a witness point clears all
    three boundaries (or, for empty verdicts, the smallest clearance failure).
    """
    lo_x = max(d.center.real - d.radius for d in (a, b, c))
    hi_x = min(d.center.real + d.radius for d in (a, b, c))
    lo_y = max(d.center.imag - d.radius for d in (a, b, c))
    hi_y = min(d.center.imag + d.radius for d in (a, b, c))
    if lo_x > hi_x or lo_y > hi_y:
        return False, math.inf
    xs = np.linspace(lo_x, hi_x, n)
    ys = np.linspace(lo_y, hi_y, n)
    X, Y = np.meshgrid(xs, ys)
    Z = X + 1j * Y
    depth = np.minimum.reduce([d.radius - np.abs(Z - d.center) for d in (a, b, c)])
    best = float(depth.max())
    return best >= 0, abs(best)


def random_disk(rng, center_scale=2.0, r_lo=0.4, r_hi=1.6) -> Disk:
    return Disk(complex(*rng.normal(0, center_scale, 2)), float(rng.uniform(r_lo, r_hi)))


def random_overlapping_pair(rng):
    from diskrig.geom import DiskRelation, disk_relation

    while True:
        a = random_disk(rng)
        theta = rng.uniform(0.05, 0.97) * math.pi
        r2 = rng.uniform(0.4, 1.6)
        d = math.sqrt(a.radius**2 + r2 * r2 + 2 * a.radius * r2 * math.cos(theta))
        b = Disk(a.center + d * np.exp(1j * rng.uniform(0, 2 * math.pi)), r2)
        if disk_relation(a, b) is DiskRelation.OVERLAPPING:
            return a, b
