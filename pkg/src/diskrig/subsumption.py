"""Subsumptive/isolated subset detection, the directed shift graph H over each
maximal subset, sinks, and the index lower bound of the main theorem."""
from __future__ import annotations

from dataclasses import dataclass, field

from .config import DiskConfiguration, contact_graph
from .errors import ObservationViolated
from .geom import (
    EPS_ANGLE,
    Disk,
    DiskRelation,
    circle_intersections,
    disk_relation,
    overlap_angle,
    overlaps,
)


@dataclass
class SubsetInfo:
    vertices: frozenset
    direction: str  # "down": D~ inside D; "up": D inside D~
    isolated: bool
    hu_edges: list
    h_edges: list
    sink: object | None
    ties: list = field(default_factory=list)


@dataclass
class SubsumptionReport:
    subsets: list
    lower_bound: int

    @property
    def maximal_subsets(self):
        return [s.vertices for s in self.subsets]

    @property
    def isolated_flags(self):
        return [s.isolated for s in self.subsets]


def _containment_direction(d: Disk, dt: Disk) -> str | None:
    rel = disk_relation(d, dt)
    if rel is DiskRelation.FIRST_CONTAINS_SECOND:
        return "down"
    if rel is DiskRelation.SECOND_CONTAINS_FIRST:
        return "up"
    return None


def eye_containment(a: Disk, b: Disk, at: Disk, bt: Disk) -> str | None:
    """Whether one of the eyes E = a cap b, E~ = at cap bt contains the other:
    returns "fwd" (E~ inside E), "rev", or None."""
    crossings = 0
    for d1 in (a, b):
        for d2 in (at, bt):
            if overlaps(d1, d2):
                for z in circle_intersections(d1, d2):
                    if _on_eye_boundary(z, d1, a, b) and _on_eye_boundary(z, d2, at, bt):
                        crossings += 1
    if crossings:
        return None
    u, v = circle_intersections(a, b)
    ut, vt = circle_intersections(at, bt)
    if a.contains(ut) and b.contains(ut) and a.contains(vt) and b.contains(vt):
        return "fwd"
    if at.contains(u) and bt.contains(u) and at.contains(v) and bt.contains(v):
        return "rev"
    return None


def _on_eye_boundary(z: complex, carrier: Disk, a: Disk, b: Disk) -> bool:
    other = b if carrier is a else a
    return other.contains(z)


def subsumptive_subsets(config: DiskConfiguration, config_tilde: DiskConfiguration) -> SubsumptionReport:
    """Maximal subsumptive subsets (connected same-direction containment
    components of the contact graph), their isolation, H graphs, sinks, and
    the main-theorem lower bound."""
    inc = contact_graph(config)
    directions = {}
    for v in config.labels:
        d = _containment_direction(config.disks[v], config_tilde.disks[v])
        if d is not None:
            directions[v] = d
    adj = {v: set() for v in config.labels}
    for e in inc.edges:
        i, j = tuple(e)
        adj[i].add(j)
        adj[j].add(i)
    seen = set()
    subsets = []
    for v in sorted(directions, key=str):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in directions and directions[y] == directions[v] and y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        subsets.append((frozenset(comp), directions[v]))

    infos = []
    for comp, direction in subsets:
        isolated = True
        for i in comp:
            for j in adj[i] - comp:
                if not overlaps(config.disks[i], config.disks[j]):
                    continue
                if eye_containment(
                    config.disks[i], config.disks[j], config_tilde.disks[i], config_tilde.disks[j]
                ):
                    isolated = False
        hu, h, ties = _build_h(config, config_tilde, comp, direction, adj)
        # the report stays tolerant of inputs outside the same-incidence
        # hypothesis (ties, multiple sink candidates); build_H is the strict op
        outs = {i for i, _ in h}
        sinks = [v for v in sorted(comp, key=str) if v not in outs]
        sink = sinks[0] if len(sinks) == 1 else None
        infos.append(SubsetInfo(comp, direction, isolated, hu, h, sink, ties))
    bound = sum(1 for s in infos if s.isolated)
    return SubsumptionReport(infos, bound)


def _build_h(config, config_tilde, subset, direction, adj):
    if direction == "down":
        disks, disks_t = config.disks, config_tilde.disks
    else:
        disks, disks_t = config_tilde.disks, config.disks
    hu = []
    h = []
    ties = []
    for i in sorted(subset, key=str):
        for j in sorted(adj[i] & subset, key=str):
            if not overlaps(disks[i], disks[j]):
                continue
            if str(i) < str(j):
                hu.append((i, j))
            rel = disk_relation(disks_t[i], disks[j])
            if rel in (DiskRelation.SECOND_CONTAINS_FIRST, DiskRelation.INTERNALLY_TANGENT):
                h.append((i, j))
                continue
            if rel in (DiskRelation.OVERLAPPING, DiskRelation.EXTERNALLY_TANGENT):
                shifted = overlap_angle(disks_t[i], disks[j])
                base = overlap_angle(disks[i], disks[j])
                if abs(shifted - base) <= EPS_ANGLE:
                    ties.append((i, j))
                elif shifted > base:
                    h.append((i, j))
    return hu, h, ties


def build_H(config, config_tilde, subset):
    """Directed shift edges over a subsumptive subset, with the observation
    checks: every undirected edge gets a direction (unless tied) and no vertex
    has two out-edges."""
    inc = contact_graph(config)
    adj = {v: set() for v in config.labels}
    for e in inc.edges:
        i, j = tuple(e)
        adj[i].add(j)
        adj[j].add(i)
    dirs = {_containment_direction(config.disks[v], config_tilde.disks[v]) for v in subset}
    if len(dirs) != 1 or None in dirs:
        raise ObservationViolated("subset is not subsumptive in a single direction")
    direction = dirs.pop()
    hu, h, ties = _build_h(config, config_tilde, frozenset(subset), direction, adj)
    tied = {frozenset(t) for t in ties}
    out_count = {}
    for i, j in h:
        out_count[i] = out_count.get(i, 0) + 1
        if out_count[i] > 1:
            raise ObservationViolated(f"vertex {i} has two edges pointing away in H")
    for i, j in hu:
        if frozenset((i, j)) in tied:
            continue
        if (i, j) not in h and (j, i) not in h:
            raise ObservationViolated(f"undirected edge ({i},{j}) got no direction")
    if _has_cycle(subset, hu):
        raise ObservationViolated("H_u restricted to the subset is not a tree")
    return hu, h, ties


def _has_cycle(subset, hu_edges):
    parent = {v: v for v in subset}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in hu_edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            return True
        parent[ri] = rj
    return False


def find_sink(config, config_tilde, subset):
    """The unique vertex of the subset with no out-edge in H, if any."""
    _hu, h, _ties = build_H(config, config_tilde, subset)
    return _sink_of(frozenset(subset), h)


def _sink_of(subset, h_edges):
    outs = {i for i, _ in h_edges}
    sinks = [v for v in sorted(subset, key=str) if v not in outs]
    if len(sinks) > 1:
        raise ObservationViolated(f"multiple sinks {sinks}")
    return sinks[0] if sinks else None


def index_lower_bound(config: DiskConfiguration, config_tilde: DiskConfiguration) -> int:
    """Number of maximal isolated subsumptive subsets."""
    return subsumptive_subsets(config, config_tilde).lower_bound
