"""Level-k Garland posets of simplicial and cubical face posets: link-graph
components, orientation, axiom checks and transversal monodromy."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from itertools import combinations
from math import comb

from .complex import CUBICAL, SIMPLICIAL, ComplexError, FacePoset
from .unionfind import UnionFind

PHI = -1  # the extra bottom element; cell ids are nonnegative


class PurityError(ComplexError):
    pass


class AxiomError(ValueError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"Garland axioms fail: {report.summary()}")


class ObstructionError(ValueError):
    def __init__(self, component, edge):
        self.component = component
        self.edge = edge
        super().__init__(
            f"no orientation of transversal component {component}: edge {edge} closes inconsistently")


@dataclass
class Component:
    id: int
    kind: str  # "geometric" or "transversal"
    pi: int  # cell of rank k-1, or PHI
    vertices: list  # cells b of rank k, sorted
    edges: list  # (c, b, b') triples

    @property
    def pairs(self):
        return [(self.pi, b) for b in self.vertices]

    def to_dict(self):
        return {
            "id": self.id,
            "kind": self.kind,
            "pi": None if self.pi == PHI else self.pi,
            "size": len(self.vertices),
            "edgeCount": len(self.edges),
        }


@dataclass
class LinkGraph:
    level: int
    kind: str
    components: list

    def count(self, kind):
        return sum(1 for c in self.components if c.kind == kind)

    def to_dict(self):
        return {
            "level": self.level,
            "kind": self.kind,
            "geometric": self.count("geometric"),
            "transversal": self.count("transversal"),
            "components": [c.to_dict() for c in self.components],
        }


def _meet(fp, b, b2, k):
    """Unique common (k-1)-face of b and b2, or PHI."""
    if k == 0:
        return PHI
    common = set(fp.facets[b]) & set(fp.facets[b2])
    return next(iter(common)) if len(common) == 1 else PHI


def link_components(fp: FacePoset, k: int) -> LinkGraph:
    if k < 0:
        raise ValueError("level must be nonnegative")
    S0 = fp.rank_cells(k)
    S1 = fp.rank_cells(k + 1)
    s1set = set(S1)
    lonely = [b for b in S0 if not any(c in s1set for c in fp.cofacets[b])]
    if not S0 or lonely:
        raise PurityError(
            f"level {k} needs every {k}-cell to have a {k + 1}-coface; "
            + (f"cells without one: {lonely[:10]}" if lonely else f"no {k}-cells"))

    uf = UnionFind()
    for b in S0:
        if k == 0 or fp.kind == CUBICAL:
            uf.add((PHI, b))
        if k > 0:
            for p in fp.facets[b]:
                uf.add((p, b))
    edges = []
    for c in S1:
        for b, b2 in combinations(fp.facets[c], 2):
            p = _meet(fp, b, b2, k)
            if p == PHI and k > 0 and fp.kind == SIMPLICIAL:
                raise ComplexError(f"facets {b}, {b2} of simplex {c} share no {k - 1}-face")
            uf.union((p, b), (p, b2))
            edges.append((p, c, b, b2))

    groups = {}
    for root, members in uf.groups().items():
        p = members[0][0]
        groups[root] = (p, sorted(b for _, b in members))
    edge_lists = {root: [] for root in groups}
    for p, c, b, b2 in edges:
        edge_lists[uf.find((p, b))].append((c, b, b2))

    def kind_of(p):
        return "transversal" if p == PHI and fp.kind == CUBICAL else "geometric"

    order = sorted(groups, key=lambda r: (kind_of(groups[r][0]) != "geometric", groups[r][0], groups[r][1][0]))
    comps = [
        Component(i, kind_of(groups[r][0]), groups[r][0], groups[r][1], edge_lists[r])
        for i, r in enumerate(order)
    ]
    return LinkGraph(k, fp.kind, comps)


def garland_constants(kind, k):
    if kind == SIMPLICIAL:
        return k + 1, comb(k + 2, 2), 1
    return 2 * k + 1, comb(2 * k + 2, 2), 1


@dataclass
class GarlandPoset:
    level: int
    kind: str
    s_minus: list
    s_zero: list
    s_one: list
    below: dict  # b -> components a < b
    cofaces: dict  # b -> cells c > b in S1
    faces: dict  # c -> cells b < c in S0
    w: dict  # (a, b) and (b, c) covers -> +-1
    n0: int
    n1: int
    n010: int
    pi: dict
    link: LinkGraph = field(repr=False)

    def above(self, a):
        return self.link.components[a].vertices

    def components_below(self, c):
        out = set()
        for b in self.faces[c]:
            out.update(self.below[b])
        return out

    def with_w(self, key, value):
        w = dict(self.w)
        w[key] = value
        return replace(self, w=w)

    def to_dict(self):
        return {
            "level": self.level,
            "kind": self.kind,
            "sizes": {"S-1": len(self.s_minus), "S0": len(self.s_zero), "S1": len(self.s_one)},
            "constants": {"n0": self.n0, "n1": self.n1, "n010": self.n010},
            "link": self.link.to_dict(),
        }


def orient_transversal(fp: FacePoset, k: int, lg: LinkGraph) -> dict:
    """Orientation on (a, b) covers of every transversal component, by
    breadth-first propagation from the smallest vertex."""
    w = {}
    for comp in lg.components:
        if comp.kind != "transversal":
            continue
        adj = _adjacency(comp)
        root = comp.vertices[0]
        val = {root: 1}
        queue = deque([root])
        tree = set()
        while queue:
            b = queue.popleft()
            for idx, c, b2 in adj[b]:
                if b2 not in val:
                    val[b2] = -val[b] * fp.sign(b, c) * fp.sign(b2, c)
                    tree.add(idx)
                    queue.append(b2)
        for idx, (c, b, b2) in enumerate(comp.edges):
            if idx in tree:
                continue
            if val[b2] != -val[b] * fp.sign(b, c) * fp.sign(b2, c):
                raise ObstructionError(comp.id, (c, b, b2))
        for b, s in val.items():
            w[(comp.id, b)] = s
    return w


def _adjacency(comp):
    adj = {b: [] for b in comp.vertices}
    for idx, (c, b, b2) in enumerate(comp.edges):
        adj[b].append((idx, c, b2))
        adj[b2].append((idx, c, b))
    return adj


def build_garland(fp: FacePoset, k: int, lg: LinkGraph | None = None, check=True) -> GarlandPoset:
    lg = lg or link_components(fp, k)
    S0 = fp.rank_cells(k)
    S1 = fp.rank_cells(k + 1)
    s1set = set(S1)
    below = {b: [] for b in S0}
    for comp in lg.components:
        for b in comp.vertices:
            below[b].append(comp.id)
    cofaces = {b: [c for c in fp.cofacets[b] if c in s1set] for b in S0}
    faces = {c: list(fp.facets[c]) for c in S1}
    w = {}
    for c in S1:
        for b in fp.facets[c]:
            w[(b, c)] = fp.sign(b, c)
    for comp in lg.components:
        if comp.kind == "geometric":
            for b in comp.vertices:
                w[(comp.id, b)] = 1 if comp.pi == PHI else fp.sign(comp.pi, b)
    if fp.kind == CUBICAL:
        w.update(orient_transversal(fp, k, lg))
    n0, n1, n010 = garland_constants(fp.kind, k)
    g = GarlandPoset(
        level=k, kind=fp.kind,
        s_minus=[c.id for c in lg.components], s_zero=list(S0), s_one=list(S1),
        below=below, cofaces=cofaces, faces=faces, w=w,
        n0=n0, n1=n1, n010=n010,
        pi={c.id: c.pi for c in lg.components}, link=lg,
    )
    if check:
        report = check_axioms(g)
        if not report.ok:
            raise AxiomError(report)
    return g


@dataclass
class AxiomReport:
    results: dict  # axiom -> None (pass) or counterexample tuple

    @property
    def ok(self):
        return all(v is None for v in self.results.values())

    def summary(self):
        return ", ".join(f"{ax}: {'pass' if v is None else f'fail at {v}'}" for ax, v in self.results.items())

    def to_dict(self):
        return {ax: {"pass": v is None, "counterexample": None if v is None else list(v)}
                for ax, v in self.results.items()}


def check_axioms(g: GarlandPoset) -> AxiomReport:
    res = {"P1": None, "P2": None, "P3": None, "P4": None, "P5": None}
    below = {b: set(v) for b, v in g.below.items()}
    for b in g.s_zero:
        if len(below[b]) != g.n0:
            res["P1"] = (b,)
            break
    for c in g.s_one:
        if len(g.components_below(c)) != g.n1:
            res["P2"] = (c,)
            break
    for c in g.s_one:
        for b, b2 in combinations(g.faces[c], 2):
            if b != b2 and len(below[b] & below[b2]) != g.n010:
                res["P3"] = (b, c, b2)
                break
        if res["P3"]:
            break

    up_b = {a: [] for a in g.s_minus}
    for b in g.s_zero:
        for a in below[b]:
            up_b[a].append(b)
    for a in g.s_minus:
        uf = UnionFind(("b", b) for b in up_b[a])
        for b in up_b[a]:
            for c in g.cofaces[b]:
                uf.add(("c", c))
                uf.union(("b", b), ("c", c))
        if len(uf) != 1:
            res["P4"] = (a,)
            break

    for a in g.s_minus:
        mids = {}
        for b in up_b[a]:
            for c in g.cofaces[b]:
                mids.setdefault(c, []).append(b)
        bad = None
        for c in sorted(mids):
            ms = mids[c]
            if len(ms) != 2:
                bad = (a, c)
                break
            b, b2 = ms
            lhs = g.w[(a, b)] * g.w[(b, c)]
            rhs = -g.w[(a, b2)] * g.w[(b2, c)]
            if lhs != rhs:
                bad = (a, c)
                break
        if bad:
            res["P5"] = bad
            break
    return AxiomReport(res)


@dataclass
class MonodromyReport:
    free: bool
    witness: tuple | None
    per_component: dict  # component id -> {"free": bool, "holonomyGroupSize": int}

    def to_dict(self):
        return {
            "free": self.free,
            "witness": None if self.witness is None else list(self.witness),
            "perComponent": {str(a): v for a, v in self.per_component.items()},
        }


def _transport(fp, c, b, b2):
    """Across-cube identification of the facets of b with those of the
    opposite facet b2 of c."""
    out = {}
    for x in fp.facets[b]:
        g = [f for f in fp.facets[c] if f != b and x in fp.facets[f]]
        if len(g) != 1:
            raise ComplexError(f"face {x} of {b} is not in exactly one other facet of {c}")
        y = set(fp.facets[g[0]]) & set(fp.facets[b2])
        if len(y) != 1:
            raise ComplexError(f"facets {g[0]} and {b2} of {c} do not meet in one face")
        out[x] = y.pop()
    return out


def _group_size(gens, n):
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(g[i] for i in p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return len(seen)


def check_monodromy_free(fp: FacePoset, k: int, lg: LinkGraph) -> MonodromyReport:
    """Transport the facet frame of a base cube around each transversal
    component; free iff every closing edge returns the identity frame."""
    per = {}
    witness = None
    for comp in lg.components:
        if comp.kind != "transversal":
            continue
        adj = _adjacency(comp)
        root = comp.vertices[0]
        frame = {root: list(fp.facets[root])}
        queue = deque([root])
        tree = set()
        while queue:
            b = queue.popleft()
            for idx, c, b2 in adj[b]:
                if b2 not in frame:
                    m = _transport(fp, c, b, b2)
                    frame[b2] = [m[x] for x in frame[b]]
                    tree.add(idx)
                    queue.append(b2)
        gens = []
        first_bad = None
        for idx, (c, b, b2) in enumerate(comp.edges):
            if idx in tree:
                continue
            m = _transport(fp, c, b, b2)
            moved = [m[x] for x in frame[b]]
            pos = {x: i for i, x in enumerate(frame[b2])}
            perm = tuple(pos[x] for x in moved)
            if perm != tuple(range(len(perm))):
                gens.append(perm)
                if first_bad is None:
                    first_bad = (c, b, b2)
        size = _group_size(gens, len(fp.facets[root])) if gens else 1
        per[comp.id] = {"free": not gens, "holonomyGroupSize": size}
        if first_bad and witness is None:
            witness = first_bad
    return MonodromyReport(all(v["free"] for v in per.values()), witness, per)
