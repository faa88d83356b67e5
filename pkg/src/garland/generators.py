"""Deterministic complexes (tori, cycles, cubes, cross-polytopes, moment-angle
complexes) and the seeded random models ydelta, ybox and zbox."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import networkx as nx

from .complex import CUBICAL, SIMPLICIAL, Cell, CellComplex, FacePoset, face_poset, facet_sign
from .poset import check_monodromy_free, link_components
from .rng import SplitMix64
from .unionfind import UnionFind

FREE = 2  # marks a free axis in a cubical face vector


class GeneratorError(ValueError):
    pass


class RejectionCapExceeded(GeneratorError):
    pass


def _assemble(kind, keyed):
    """keyed: dict key -> (dim, facet keys).  Ids follow (dim, key) order."""
    order = sorted(keyed, key=lambda x: (keyed[x][0], x))
    ids = {key: i for i, key in enumerate(order)}
    cells = tuple(Cell(ids[key], keyed[key][0], tuple(ids[f] for f in keyed[key][1])) for key in order)
    return CellComplex(kind, cells)


def delta_complex(simplices):
    """Delta-complex generated by ordered vertex tuples; faces with equal
    ordered vertex tuples are identified."""
    keyed = {}
    stack = [tuple(s) for s in simplices]
    while stack:
        s = stack.pop()
        if s in keyed:
            continue
        facets = [s[:i] + s[i + 1:] for i in range(len(s))] if len(s) > 1 else []
        keyed[s] = (len(s) - 1, facets)
        stack.extend(facets)
    return _assemble(SIMPLICIAL, keyed)


def simplicial_complex(faces):
    """Simplicial complex generated by vertex sets."""
    return delta_complex(tuple(sorted(f)) for f in faces)


def _cube_facets(corners):
    d = len(corners).bit_length() - 1
    out = []
    for axis in range(d):
        shift = d - 1 - axis
        for side in (0, 1):
            out.append(tuple(corners[t] for t in range(len(corners)) if (t >> shift) & 1 == side))
    return out


def cubical_complex(cubes):
    """Cubical complex generated by cubes given as corner tuples of length
    2**d in product order (first axis most significant)."""
    keyed = {}
    stack = [tuple(c) for c in cubes]
    while stack:
        c = stack.pop()
        if c in keyed:
            continue
        if len(c) & (len(c) - 1):
            raise GeneratorError(f"corner tuple of length {len(c)} is not a cube")
        facets = _cube_facets(c) if len(c) > 1 else []
        keyed[c] = (len(c).bit_length() - 1, facets)
        stack.extend(facets)
    return _assemble(CUBICAL, keyed)


def torus_cubical(m, n):
    if m < 3 or n < 3:
        raise GeneratorError("torus needs m, n >= 3")
    squares = []
    for i in range(m):
        for j in range(n):
            i1, j1 = (i + 1) % m, (j + 1) % n
            squares.append(((i, j), (i, j1), (i1, j), (i1, j1)))
    return cubical_complex(squares)


def torus_simplicial(m, n):
    if m < 3 or n < 3:
        raise GeneratorError("torus needs m, n >= 3")
    tris = []
    for i in range(m):
        for j in range(n):
            i1, j1 = (i + 1) % m, (j + 1) % n
            tris.append(((i, j), (i1, j), (i1, j1)))
            tris.append(((i, j), (i, j1), (i1, j1)))
    return delta_complex(tris)


def cycle(n):
    if n < 2:
        raise GeneratorError("cycle needs n >= 2")
    return delta_complex((i, (i + 1) % n) for i in range(n))


def cube_skeleton(r):
    """1-skeleton of the r-cube as a cubical 1-complex."""
    if r < 1:
        raise GeneratorError("cube_skeleton needs r >= 1")
    edges = []
    for u in itertools.product((0, 1), repeat=r):
        for i in range(r):
            if u[i] == 0:
                v = u[:i] + (1,) + u[i + 1:]
                edges.append((u, v))
    return cubical_complex(edges)


def cross_polytope(n):
    """Boundary of the n-dimensional cross-polytope; vertex 2i is +e_i and
    2i+1 is -e_i."""
    if n < 1:
        raise GeneratorError("cross_polytope needs n >= 1")
    return simplicial_complex(
        [2 * i + s for i, s in enumerate(signs)] for signs in itertools.product((0, 1), repeat=n)
    )


def simplex(d):
    return simplicial_complex([range(d + 1)])


def cube(d):
    return cubical_complex([tuple(itertools.product((0, 1), repeat=d))])


LIBRARY = {
    "cycle": cycle,
    "cube_skeleton": cube_skeleton,
    "cross_polytope": cross_polytope,
    "simplex": simplex,
    "cube": cube,
}


def small_library(name, *params):
    try:
        fn = LIBRARY[name.replace("-", "_")]
    except KeyError:
        raise GeneratorError(f"unknown library complex {name!r}") from None
    return fn(*params)


def vertex_sets(K: CellComplex):
    """Vertex set of every cell of a simplicial complex, checking that cells
    are determined by their vertex sets."""
    if K.kind != SIMPLICIAL:
        raise GeneratorError("expected a simplicial complex")
    out = {}
    for cell in sorted(K.cells, key=lambda c: c.dim):
        vs = frozenset([cell.id]) if cell.dim == 0 else frozenset().union(*(out[f] for f in cell.facets))
        if len(vs) != cell.dim + 1:
            raise GeneratorError(f"cell {cell.id} is not determined by its vertex set")
        out[cell.id] = vs
    if len(set(out.values())) != len(out):
        raise GeneratorError("two cells share a vertex set")
    return out


def moment_angle(K: CellComplex) -> CellComplex:
    """Cubical moment-angle complex X_K inside [0,1]^V, V = vertices of K in
    id order.  Cells are pairs (sigma in K or empty, nu subset of V - sigma)."""
    faces = [frozenset()] + list(vertex_sets(K).values())
    V = sorted(K.cells_of_dim(0))
    pos = {v: i for i, v in enumerate(V)}
    cubes = []
    for sigma in faces:
        free = sorted(pos[v] for v in sigma)
        rest = [i for i in range(len(V)) if i not in set(free)]
        for nu_bits in itertools.product((0, 1), repeat=len(rest)):
            base = [0] * len(V)
            for i, b in zip(rest, nu_bits):
                base[i] = b
            corners = []
            for bits in itertools.product((0, 1), repeat=len(free)):
                pt = list(base)
                for i, b in zip(free, bits):
                    pt[i] = b
                corners.append(tuple(pt))
            cubes.append(tuple(corners))
    return cubical_complex(cubes)


def moment_angle_prediction(K: CellComplex, k: int):
    """Predicted link graph of X_K at level k as (kind, anchor, graph,
    multiplicity) records.

    Geometric pieces: the 1-skeleton of link_K(sigma) for each (k-2)-face
    sigma (empty face when k = 1), once per (k-1)-cube over sigma, i.e.
    2**|V - sigma| times.  Transversal pieces: the r-cube graph Q_r with
    r = |link^0_K(tau)| for each (k-1)-face tau, 2**(|V - tau| - r) times.
    Graphs are (vertex list, edge list); pieces may be disconnected.
    """
    vs = list(vertex_sets(K).values())
    faceset = set(vs) | {frozenset()}
    V = set().union(*vs) if vs else set()
    out = []
    for sigma in sorted((f for f in faceset if len(f) == k - 1), key=sorted):
        lk = [v for v in sorted(V - sigma) if sigma | {v} in faceset]
        edges = [(u, v) for u, v in itertools.combinations(lk, 2) if sigma | {u, v} in faceset]
        out.append(("geometric", tuple(sorted(sigma)), (lk, edges), 2 ** len(V - sigma)))
    for tau in sorted((f for f in faceset if len(f) == k), key=sorted):
        r = sum(1 for v in V - tau if tau | {v} in faceset)
        verts = list(itertools.product((0, 1), repeat=r))
        edges = [(u, u[:i] + (1,) + u[i + 1:]) for u in verts for i in range(r) if u[i] == 0]
        out.append(("transversal", tuple(sorted(tau)), (verts, edges), 2 ** (len(V - tau) - r)))
    return out


@dataclass(frozen=True)
class RandomModelParams:
    model: str
    h: int
    d: int
    k: int
    seed: int = 0

    def __post_init__(self):
        if self.model not in ("ydelta", "ybox", "zbox"):
            raise GeneratorError(f"unknown model {self.model!r}")
        if min(self.h, self.d, self.k) < 1:
            raise GeneratorError("h, d, k must be positive")


@dataclass
class Sample:
    complex: CellComplex
    attempts: int = 1


def _quotient(kind, n, faces, dim_of, facets_of, uf):
    """Cells are classes of (top cell, face) pairs."""
    members = uf.groups()
    cls = {}
    for root, group in members.items():
        rep = min(group)
        for x in group:
            cls[x] = rep
    keyed = {}
    for rep in set(cls.values()):
        F, f = rep
        keyed[rep] = (dim_of(f), [cls[(F, g)] for g in facets_of(f)])
    return _assemble(kind, keyed)


def _simplex_faces(k):
    return [f for r in range(1, k + 1) for f in itertools.combinations(range(k), r)]


def _simplex_facets(f):
    return [f[:i] + f[i + 1:] for i in range(len(f))] if len(f) > 1 else []


def _cube_faces(k):
    return list(itertools.product((0, 1, FREE), repeat=k))


def _cube_face_facets(f):
    out = []
    for i, x in enumerate(f):
        if x == FREE:
            out.append(f[:i] + (0,) + f[i + 1:])
            out.append(f[:i] + (1,) + f[i + 1:])
    return out


def random_simplicial(p: RandomModelParams) -> CellComplex:
    """ydelta: hd copies of the (k-1)-simplex with vertex types 0..k-1; in
    each direction K the facets missing vertex K are grouped d at a time by a
    uniform bijection and identified order-preservingly."""
    if p.model != "ydelta":
        raise GeneratorError("random_simplicial needs model ydelta")
    rng = SplitMix64(p.seed)
    n = p.h * p.d
    faces = _simplex_faces(p.k)
    uf = UnionFind((F, f) for F in range(n) for f in faces)
    for K in range(p.k):
        perm = rng.permutation(n)
        shared = [f for f in faces if K not in f]
        for group in _classes(perm, p.d):
            for F in group[1:]:
                for f in shared:
                    uf.union((group[0], f), (F, f))
    return _quotient(SIMPLICIAL, n, faces, lambda f: len(f) - 1, _simplex_facets, uf)


def _classes(perm, d):
    groups = {}
    for F, x in enumerate(perm):
        groups.setdefault(x // d, []).append(F)
    return [groups[c] for c in sorted(groups)]


def sample(p: RandomModelParams, max_attempts=10**6) -> Sample:
    if p.model == "ydelta":
        return Sample(random_simplicial(p), 1)
    return _sample_cubical(p, max_attempts)


def random_cubical(p: RandomModelParams, max_attempts=10**6) -> CellComplex:
    return _sample_cubical(p, max_attempts).complex


def _sample_cubical(p, max_attempts):
    """ybox: hd cubes, each direction (K, E) grouped d at a time.  zbox: 2hd
    cubes; in direction K both sides share 2h labels, so opposite facets may
    be glued, and the draw is rejected while some cube would meet itself."""
    if p.model not in ("ybox", "zbox"):
        raise GeneratorError("random_cubical needs model ybox or zbox")
    rng = SplitMix64(p.seed)
    faces = _cube_faces(p.k)
    dim_of = lambda f: sum(1 for x in f if x == FREE)  # noqa: E731
    attempts = 0
    if p.model == "ybox":
        n = p.h * p.d
        uf = UnionFind((F, f) for F in range(n) for f in faces)
        for K in range(p.k):
            for E in (0, 1):
                perm = rng.permutation(n)
                shared = [f for f in faces if f[K] == E]
                for group in _classes(perm, p.d):
                    for F in group[1:]:
                        for f in shared:
                            uf.union((group[0], f), (F, f))
        return Sample(_quotient(CUBICAL, n, faces, dim_of, _cube_face_facets, uf), 1)

    n = 2 * p.h * p.d
    uf = UnionFind((F, f) for F in range(n) for f in faces)
    for K in range(p.k):
        side0 = rng.permutation(n)
        # The number of admissible side-1 draws is the same for every side-0
        # draw, so rejecting side 1 alone keeps the conditioned law uniform.
        while True:
            attempts += 1
            if attempts > max_attempts:
                raise RejectionCapExceeded(
                    f"zbox rejection cap {max_attempts} exceeded (h={p.h}, d={p.d}, k={p.k})")
            side1 = _permutation_avoiding(rng, side0, p.d)
            if side1 is not None:
                break
        groups = {}
        for F in range(n):
            groups.setdefault(side0[F] // p.d, []).append((F, 0))
            groups.setdefault(side1[F] // p.d, []).append((F, 1))
        for label in sorted(groups):
            F0, E0 = groups[label][0]
            for F, E in groups[label][1:]:
                for f in faces:
                    if f[K] == E0:
                        uf.union((F0, f), (F, f[:K] + (E,) + f[K + 1:]))
    return Sample(_quotient(CUBICAL, n, faces, dim_of, _cube_face_facets, uf), attempts)


def _permutation_avoiding(rng, side0, d):
    """Fisher-Yates draw of a permutation, abandoned (None) as soon as a
    settled position F gets the same label class as side0[F].  Position i is
    final once step i has run, so stopping early leaves the law of the
    accepted permutations unchanged."""
    n = len(side0)
    perm = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
        if perm[i] // d == side0[i] // d:
            return None
    return None if perm[0] // d == side0[0] // d else perm


def twisted_ring_poset(n=3) -> FacePoset:
    """Moebius band of n squares as a face poset with a genuine incidence
    function.  The closing square meets both of its vertical edges with the
    same sign, so no transversal orientation exists at level 1."""
    if n < 2:
        raise GeneratorError("twisted ring needs n >= 2")
    ids = itertools.count()
    b = [next(ids) for _ in range(n)]
    t = [next(ids) for _ in range(n)]
    dims = {x: 0 for x in b + t}
    facets = {x: () for x in b + t}
    signs = {}

    def edge(u, v):
        e = next(ids)
        dims[e], facets[e] = 1, (u, v)
        signs[(u, e)], signs[(v, e)] = -1, 1
        return e

    L = [edge(b[i], t[i]) for i in range(n)]
    B = [edge(b[i], b[i + 1]) for i in range(n - 1)] + [edge(b[n - 1], t[0])]
    T = [edge(t[i], t[i + 1]) for i in range(n - 1)] + [edge(t[n - 1], b[0])]
    for i in range(n):
        s = next(ids)
        dims[s] = 2
        closing = i == n - 1
        facets[s] = (L[i], L[0] if closing else L[i + 1], B[i], T[i])
        for slot, e in enumerate(facets[s]):
            signs[(e, s)] = facet_sign(CUBICAL, slot)
        if closing:
            signs[(L[0], s)] = -1
    return FacePoset(CUBICAL, dims, facets, signs)


def _piece_components(kind, verts, edges):
    g = nx.MultiGraph()
    g.add_nodes_from(verts)
    g.add_edges_from(edges)
    return [(kind, g.subgraph(c).copy()) for c in nx.connected_components(g)]


def _iso_classes(graphs):
    """Counts per (kind, isomorphism class), classes keyed by a
    representative graph."""
    classes = []  # [kind, representative, count]
    for kind, g in graphs:
        h = nx.weisfeiler_lehman_graph_hash(nx.Graph(g)), g.number_of_nodes(), g.number_of_edges()
        for entry in classes:
            if entry[0] == kind and entry[1] == h and nx.is_isomorphic(entry[2], g):
                entry[3] += 1
                break
        else:
            classes.append([kind, h, g, 1])
    return classes


def _same_multiset(xs, ys):
    cx, cy = _iso_classes(xs), _iso_classes(ys)
    if len(cx) != len(cy):
        return False
    for kind, h, g, n in cx:
        if not any(k2 == kind and h2 == h and n2 == n and nx.is_isomorphic(g, g2) for k2, h2, g2, n2 in cy):
            return False
    return True


def moment_angle_check(K: CellComplex, k: int, literal_multiplicity=False):
    """Compare the level-k link graph of X_K with the predicted pieces.

    With ``literal_multiplicity`` every transversal piece Q_r over tau is
    counted 2**|V - tau| times instead of 2**(|V - tau| - r)."""
    X = moment_angle(K)
    fp = face_poset(X)
    lg = link_components(fp, k)
    measured = []
    for comp in lg.components:
        measured.extend(_piece_components(comp.kind, comp.vertices, [e[1:] for e in comp.edges]))
    predicted = []
    V = len(K.cells_of_dim(0))
    for kind, anchor, (verts, edges), mult in moment_angle_prediction(K, k):
        if literal_multiplicity and kind == "transversal":
            mult = 2 ** (V - len(anchor))
        if verts:
            predicted.extend(_piece_components(kind, verts, edges) * mult)
    mono = check_monodromy_free(fp, k, lg)
    return {
        "level": k,
        "measured": {"geometric": lg.count("geometric"), "transversal": lg.count("transversal")},
        "predicted": {kind: sum(1 for x, _ in predicted if x == kind) for kind in ("geometric", "transversal")},
        "match": _same_multiset(measured, predicted),
        "monodromyFree": mono.free,
    }
