"""Reduced rational cohomology of face posets, connecting classes of link
components, and the comparison of H^k with the span of those classes."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exactness import analyze, assemble
from .linalg import random_prime, rank
from .poset import PHI, build_garland, link_components
from .spectral import DEFAULT_BAND, DEFAULT_TOL, evaluate_criterion

EXACT, MODULAR = "exact", "modular"


class CocycleError(ArithmeticError):
    pass


def coboundary(fp, d):
    """delta_d as an integer matrix with rows the (d+1)-cells and columns
    the d-cells, both in id order.  d = -1 is the augmentation: a single
    column of ones over the vertices."""
    rows = sorted(fp.rank_cells(d + 1))
    if d == -1:
        return np.ones((len(rows), 1), dtype=object)
    cols = sorted(fp.rank_cells(d))
    ci = {x: j for j, x in enumerate(cols)}
    m = np.zeros((len(rows), len(cols)), dtype=object)
    for i, c in enumerate(rows):
        for b in fp.facets[c]:
            m[i, ci[b]] = fp.sign(b, c)
    return m


def _cells(fp, d):
    return 1 if d == -1 else len(fp.rank_cells(d))


class Ranks:
    """Cached ranks of the coboundaries of one face poset."""

    def __init__(self, fp, mode=EXACT, prime=None):
        self.fp = fp
        self.mode = mode
        self.prime = prime if prime is not None or mode == EXACT else random_prime()
        self._cache = {}

    def __call__(self, d):
        if d < -1 or d >= self.fp.dim:
            return 0
        if d not in self._cache:
            m = coboundary(self.fp, d)
            self._cache[d] = rank(m, self.mode, self.prime) if m.size else 0
        return self._cache[d]


def betti(fp, d, mode=EXACT, ranks=None):
    """Reduced Betti number: dim ker delta_d - rank delta_{d-1}."""
    ranks = ranks or Ranks(fp, mode)
    if d < 0 or d > fp.dim:
        return 0
    return _cells(fp, d) - ranks(d) - ranks(d - 1)


def connecting_class(g, a):
    """The k-cochain sum_{a<b} w(a, b) b*, as a dict b -> coefficient.
    Raises CocycleError if its coboundary does not vanish."""
    coch = {b: g.w[(a, b)] for b in g.above(a)}
    for c in g.s_one:
        if sum(coch.get(b, 0) * g.w[(b, c)] for b in g.faces[c]) != 0:
            raise CocycleError(f"connecting class of component {a} is not a cocycle at {c}")
    return coch


def _vector(coch, index):
    v = np.zeros(len(index), dtype=object)
    for b, x in coch.items():
        v[index[b]] = x
    return v


@dataclass
class CohomologyReport:
    level: int
    betti: dict
    dimL: int
    dimT: int
    dimLplusT: int
    h0B: int | None = None
    mode: str = EXACT
    extra: dict = field(default_factory=dict)

    @property
    def consistent(self):
        return self.h0B is None or self.h0B == self.betti[self.level] - self.dimLplusT

    def to_dict(self):
        return {
            "level": self.level,
            "betti": {str(d): b for d, b in sorted(self.betti.items())},
            "dimL": self.dimL,
            "dimT": self.dimT,
            "dimLplusT": self.dimLplusT,
            "h0B": self.h0B,
            "consistent": self.consistent,
            "mode": "exact" if self.mode == EXACT else "probabilistic",
        }


def lt_dims(fp, k, g=None, mode=EXACT, ranks=None):
    """Dimensions of L, T and L + T inside H^k, each computed as
    rank([im delta_{k-1} | classes]) - rank(delta_{k-1})."""
    g = g or build_garland(fp, k)
    ranks = ranks or Ranks(fp, mode)
    index = {b: i for i, b in enumerate(sorted(fp.rank_cells(k)))}
    base = coboundary(fp, k - 1)
    geo, tra = [], []
    for comp in g.link.components:
        v = _vector(connecting_class(g, comp.id), index)
        (tra if comp.kind == "transversal" else geo).append(v)
    r0 = ranks(k - 1)

    def dim(vectors):
        if not vectors:
            return 0
        m = np.concatenate([base, np.array(vectors, dtype=object).T], axis=1)
        return rank(m, ranks.mode, ranks.prime) - r0

    return {"dimL": dim(geo), "dimT": dim(tra), "dimLplusT": dim(geo + tra)}


def sum_relation_ok(fp, g):
    """For each p of rank k-1, the classes of the components over p sum to
    delta(p*)."""
    if g.level == 0:
        return True
    by_p = {}
    for comp in g.link.components:
        if comp.pi != PHI:
            for b, x in connecting_class(g, comp.id).items():
                by_p.setdefault(comp.pi, {}).setdefault(b, 0)
                by_p[comp.pi][b] += x
    for p, total in by_p.items():
        expect = {b: fp.sign(p, b) for b in fp.cofacets[p]}
        if {b: x for b, x in total.items() if x} != expect:
            return False
    return True


def cohomology_report(fp, k, g=None, mode=EXACT, h0B=None, prime=None) -> CohomologyReport:
    ranks = Ranks(fp, mode, prime)
    g = g or build_garland(fp, k)
    bettis = {d: betti(fp, d, ranks=ranks) for d in range(fp.dim + 1)}
    dims = lt_dims(fp, k, g, ranks=ranks)
    return CohomologyReport(k, bettis, h0B=h0B, mode=mode, **dims)


@dataclass
class TheoremCheck:
    report: CohomologyReport
    verdict: object
    alpha_beta: object = None

    @property
    def criterion_ok(self):
        """Criterion holds implies H^k equals L + T."""
        return self.verdict.overall != "holds" or self.report.betti[self.report.level] == self.report.dimLplusT

    def to_dict(self):
        out = {"cohomology": self.report.to_dict(), "criterion": self.verdict.to_dict(),
               "criterionConsistent": self.criterion_ok}
        if self.alpha_beta is not None:
            out["exactness"] = self.alpha_beta.to_dict()
        return out


def theorem_check(fp, k, mode=EXACT, band=None, tol=None, identities=False):
    """Criterion, cohomology and exactness lab on one face poset."""
    lg = link_components(fp, k)
    g = build_garland(fp, k, lg)
    verdict = evaluate_criterion(lg, k, fp.kind, band or DEFAULT_BAND, tol or DEFAULT_TOL)
    ab = analyze(assemble(g), identities=identities, mode=mode)
    report = cohomology_report(fp, k, g, mode, h0B=ab.h0B)
    return TheoremCheck(report, verdict, ab)
