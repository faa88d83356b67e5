"""Explicit finite-dimensional Garland structure of a Garland poset.

The ambient spaces have orthonormal bases indexed by chains: pairs (a, c)
in degrees -1 and 1 and triples (a, b, c) in degree 0.  Inside them sit

    A^-1 = span z_aa = sum_{c>a} (a, c)       B^-1 = A^-1
    A^0  = span z_ab = sum_{c>b} (a, b, c)    B^0  = span z_b = sum_{a<b} z_ab
    A^1  = span z_ac = (a, c)                 B^1  = span z_c = sum_{a<c} z_ac

with a0(a, c) = sum_{a<b<c} w_ab (a, b, c) and a1(a, b, c) = w_bc (a, c).
The B maps are the orthogonal projections of the A maps.

Exact identities are checked on rational ambient matrices, which are only
practical for small posets.  Spectral quantities (alpha, beta) and the
dimension of H^0(B) are computed in generator coordinates, where every
space is indexed by the generators z_ab, z_b, z_c directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np
import scipy.linalg

from .linalg import RationalMatrix, bareiss_rank, integer_rref, nullspace, rank


@dataclass
class Identity:
    name: str
    residual: float
    passed: bool

    def to_dict(self):
        return {"name": self.name, "residual": self.residual, "pass": self.passed}


@dataclass
class Ambient:
    a0: RationalMatrix  # pairs -> triples
    a1: RationalMatrix  # triples -> pairs
    z_minus: RationalMatrix  # columns z_a
    z_a0: RationalMatrix  # columns z_ab, ordered like ExplicitGarlandStructure.ab
    z_b0: RationalMatrix  # columns z_b
    z_b1: RationalMatrix  # columns z_c
    p_b0: RationalMatrix
    p_b1: RationalMatrix

    @cached_property
    def b0(self):
        return self.p_b0 @ self.a0

    @cached_property
    def b1(self):
        return self.p_b1 @ self.a1


class ExplicitGarlandStructure:
    def __init__(self, g):
        self.g = g
        self.n0, self.n1, self.n010 = g.n0, g.n1, g.n010
        self.s_minus = sorted(g.s_minus)
        self.s_zero = sorted(g.s_zero)
        self.s_one = sorted(g.s_one)
        self.deg = {b: len(g.cofaces[b]) for b in self.s_zero}
        self.below_c = {c: sorted(g.components_below(c)) for c in self.s_one}
        self.pairs = sorted((a, c) for c in self.s_one for a in self.below_c[c])
        self.triples = sorted(
            (a, b, c) for b in self.s_zero for a in g.below[b] for c in g.cofaces[b])
        self.ab = sorted((a, b) for b in self.s_zero for a in g.below[b])
        self.up = {a: [] for a in self.s_minus}
        for a, b in self.ab:
            self.up[a].append(b)
        self.w = g.w

    # generator coordinates -------------------------------------------------

    @cached_property
    def coboundary(self):
        """Integer matrix (w_bc) with rows S^1 and columns S^0."""
        ci = {c: i for i, c in enumerate(self.s_one)}
        bi = {b: j for j, b in enumerate(self.s_zero)}
        m = np.zeros((len(self.s_one), len(self.s_zero)), dtype=np.int64)
        for c in self.s_one:
            for b in self.g.faces[c]:
                m[ci[c], bi[b]] = self.w[(b, c)]
        return m

    @cached_property
    def incidence(self):
        """Integer matrix (w_ab) with rows S^0 and columns S^-1."""
        bi = {b: j for j, b in enumerate(self.s_zero)}
        ai = {a: i for i, a in enumerate(self.s_minus)}
        m = np.zeros((len(self.s_zero), len(self.s_minus)), dtype=np.int64)
        for a, b in self.ab:
            m[bi[b], ai[a]] = self.w[(a, b)]
        return m

    @cached_property
    def b0_gram(self):
        """Squared norms of the z_b, i.e. n0 * deg(b)."""
        return np.array([self.n0 * self.deg[b] for b in self.s_zero], dtype=np.int64)

    @cached_property
    def a1_on_b0(self):
        """a1 applied to each z_b, in the (a, c) pair basis."""
        pi = {p: i for i, p in enumerate(self.pairs)}
        bi = {b: j for j, b in enumerate(self.s_zero)}
        m = np.zeros((len(self.pairs), len(self.s_zero)))
        for a, b, c in self.triples:
            m[pi[(a, c)], bi[b]] += self.w[(b, c)]
        return m

    @cached_property
    def kernel_b1(self):
        """Integer basis (columns) of ker b1 = ker (w_bc) in B^0 coordinates."""
        return nullspace(self.coboundary.astype(object), ncols=len(self.s_zero))

    def block(self, a):
        """(A1, D, v): a1 on the z_ab of block a as a matrix (rows c > a),
        the squared norms deg(b) and the vector w_ab."""
        bs = self.up[a]
        cs = sorted({c for b in bs for c in self.g.cofaces[b]})
        ci = {c: i for i, c in enumerate(cs)}
        a1 = np.zeros((len(cs), len(bs)), dtype=np.int64)
        for j, b in enumerate(bs):
            for c in self.g.cofaces[b]:
                a1[ci[c], j] = self.w[(b, c)]
        d = np.array([self.deg[b] for b in bs], dtype=np.int64)
        v = np.array([self.w[(a, b)] for b in bs], dtype=np.int64)
        return a1, d, v

    # ambient rational matrices ----------------------------------------------

    @cached_property
    def ambient(self) -> Ambient:
        w = self.w
        ti = {t: i for i, t in enumerate(self.triples)}
        pi = {p: i for i, p in enumerate(self.pairs)}
        nt, npairs = len(self.triples), len(self.pairs)
        a0 = np.zeros((nt, npairs), dtype=object)
        a1 = np.zeros((npairs, nt), dtype=object)
        for (a, b, c), i in ti.items():
            a0[i, pi[(a, c)]] = w[(a, b)]
            a1[pi[(a, c)], i] = w[(b, c)]
        z_minus = np.zeros((npairs, len(self.s_minus)), dtype=object)
        ai = {a: j for j, a in enumerate(self.s_minus)}
        for (a, c), i in pi.items():
            z_minus[i, ai[a]] = 1
        abi = {x: j for j, x in enumerate(self.ab)}
        bi = {b: j for j, b in enumerate(self.s_zero)}
        z_a0 = np.zeros((nt, len(self.ab)), dtype=object)
        z_b0 = np.zeros((nt, len(self.s_zero)), dtype=object)
        for (a, b, c), i in ti.items():
            z_a0[i, abi[(a, b)]] = 1
            z_b0[i, bi[b]] = 1
        ci = {c: j for j, c in enumerate(self.s_one)}
        z_b1 = np.zeros((npairs, len(self.s_one)), dtype=object)
        for (a, c), i in pi.items():
            z_b1[i, ci[c]] = 1
        zb0, zb1 = RationalMatrix(z_b0), RationalMatrix(z_b1)
        p_b0 = zb0 @ RationalMatrix.diag_inverse([self.n0 * self.deg[b] for b in self.s_zero]) @ zb0.T
        p_b1 = zb1 @ RationalMatrix.diag_inverse([self.n1] * len(self.s_one)) @ zb1.T
        return Ambient(RationalMatrix(a0), RationalMatrix(a1), RationalMatrix(z_minus),
                       RationalMatrix(z_a0), zb0, zb1, p_b0, p_b1)


def assemble(g) -> ExplicitGarlandStructure:
    return ExplicitGarlandStructure(g)


def _exact(name, m: RationalMatrix):
    r = float(m.max_abs())
    return Identity(name, r, r == 0)


def _gram_projection(z: RationalMatrix) -> RationalMatrix:
    """Z (Z^T Z)^-1 Z^T with the Gram inverse from a generic elimination."""
    gram = z.T @ z
    n = gram.shape[0]
    aug = np.concatenate([gram.num, np.eye(n, dtype=object) * gram.den], axis=1)
    red, pivots, d = integer_rref(aug)
    if pivots[:n] != list(range(n)):
        raise ArithmeticError("generator columns are linearly dependent")
    return z @ RationalMatrix(red[:n, n:], d) @ z.T


def verify_complex_identities(e: ExplicitGarlandStructure, seed=0):
    amb = e.ambient
    out = [
        _exact("a1*a0 = 0", amb.a1 @ amb.a0),
        _exact("b1*b0 = 0 on B^-1", amb.b1 @ amb.b0 @ amb.z_minus),
        _exact("P_B0 idempotent", amb.p_b0 @ amb.p_b0 - amb.p_b0),
        _exact("P_B1 idempotent", amb.p_b1 @ amb.p_b1 - amb.p_b1),
        _exact("P_B0 self-adjoint", amb.p_b0 - amb.p_b0.T),
        _exact("P_B1 self-adjoint", amb.p_b1 - amb.p_b1.T),
        _exact("P_B0 matches Gram projection", amb.p_b0 - _gram_projection(amb.z_b0)),
        _exact("P_B1 matches Gram projection", amb.p_b1 - _gram_projection(amb.z_b1)),
    ]
    # coefficient formula: the projection of z_ab is z_b / n0
    bi = {b: j for j, b in enumerate(e.s_zero)}
    coeff = np.zeros((len(e.s_zero), len(e.ab)), dtype=object)
    for j, (a, b) in enumerate(e.ab):
        coeff[bi[b], j] = 1
    out.append(_exact("P_B0 z_ab = z_b / n0",
                      amb.p_b0 @ amb.z_a0 - (amb.z_b0 @ RationalMatrix(coeff)).scale(Fraction(1, e.n0))))
    rng = np.random.default_rng(seed)
    u = RationalMatrix(rng.integers(-5, 6, size=(len(e.triples), 3)).astype(object))
    v = RationalMatrix(rng.integers(-5, 6, size=(len(e.pairs), 3)).astype(object))
    out.append(_exact("<a1 u, v> = <u, a1^T v>", (amb.a1 @ u).T @ v - u.T @ (amb.a1.T @ v)))
    return out


def _pencil_eigs(q, gram):
    if q.shape[0] == 0:
        return np.zeros(0)
    return scipy.linalg.eigh(q, gram, eigvals_only=True)


def block_eigenvalues(e: ExplicitGarlandStructure, a):
    """Eigenvalues of a1* a1 on the part of A_a^0 orthogonal to im a0,
    ascending."""
    a1, d, v = e.block(a)
    basis = nullspace((v * d).reshape(1, -1)).astype(float)
    if basis.shape[1] == 0:
        return np.zeros(0)
    q = basis.T @ (a1.T @ a1).astype(float) @ basis
    gram = basis.T @ np.diag(d.astype(float)) @ basis
    return _pencil_eigs(q, gram)


def block_alpha(e: ExplicitGarlandStructure, a):
    """Smallest eigenvalue of block a; +inf when the block is a line."""
    eigs = block_eigenvalues(e, a)
    return float(eigs[0]) if len(eigs) else math.inf


def alpha(e: ExplicitGarlandStructure):
    per = {a: block_alpha(e, a) for a in e.s_minus}
    return min(per.values(), default=math.inf), per


def beta(e: ExplicitGarlandStructure):
    """Largest eigenvalue of |a1 phi|^2 / |phi|^2 over phi in ker b1; -inf
    when the kernel is zero."""
    n = e.kernel_b1.astype(float)
    if n.shape[1] == 0:
        return -math.inf
    m = e.a1_on_b0 @ n
    q = m.T @ m
    gram = n.T @ (e.b0_gram.astype(float)[:, None] * n)
    return float(_pencil_eigs(q, gram)[-1])


def kappa(e):
    return Fraction(e.n010 * e.n1, e.n0 ** 2)


def rayleigh_value(e: ExplicitGarlandStructure, x):
    """(|a1 phi|^2 - kappa |b1 phi|^2) / |phi|^2 for phi = sum_b x_b z_b.
    b1 phi is formed by projecting a1 phi onto each z_c."""
    x = np.asarray(x, dtype=float)
    if not np.any(x):
        raise ValueError("phi must be nonzero")
    a1phi = e.a1_on_b0 @ x
    pi = {p: i for i, p in enumerate(e.pairs)}
    coef = np.array([sum(a1phi[pi[(a, c)]] for a in e.below_c[c]) / e.n1 for c in e.s_one])
    b1sq = float(np.sum(coef ** 2)) * e.n1
    norm = float(x @ (e.b0_gram * x))
    return (float(a1phi @ a1phi) - float(kappa(e)) * b1sq) / norm


def rayleigh_residual(e: ExplicitGarlandStructure, x):
    return abs(rayleigh_value(e, x) - (e.n0 - e.n010) / e.n0)


def h0_dim(e: ExplicitGarlandStructure, mode="exact", prime=None):
    """dim(ker b1 in B^0 orthogonal to im b0), from the stacked conditions
    (w_bc) x = 0 and (w_ab n0 deg b) x = 0."""
    cond = np.concatenate([e.coboundary, e.incidence.T * e.b0_gram[None, :]], axis=0)
    return len(e.s_zero) - rank(cond.astype(object), mode, prime)


def h0_dim_ambient(e: ExplicitGarlandStructure):
    """Same dimension from the ambient matrices: kernel of b1 and b0* on
    the coordinates of B^0."""
    amb = e.ambient
    b1 = amb.b1 @ amb.z_b0
    b0_adj = (amb.b0 @ amb.z_minus).T @ amb.z_b0
    scale = b1.den * b0_adj.den
    stacked = np.concatenate([b1.num * (scale // b1.den), b0_adj.num * (scale // b0_adj.den)], axis=0)
    return len(e.s_zero) - bareiss_rank(stacked)


@dataclass
class BlockReport:
    orthogonal: bool
    exact: dict  # a -> bool

    @property
    def ok(self):
        return self.orthogonal and all(self.exact.values())


def verify_block_decomposition(e: ExplicitGarlandStructure):
    """Blocks A_a are checked to be mutually orthogonal in the ambient inner
    product; each block is exact when ker(a1 on A_a^0) is the line spanned by a0(z_aa)."""
    z = e.ambient.z_a0
    owners = np.array([a for a, _ in e.ab])
    gram = (z.T @ z).num
    orthogonal = not np.any(gram[owners[:, None] != owners[None, :]] != 0)
    exact = {}
    for a in e.s_minus:
        a1, d, v = e.block(a)
        kernel = a1.shape[1] - bareiss_rank(a1.astype(object))
        image = 1 if np.any(v) else 0
        composite_zero = not np.any(a1 @ v)
        exact[a] = composite_zero and kernel == image
    return BlockReport(orthogonal, exact)


@dataclass
class AlphaBetaReport:
    alpha: float
    beta: float
    h0B: int
    perA: dict
    identities: list = field(default_factory=list)

    @property
    def implication_ok(self):
        return not (self.beta < self.alpha) or self.h0B == 0

    def to_dict(self):
        def f(x):
            return "inf" if x == math.inf else "-inf" if x == -math.inf else x
        return {
            "alpha": f(self.alpha),
            "beta": f(self.beta),
            "h0B": self.h0B,
            "perA": {str(a): f(v) for a, v in self.perA.items()},
            "identities": [i.to_dict() for i in self.identities],
        }


def analyze(e: ExplicitGarlandStructure, identities=True, mode="exact", tol=1e-9, seed=0):
    al, per = alpha(e)
    be = beta(e)
    h0 = h0_dim(e, mode)
    ids = []
    if identities:
        ids.extend(verify_complex_identities(e, seed))
        blocks = verify_block_decomposition(e)
        ids.append(Identity("blocks A_a orthogonal", 0.0 if blocks.orthogonal else 1.0, blocks.orthogonal))
        bad = sum(1 for ok in blocks.exact.values() if not ok)
        ids.append(Identity("every block A_a exact", float(bad), bad == 0))
        amb_h0 = h0_dim_ambient(e)
        ids.append(Identity("h0 from ambient matrices", float(abs(amb_h0 - h0)), amb_h0 == h0))
        rng = np.random.default_rng(seed)
        worst = max(rayleigh_residual(e, rng.normal(size=len(e.s_zero))) for _ in range(20))
        ids.append(Identity("Rayleigh identity", worst, worst < tol))
        bound = (e.n0 - e.n010) / e.n0
        if be != -math.inf:
            ids.append(Identity("beta <= (n0 - n010)/n0", max(0.0, be - bound), be <= bound + tol))
    return AlphaBetaReport(al, be, h0, per, ids)
