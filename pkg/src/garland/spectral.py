"""Normalized Laplacians of link-graph components, their spectra, and the
spectral-gap criterion for vanishing cohomology."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .complex import CUBICAL, SIMPLICIAL

MAX_SWEEPS = 100
OFF_TOL = 1e-12
DEFAULT_TOL = 1e-9
DEFAULT_BAND = 1e-7


class ConvergenceError(ArithmeticError):
    def __init__(self, sweeps, off):
        self.sweeps = sweeps
        self.off = off
        super().__init__(f"Jacobi eigensolver did not converge: off-diagonal norm {off:.3e} after {sweeps} sweeps")


class IsolatedVertexError(ValueError):
    pass


def _rounds(n):
    """Round-robin schedule: n - 1 (or n) rounds of disjoint index pairs
    covering every pair once per sweep."""
    m = n + (n % 2)
    players = list(range(m))
    out = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < n and q < n]
        out.append((np.array([p for p, _ in pairs]), np.array([q for _, q in pairs])))
        players = [players[0], players[-1]] + players[1:-1]
    return out


def jacobi_eigenvalues(a, max_sweeps=MAX_SWEEPS, tol=OFF_TOL):
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
    sorted ascending.

    Each sweep visits every off-diagonal pair once in round-robin order, so
    the rotations of one round act on disjoint index pairs and are applied
    together.  Stops once the off-diagonal Frobenius norm is below ``tol``
    (relative to the matrix norm when that exceeds 1).
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if n <= 1:
        return a.diagonal().copy()
    target = tol * max(1.0, float(np.linalg.norm(a)))
    schedule = _rounds(n)

    def off_norm():
        return float(np.linalg.norm(a - np.diag(a.diagonal())))

    off = off_norm()
    sweeps = 0
    while off >= target:
        if sweeps == max_sweeps:
            raise ConvergenceError(sweeps, off)
        sweeps += 1
        for p, q in schedule:
            apq = a[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            p, q, apq = p[active], q[active], apq[active]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.hypot(t, 1.0)
            s = t * c
            rp, rq = a[p], a[q]
            a[p], a[q] = c[:, None] * rp - s[:, None] * rq, s[:, None] * rp + c[:, None] * rq
            cp, cq = a[:, p], a[:, q]
            a[:, p], a[:, q] = cp * c - cq * s, cp * s + cq * c
            a[p, q] = a[q, p] = 0.0
        off = off_norm()
    return np.sort(a.diagonal())


def _graph(vertices, edges):
    idx = {v: i for i, v in enumerate(vertices)}
    n = len(vertices)
    adj = np.zeros((n, n))
    for e in edges:
        u, v = idx[e[-2]], idx[e[-1]]
        if u == v:
            adj[u, u] += 2
        else:
            adj[u, v] += 1
            adj[v, u] += 1
    return adj


def normalized_laplacian(comp):
    """D^{-1/2}(D - A)D^{-1/2} of a component (anything with ``vertices``
    and ``edges``; an edge's last two entries are its endpoints).  Parallel
    edges count with multiplicity; a loop adds 2 to degree and adjacency."""
    adj = _graph(comp.vertices, comp.edges)
    deg = adj.sum(axis=1)
    n = len(deg)
    if n == 1 and deg[0] == 0:
        return np.zeros((1, 1))
    if np.any(deg == 0):
        lonely = [comp.vertices[i] for i in np.flatnonzero(deg == 0)]
        raise IsolatedVertexError(f"isolated vertices {lonely} in a multi-vertex component")
    inv = 1.0 / np.sqrt(deg)
    return np.eye(n) - inv[:, None] * adj * inv[None, :]


@dataclass
class Graph:
    """Plain graph wrapper so library 1-complexes can be fed to the solver."""
    vertices: list
    edges: list


def graph_of_complex(c):
    """Vertex-edge graph of a cell complex's 1-skeleton."""
    verts = c.cells_of_dim(0)
    edges = [tuple(c.by_id[e].facets) for e in c.cells_of_dim(1)]
    return Graph(verts, edges)


def spectrum(comp, max_sweeps=MAX_SWEEPS):
    return jacobi_eigenvalues(normalized_laplacian(comp), max_sweeps=max_sweeps)


def gap_of(eigs):
    return math.inf if len(eigs) < 2 else max(0.0, float(eigs[1]))


def spectral_gap(comp, max_sweeps=MAX_SWEEPS):
    if len(comp.vertices) == 1:
        return math.inf
    return gap_of(spectrum(comp, max_sweeps))


def threshold(k, kind) -> Fraction:
    if k < 0:
        raise ValueError("level must be nonnegative")
    if kind == SIMPLICIAL:
        return Fraction(k, k + 1)
    if kind == CUBICAL:
        return Fraction(2 * k, 2 * k + 1)
    raise ValueError(f"unknown kind {kind!r}")


@dataclass
class ComponentSpectrum:
    id: int
    kind: str
    size: int
    edge_count: int
    eigenvalues: list
    gap: float

    def to_dict(self, full=False):
        out = {"id": self.id, "kind": self.kind, "size": self.size,
               "edgeCount": self.edge_count, "gap": _json_float(self.gap)}
        if full:
            out["eigenvalues"] = [float(x) for x in self.eigenvalues]
        return out


@dataclass
class SpectralReport:
    components: list
    tol: float = DEFAULT_TOL

    @property
    def min_gap(self):
        return min((c.gap for c in self.components), default=math.inf)

    def to_dict(self, full=False):
        return {"tolerance": self.tol, "minGap": _json_float(self.min_gap),
                "components": [c.to_dict(full) for c in self.components]}


def _json_float(x):
    return "inf" if math.isinf(x) else float(x)


def spectral_report(lg, tol=DEFAULT_TOL, max_sweeps=MAX_SWEEPS) -> SpectralReport:
    out = []
    for comp in lg.components:
        eigs = spectrum(comp, max_sweeps)
        out.append(ComponentSpectrum(comp.id, comp.kind, len(comp.vertices), len(comp.edges),
                                     [float(x) for x in eigs], gap_of(eigs)))
    return SpectralReport(out, tol)


HOLDS, FAILS, INCONCLUSIVE = "holds", "fails", "inconclusive"


@dataclass
class CriterionVerdict:
    threshold: Fraction
    per_component: list = field(default_factory=list)  # (id, gap, status)
    overall: str = HOLDS

    def to_dict(self):
        return {
            "threshold": str(self.threshold),
            "overall": self.overall,
            "perComponent": [{"id": i, "gap": _json_float(g), "status": s} for i, g, s in self.per_component],
        }


def classify(gap, thr: Fraction, band=DEFAULT_BAND, tol=DEFAULT_TOL):
    """Strict inequality gap > thr is required.  A gap equal to the
    threshold (within tol) fails; one within band of it, but not within tol,
    cannot be decided in floating point."""
    if math.isinf(gap):
        return HOLDS
    diff = gap - float(thr)
    if abs(diff) <= tol:
        return FAILS
    if diff > band:
        return HOLDS
    if diff < -band:
        return FAILS
    return INCONCLUSIVE


def combine(statuses):
    statuses = list(statuses)
    if FAILS in statuses:
        return FAILS
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return HOLDS


def evaluate_criterion(lg, k, kind, band=DEFAULT_BAND, tol=DEFAULT_TOL, report=None) -> CriterionVerdict:
    report = report or spectral_report(lg, tol)
    thr = threshold(k, kind)
    per = [(c.id, c.gap, classify(c.gap, thr, band, tol)) for c in report.components]
    return CriterionVerdict(thr, per, combine(s for _, _, s in per))
