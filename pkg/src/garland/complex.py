"""Finite simplicial and cubical cell complexes, their signed face posets and
the JSON complex file format.

A complex is a list of cells, each with an ordered facet list.  Facet order
carries the orientation: the i-th facet of a simplicial cell is the face
opposite its i-th vertex, and the facets of a cubical d-cell are listed as
(axis 1 side 0, axis 1 side 1, ..., axis d side 0, axis d side 1).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from math import comb

SIMPLICIAL = "simplicial"
CUBICAL = "cubical"
KINDS = (SIMPLICIAL, CUBICAL)


class ComplexError(ValueError):
    """Base class for complex-level failures."""


class ParseError(ComplexError):
    pass


class InvalidComplexError(ComplexError):
    def __init__(self, report):
        self.report = report
        first = report.violations[0] if report.violations else None
        msg = f"invalid complex: {first.message}" if first else "invalid complex"
        super().__init__(msg)


def expected_facet_count(kind, dim):
    if dim == 0:
        return 0
    return dim + 1 if kind == SIMPLICIAL else 2 * dim


def facet_sign(kind, slot):
    """Incidence sign of the facet in position ``slot`` (0-based)."""
    if kind == SIMPLICIAL:
        return -1 if slot % 2 else 1
    axis, side = slot // 2 + 1, slot % 2
    return (1 if axis % 2 else -1) * (1 if side else -1)


def lower_face_count(kind, dim, j):
    """Number of j-faces of a standard dim-simplex or dim-cube."""
    if kind == SIMPLICIAL:
        return comb(dim + 1, j + 1)
    return comb(dim, j) * 2 ** (dim - j)


@dataclass(frozen=True)
class Cell:
    id: int
    dim: int
    facets: tuple = ()


@dataclass(frozen=True)
class CellComplex:
    kind: str
    cells: tuple

    @cached_property
    def by_id(self):
        return {c.id: c for c in self.cells}

    @property
    def dim(self):
        return max((c.dim for c in self.cells), default=-1)

    def cells_of_dim(self, d):
        return [c.id for c in self.cells if c.dim == d]

    def f_vector(self):
        counts = [0] * (self.dim + 1)
        for c in self.cells:
            counts[c.dim] += 1
        return counts

    def to_dict(self):
        return {
            "kind": self.kind,
            "cells": [{"id": c.id, "dim": c.dim, "facets": list(c.facets)} for c in self.cells],
        }


def serialize_complex(c: CellComplex) -> str:
    return json.dumps(c.to_dict())


def parse_complex(text: str) -> CellComplex:
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"malformed document: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("cells"), list):
        raise ParseError("malformed document: expected an object with a 'cells' list")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}")
    cells = []
    seen = set()
    for entry in doc["cells"]:
        if not isinstance(entry, dict):
            raise ParseError("malformed document: cell entries must be objects")
        cid, dim, facets = entry.get("id"), entry.get("dim"), entry.get("facets", [])
        if not _is_int(cid) or cid < 0:
            raise ParseError(f"malformed document: bad cell id {cid!r}")
        if not _is_int(dim) or dim < 0:
            raise ParseError(f"malformed document: bad dim {dim!r} for cell {cid}")
        if not isinstance(facets, list) or not all(_is_int(f) for f in facets):
            raise ParseError(f"malformed document: bad facet list for cell {cid}")
        if cid in seen:
            raise ParseError(f"malformed document: duplicate cell id {cid}")
        seen.add(cid)
        if len(facets) != expected_facet_count(kind, dim):
            raise ParseError(
                f"wrong facet count for cell {cid}: a {kind} {dim}-cell needs "
                f"{expected_facet_count(kind, dim)} facets, got {len(facets)}"
            )
        cells.append(Cell(cid, dim, tuple(facets)))
    for c in cells:
        for f in c.facets:
            if f not in seen:
                raise ParseError(f"dangling facet id {f} in cell {c.id}")
    return CellComplex(kind, tuple(cells))


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


@dataclass
class Violation:
    rule: str
    cells: list
    message: str

    def to_dict(self):
        return {"rule": self.rule, "cells": list(self.cells), "message": self.message}


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def to_dict(self):
        return {
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
            "warnings": [w.to_dict() for w in self.warnings],
        }


def validate(c: CellComplex) -> ValidationReport:
    """Check facet counts, rank regularity, lower intervals and signed
    boundary-of-boundary.  Never raises."""
    report = ValidationReport()
    bad = report.violations
    if c.kind not in KINDS:
        bad.append(Violation("kind", [], f"unknown kind {c.kind!r}"))
        return report
    ids = {}
    for cell in c.cells:
        if cell.id in ids:
            bad.append(Violation("duplicate-id", [cell.id], f"duplicate cell id {cell.id}"))
        ids[cell.id] = cell
    for cell in c.cells:
        need = expected_facet_count(c.kind, cell.dim)
        if len(cell.facets) != need:
            bad.append(Violation(
                "facet-count", [cell.id],
                f"wrong facet count for cell {cell.id}: expected {need}, got {len(cell.facets)}"))
            continue
        missing = [f for f in cell.facets if f not in ids]
        if missing:
            bad.append(Violation("dangling", [cell.id] + missing,
                                 f"cell {cell.id} lists unknown facets {missing}"))
            continue
        wrong = [f for f in cell.facets if ids[f].dim != cell.dim - 1]
        if wrong:
            bad.append(Violation("facet-dim", [cell.id] + wrong,
                                 f"cell {cell.id} has facets of the wrong dimension {wrong}"))
        if len(set(cell.facets)) != len(cell.facets):
            dup = sorted({f for f in cell.facets if cell.facets.count(f) > 1})
            bad.append(Violation(
                "rank-regularity", [cell.id] + dup,
                f"rank regularity: cell {cell.id} repeats facets {dup}"))
    if bad:
        return report

    closures = {}
    for cell in sorted(c.cells, key=lambda x: x.dim):
        clo = {cell.id}
        for f in cell.facets:
            clo |= closures[f]
        closures[cell.id] = frozenset(clo)
        counts = {}
        for x in clo:
            counts[ids[x].dim] = counts.get(ids[x].dim, 0) + 1
        for j in range(cell.dim):
            if counts.get(j, 0) != lower_face_count(c.kind, cell.dim, j):
                bad.append(Violation(
                    "lower-interval", [cell.id],
                    f"faces of cell {cell.id} are identified: {counts.get(j, 0)} distinct "
                    f"{j}-faces, expected {lower_face_count(c.kind, cell.dim, j)}"))
                break
    if bad:
        return report

    fp = _build_poset(c)
    bad.extend(fp.diamond_violations())
    report.warnings.extend(_coface_warnings(fp))
    return report


def _coface_warnings(fp):
    out = []
    for k in range(fp.dim + 1):
        lonely = [x for x in fp.rank_cells(k) if not fp.cofacets[x]]
        if lonely:
            out.append(Violation("no-coface", lonely,
                                 f"{k}-cells have no {k + 1}-cofaces: {len(lonely)} cells"))
    return out


@dataclass
class FacePoset:
    """Face poset with signed covers.

    ``signs[(p, q)]`` is the incidence of facet ``p`` in ``q``.  Usually built
    by :func:`face_poset`, but arbitrary incidence functions are allowed
    (e.g. a non-orientable gluing) as long as boundary-of-boundary vanishes.
    """
    kind: str
    dims: dict
    facets: dict
    signs: dict

    @cached_property
    def cofacets(self):
        out = {x: [] for x in self.dims}
        for q in sorted(self.facets):
            for p in self.facets[q]:
                out[p].append(q)
        return out

    @cached_property
    def _by_rank(self):
        out = {}
        for x in sorted(self.dims):
            n = len(set(self.facets[x]))
            if n == 0:
                k = 0
            elif self.kind == SIMPLICIAL:
                k = n - 1
            else:
                k = n // 2 if n % 2 == 0 else None
            if k is not None and expected_facet_count(self.kind, k) == n:
                out.setdefault(k, []).append(x)
        return out

    @property
    def dim(self):
        return max(self.dims.values(), default=-1)

    @property
    def elements(self):
        return sorted(self.dims)

    @property
    def covers(self):
        return {(p, q, s) for (p, q), s in self.signs.items()}

    def rank_cells(self, k):
        return list(self._by_rank.get(k, []))

    def sign(self, p, q):
        return self.signs[(p, q)]

    def diamond_violations(self):
        """Every corank-2 interval must hold two middles with cancelling signs."""
        out = []
        for c in sorted(self.facets):
            count, total = {}, {}
            for b in self.facets[c]:
                sbc = self.signs[(b, c)]
                for p in self.facets[b]:
                    count[p] = count.get(p, 0) + 1
                    total[p] = total.get(p, 0) + self.signs[(p, b)] * sbc
            for p in sorted(count):
                if count[p] != 2:
                    out.append(Violation(
                        "diamond", [p, c],
                        f"interval [{p}, {c}] has {count[p]} middle elements, expected 2"))
                elif total[p] != 0:
                    out.append(Violation(
                        "boundary", [p, c],
                        f"signed boundary-of-boundary does not vanish on [{p}, {c}]"))
        return out


def _build_poset(c: CellComplex) -> FacePoset:
    dims, facets, signs = {}, {}, {}
    for cell in c.cells:
        dims[cell.id] = cell.dim
        facets[cell.id] = tuple(cell.facets)
        for slot, f in enumerate(cell.facets):
            signs[(f, cell.id)] = facet_sign(c.kind, slot)
    return FacePoset(c.kind, dims, facets, signs)


def face_poset(c: CellComplex) -> FacePoset:
    report = validate(c)
    if not report.ok:
        raise InvalidComplexError(report)
    return _build_poset(c)


def rank_cells(fp: FacePoset, k: int):
    return set(fp.rank_cells(k))
