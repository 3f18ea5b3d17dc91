"""Sign-refined torsion of a finite based chain complex over an exact field.

The complex ``C_m -> ... -> C_0`` carries its distinguished bases implicitly
(standard bases of the matrix coordinates).  Field elements are any objects
with exact ``+ - * / ==`` and truthiness; adapters below provide the zero and
one constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence


class FractionOps:
    """Adapter for the rational field."""

    zero = Fraction(0)
    one = Fraction(1)


@dataclass(frozen=True)
class TorsionScalar:
    """Torsion value; the distinguished zero means "not acyclic" in twisted use."""

    value: Any

    def is_zero(self) -> bool:
        return not self.value


class BasedChainComplex:
    """Chain complex of based finite-dimensional vector spaces.

    ``boundaries[i]`` is the matrix of the map ``C_{i+1} -> C_i`` (rows are
    ``C_i`` coordinates).  An optional homological basis gives explicit cycle
    representatives per degree, one list of coordinate vectors per degree.
    """

    def __init__(self, ops, dims: Sequence[int], boundaries, homology_basis=None):
        self.ops = ops
        self.dims = tuple(dims)
        self.boundaries = [
            [list(row) for row in mat] for mat in boundaries
        ]
        if len(self.boundaries) != max(len(self.dims) - 1, 0):
            raise ValueError("need one boundary matrix per adjacent pair")
        for i, mat in enumerate(self.boundaries):
            if len(mat) != self.dims[i] or any(len(r) != self.dims[i + 1] for r in mat):
                raise ValueError(f"boundary {i} has the wrong shape")
        self.homology_basis = None
        if homology_basis is not None:
            self.homology_basis = [
                [list(v) for v in vs] for vs in homology_basis
            ]
            if len(self.homology_basis) != len(self.dims):
                raise ValueError("need one homological basis per degree")
        self._validate_composition()

    @property
    def length(self) -> int:
        return len(self.dims) - 1

    def _validate_composition(self):
        zero = self.ops.zero
        for i in range(len(self.boundaries) - 1):
            a, b = self.boundaries[i], self.boundaries[i + 1]
            for r in range(self.dims[i]):
                for c in range(self.dims[i + 2]):
                    s = zero
                    for k in range(self.dims[i + 1]):
                        s = s + a[r][k] * b[k][c]
                    if s:
                        raise ValueError("boundary maps do not compose to zero")


def _independent_columns(ops, mat, nrows, ncols, order=None):
    """Greedy maximal independent column set, scanning in the given order."""
    cols = order if order is not None else range(ncols)
    basis: list[list[Any]] = []
    selected: list[int] = []
    for j in cols:
        v = [mat[r][j] for r in range(nrows)]
        for b in basis:
            p = next(r for r in range(nrows) if b[r])
            if v[p]:
                f = v[p] / b[p]
                v = [x - f * y for x, y in zip(v, b)]
        if any(bool(x) for x in v):
            basis.append(v)
            selected.append(j)
    return selected


def _determinant(ops, mat):
    n = len(mat)
    if n == 0:
        return ops.one
    m = [row[:] for row in mat]
    det = ops.one
    for j in range(n):
        pivot = None
        for r in range(j, n):
            if m[r][j]:
                pivot = r
                break
        if pivot is None:
            return ops.zero
        if pivot != j:
            m[j], m[pivot] = m[pivot], m[j]
            det = det * (ops.zero - ops.one)
        det = det * m[j][j]
        inv_row = m[j]
        for r in range(j + 1, n):
            if m[r][j]:
                f = m[r][j] / inv_row[j]
                m[r] = [x - f * y for x, y in zip(m[r], inv_row)]
    return det


def torsion(c: BasedChainComplex, zero_if_nonacyclic: bool = False,
            column_orders=None) -> TorsionScalar:
    """Torsion of the based complex per the alternating-determinant rule.

    Boundary-space bases are chosen by pivoted exact elimination; the result
    does not depend on that choice.  Without a homological basis the complex
    must be acyclic (or, with ``zero_if_nonacyclic``, the distinguished zero
    is returned).  ``column_orders`` optionally permutes the greedy column
    scan per boundary matrix, for independence testing.
    """
    ops = c.ops
    m = c.length
    sel: list[list[int]] = []
    for i in range(m):
        order = column_orders[i] if column_orders else None
        sel.append(_independent_columns(ops, c.boundaries[i], c.dims[i], c.dims[i + 1], order))
    rank_in = [len(sel[i]) if i < m else 0 for i in range(m + 1)]
    rank_out = [len(sel[i - 1]) if i >= 1 else 0 for i in range(m + 1)]
    hom_dims = [c.dims[i] - rank_in[i] - rank_out[i] for i in range(m + 1)]
    if any(d < 0 for d in hom_dims):
        raise ValueError("inconsistent ranks (boundary maps not a complex?)")

    h = c.homology_basis
    if h is None:
        if any(hom_dims):
            if zero_if_nonacyclic:
                return TorsionScalar(ops.zero)
            raise ValueError(
                f"complex is not acyclic (homology dimensions {hom_dims}) "
                "and no homological basis was given"
            )
        h = [[] for _ in range(m + 1)]
    else:
        for i in range(m + 1):
            if len(h[i]) != hom_dims[i]:
                raise ValueError(
                    f"homological basis in degree {i} has {len(h[i])} vectors, "
                    f"expected {hom_dims[i]}"
                )
            if i >= 1:
                for v in h[i]:
                    out = c.boundaries[i - 1]
                    img = [sum_product(ops, out[r], v) for r in range(c.dims[i - 1])]
                    if any(bool(x) for x in img):
                        raise ValueError(f"homological basis vector in degree {i} is not a cycle")

    sign_exp = 0
    alpha = 0
    beta = 0
    for k in range(m + 1):
        alpha = (alpha + c.dims[k]) % 2
        beta = (beta + hom_dims[k]) % 2
        sign_exp = (sign_exp + alpha * beta) % 2

    result = ops.one
    for i in range(m + 1):
        cols: list[list[Any]] = []
        if i < m:
            for j in sel[i]:
                cols.append([c.boundaries[i][r][j] for r in range(c.dims[i])])
        for v in h[i]:
            cols.append(list(v))
        if i >= 1:
            for j in sel[i - 1]:
                e = [ops.zero] * c.dims[i]
                e[j] = ops.one
                cols.append(e)
        if len(cols) != c.dims[i]:
            raise ValueError(f"degree {i}: basis count {len(cols)} != dim {c.dims[i]}")
        mat = [[cols[cc][r] for cc in range(len(cols))] for r in range(c.dims[i])]
        det = _determinant(ops, mat)
        if not det:
            raise ValueError(f"degree {i}: combined basis is singular "
                             "(homological basis not independent of boundaries)")
        if i % 2 == 1:
            result = result * det
        else:
            result = result / det
    if sign_exp:
        result = ops.zero - result
    return TorsionScalar(result)


def sum_product(ops, row, vec):
    s = ops.zero
    for a, b in zip(row, vec):
        s = s + a * b
    return s


def torsion_sign_real(c: BasedChainComplex) -> int:
    """Sign of the torsion of a rational complex with a real homological basis."""
    if c.homology_basis is None:
        raise ValueError("a homological basis is required for the sign")
    t = torsion(c)
    if t.value == 0:
        raise ValueError("torsion vanished unexpectedly")
    return 1 if t.value > 0 else -1
