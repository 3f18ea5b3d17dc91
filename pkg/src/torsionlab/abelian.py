"""Finitely generated abelian groups and exact integer linear algebra.

Groups are kept in invariant-factor form ``Z^r + Z/m1 + ... + Z/ms`` with
``m1 | m2 | ... | ms``.  All matrix computations (Smith and Hermite normal
forms, lattice membership) use exact big-integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd

Matrix = list[list[int]]


def identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return [[] for _ in a]
    n, k, m = len(a), len(b), len(b[0])
    assert len(a[0]) == k
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def mat_det(a: Matrix) -> int:
    """Exact determinant by fraction-free column elimination (Bareiss)."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(a: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return unimodular ``U, V`` and diagonal ``D`` with ``U A V = D``.

    The diagonal entries are nonnegative and satisfy ``d1 | d2 | ...``.
    Works for any rectangular integer matrix, including empty ones.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [row[:] for row in a]
    u = identity_matrix(m)
    v = identity_matrix(n)

    def row_op(i, j, q):  # row_i -= q * row_j
        for c in range(n):
            d[i][c] -= q * d[j][c]
        for c in range(m):
            u[i][c] -= q * u[j][c]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(m):
            d[r][i] -= q * d[r][j]
        for r in range(n):
            v[r][i] -= q * v[r][j]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in range(m):
            d[r][i], d[r][j] = d[r][j], d[r][i]
        for r in range(n):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    t = 0
    while t < min(m, n):
        # find a nonzero pivot in the remaining block, smallest |entry| first
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                e = d[i][j]
                if e != 0 and (best is None or abs(e) < best):
                    best = abs(e)
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # clear column t
            dirty = False
            for i in range(t + 1, m):
                if d[i][t] != 0:
                    q = d[i][t] // d[t][t]
                    row_op(i, t, q)
                    if d[i][t] != 0:  # remainder became the smaller pivot
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if d[t][j] != 0:
                    q = d[t][j] // d[t][t]
                    col_op(j, t, q)
                    if d[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if not dirty and all(d[i][t] == 0 for i in range(t + 1, m)) and all(
                d[t][j] == 0 for j in range(t + 1, n)
            ):
                break
        # make the pivot divide the rest of the block
        p = d[t][t]
        culprit = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if d[i][j] % p != 0:
                    culprit = i
                    break
            if culprit is not None:
                break
        if culprit is not None:
            row_op(t, culprit, -1)  # fold the offending row into row t
            continue  # redo elimination at the same t
        if p < 0:
            for c in range(n):
                d[t][c] = -d[t][c]
            for c in range(m):
                u[t][c] = -u[t][c]
        t += 1
    return u, d, v


def snf_diagonal(a: Matrix) -> list[int]:
    _, d, _ = smith_normal_form(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def is_unimodular(a: Matrix) -> bool:
    return len(a) == (len(a[0]) if a else 0) and abs(mat_det(a)) == 1


def hermite_normal_form(rows: list[list[int]]) -> list[list[int]]:
    """Row-style HNF of the lattice spanned by ``rows`` (zero rows dropped).

    Pivots are positive, entries above a pivot are reduced modulo it.
    """
    if not rows:
        return []
    n = len(rows[0])
    basis = _hnf_insert_all([], rows, n)
    return _hnf_reduce(basis, n)


def _pivot_col(row):
    return next(c for c in range(len(row)) if row[c] != 0)


def _xgcd(a: int, b: int) -> tuple[int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return x0, y0


def _hnf_insert_all(basis, new_rows, n):
    work = [r[:] for r in basis] + [r[:] for r in new_rows]
    result: list[list[int]] = []
    work = [r for r in work if any(r)]
    while work:
        vec = work.pop()
        placed = False
        for row in result:
            j = _pivot_col(row)
            if _pivot_col(vec) == j:
                a, b = row[j], vec[j]
                g = gcd(a, b)
                x, y = _xgcd(a, b)
                combo = [x * row[c] + y * vec[c] for c in range(n)]
                rest = [(a // g) * vec[c] - (b // g) * row[c] for c in range(n)]
                result.remove(row)
                work.append(combo)
                if any(rest):
                    work.append(rest)
                placed = True
                break
            if _pivot_col(vec) < j:
                break
        if not placed:
            result.append(vec)
            result.sort(key=_pivot_col)
    return result


def _hnf_reduce(basis, n):
    out = []
    for row in basis:
        j = _pivot_col(row)
        if row[j] < 0:
            row = [-x for x in row]
        out.append(row)
    # reduce entries above each pivot
    for k in range(len(out) - 1, -1, -1):
        j = _pivot_col(out[k])
        p = out[k][j]
        for i in range(k):
            if out[i][j] != 0:
                q = out[i][j] // p
                if q:
                    out[i] = [out[i][c] - q * out[k][c] for c in range(n)]
    return out


def lattice_contains(hnf: list[list[int]], vec: list[int]) -> bool:
    """Membership of an integer vector in the lattice given by HNF rows."""
    v = list(vec)
    n = len(v)
    for row in hnf:
        j = _pivot_col(row)
        if v[j] != 0:
            if v[j] % row[j] != 0:
                return False
            q = v[j] // row[j]
            for c in range(j, n):
                v[c] -= q * row[c]
    return not any(v)


def rational_span_contains(rows: list[list[Fraction]], vec: list[Fraction]) -> bool:
    """Membership of ``vec`` in the Q-span of ``rows`` (exact elimination)."""
    basis: list[list[Fraction]] = []
    for r in rows:
        v = [Fraction(x) for x in r]
        for b in basis:
            j = next(c for c in range(len(b)) if b[c] != 0)
            if v[j] != 0:
                f = v[j] / b[j]
                v = [x - f * y for x, y in zip(v, b)]
        if any(v):
            basis.append(v)
            basis.sort(key=lambda row: next(c for c in range(len(row)) if row[c] != 0))
    v = [Fraction(x) for x in vec]
    for b in basis:
        j = next(c for c in range(len(b)) if b[c] != 0)
        if v[j] != 0:
            f = v[j] / b[j]
            v = [x - f * y for x, y in zip(v, b)]
    return not any(v)


@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z^rank + Z/m1 + ... + Z/ms`` with ``m1 | m2 | ... | ms``, each ``mk >= 2``."""

    rank: int
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        orders = tuple(self.torsion_orders)
        object.__setattr__(self, "torsion_orders", orders)
        for m in orders:
            if m < 2:
                raise ValueError("torsion orders must be >= 2")
        for a, b in zip(orders, orders[1:]):
            if b % a != 0:
                raise ValueError("invariant factors must divide in chain order")

    @property
    def ngens(self) -> int:
        return self.rank + len(self.torsion_orders)

    def is_finite(self) -> bool:
        return self.rank == 0

    def order(self) -> int:
        if self.rank > 0:
            raise ValueError("group is infinite")
        n = 1
        for m in self.torsion_orders:
            n *= m
        return n

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank, (0,) * len(self.torsion_orders))

    def element(self, free=(), torsion=()) -> "GroupElement":
        return GroupElement(self, tuple(free), tuple(torsion))

    def generator(self, k: int) -> "GroupElement":
        """The k-th canonical generator (free generators first)."""
        if not 0 <= k < self.ngens:
            raise IndexError(k)
        free = [0] * self.rank
        tors = [0] * len(self.torsion_orders)
        if k < self.rank:
            free[k] = 1
        else:
            tors[k - self.rank] = 1
        return GroupElement(self, tuple(free), tuple(tors))

    def generators(self) -> list["GroupElement"]:
        return [self.generator(k) for k in range(self.ngens)]

    def from_vector(self, vec) -> "GroupElement":
        """Element from integer coordinates on the canonical generators."""
        vec = list(vec)
        if len(vec) != self.ngens:
            raise ValueError("coordinate length mismatch")
        return GroupElement(self, tuple(vec[: self.rank]), tuple(vec[self.rank:]))

    def elements(self):
        """All elements (finite groups only)."""
        if self.rank > 0:
            raise ValueError("group is infinite")
        for tors in product(*(range(m) for m in self.torsion_orders)):
            yield GroupElement(self, (), tors)

    def torsion_subgroup(self) -> "FgAbelianGroup":
        return FgAbelianGroup(0, self.torsion_orders)

    def __str__(self):
        parts = ["Z"] * self.rank + [f"Z/{m}" for m in self.torsion_orders]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class GroupElement:
    """Element stored as free exponents plus canonical torsion residues."""

    group: FgAbelianGroup
    free_part: tuple[int, ...]
    torsion_part: tuple[int, ...]

    def __post_init__(self):
        g = self.group
        if len(self.free_part) != g.rank or len(self.torsion_part) != len(g.torsion_orders):
            raise ValueError("coordinate shape mismatch")
        reduced = tuple(v % m for v, m in zip(self.torsion_part, g.torsion_orders))
        object.__setattr__(self, "torsion_part", reduced)
        object.__setattr__(self, "free_part", tuple(self.free_part))

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if self.group != other.group:
            raise ValueError("group mismatch")
        return GroupElement(
            self.group,
            tuple(a + b for a, b in zip(self.free_part, other.free_part)),
            tuple(a + b for a, b in zip(self.torsion_part, other.torsion_part)),
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(
            self.group,
            tuple(-a for a in self.free_part),
            tuple(-a for a in self.torsion_part),
        )

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def scale(self, n: int) -> "GroupElement":
        return GroupElement(
            self.group,
            tuple(n * a for a in self.free_part),
            tuple(n * a for a in self.torsion_part),
        )

    def is_zero(self) -> bool:
        return not any(self.free_part) and not any(self.torsion_part)

    def coordinates(self) -> tuple[int, ...]:
        return self.free_part + self.torsion_part

    def order(self) -> int:
        """Order of the element (0 meaning infinite)."""
        if any(self.free_part):
            return 0
        n = 1
        for v, m in zip(self.torsion_part, self.group.torsion_orders):
            if v:
                n = n * (m // gcd(v, m)) // gcd(n, m // gcd(v, m))
        return n

    def __str__(self):
        return str(self.coordinates())


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by an integer matrix on canonical generators.

    Column ``j`` holds the coordinates (an arbitrary integer lift on torsion
    targets) of the image of the j-th source generator.
    """

    source: FgAbelianGroup
    target: FgAbelianGroup
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        mat = tuple(tuple(row) for row in self.matrix)
        object.__setattr__(self, "matrix", mat)
        if len(mat) != self.target.ngens or any(
            len(row) != self.source.ngens for row in mat
        ):
            raise ValueError("matrix shape mismatch")
        # columns over torsion source generators must respect the orders
        for j in range(self.source.ngens):
            if j < self.source.rank:
                continue
            m = self.source.torsion_orders[j - self.source.rank]
            img = self.apply(self.source.generator(j).scale(m))
            if not img.is_zero():
                raise ValueError(
                    f"column {j} does not kill the order-{m} relation of the source"
                )

    @staticmethod
    def identity(group: FgAbelianGroup) -> "GroupHom":
        return GroupHom(group, group, tuple(tuple(r) for r in identity_matrix(group.ngens)))

    def apply(self, x: GroupElement) -> GroupElement:
        if x.group != self.source:
            raise ValueError("element not in the source group")
        coords = x.coordinates()
        vec = [sum(self.matrix[i][j] * coords[j] for j in range(len(coords)))
               for i in range(self.target.ngens)]
        return self.target.from_vector(vec)

    def compose(self, other: "GroupHom") -> "GroupHom":
        """self after other."""
        if other.target != self.source:
            raise ValueError("composition mismatch")
        prod = matmul([list(r) for r in self.matrix], [list(r) for r in other.matrix])
        return GroupHom(other.source, self.target, tuple(tuple(r) for r in prod))


def relation_matrix(group: FgAbelianGroup) -> Matrix:
    """Columns generating the relation lattice of the canonical presentation."""
    n = group.ngens
    cols = []
    for k, m in enumerate(group.torsion_orders):
        col = [0] * n
        col[group.rank + k] = m
        cols.append(col)
    return [[col[i] for col in cols] for i in range(n)] if cols else [[] for _ in range(n)]


@dataclass(frozen=True)
class Presentation:
    """Cokernel of an integer matrix with the projection onto it."""

    relation_matrix: tuple[tuple[int, ...], ...]
    group: FgAbelianGroup
    projection: tuple[tuple[int, ...], ...]  # group.ngens x ambient rows

    def project(self, vec) -> GroupElement:
        vec = list(vec)
        coords = [sum(row[j] * vec[j] for j in range(len(vec))) for row in self.projection]
        return self.group.from_vector(coords)


def cokernel(a: Matrix) -> Presentation:
    """Cokernel of ``a`` (columns の relations on the row lattice) in invariant-factor form."""
    m = len(a)
    n = len(a[0]) if m else 0
    u, d, _ = smith_normal_form(a)
    diag = [d[i][i] for i in range(min(m, n))] + [0] * (m - min(m, n))
    free_rows = [i for i, x in enumerate(diag) if x == 0]
    tors_rows = [i for i, x in enumerate(diag) if x not in (0, 1)]
    group = FgAbelianGroup(len(free_rows), tuple(diag[i] for i in tors_rows))
    proj_rows = [u[i] for i in free_rows] + [u[i] for i in tors_rows]
    return Presentation(
        tuple(tuple(row) for row in a),
        group,
        tuple(tuple(row) for row in proj_rows),
    )


def is_isomorphism(f: GroupHom) -> bool:
    """True iff ``f`` is bijective.

    Uses that a surjection between isomorphic finitely generated abelian
    groups is automatically injective, so it suffices to compare invariant
    factors and check surjectivity by a Smith-form computation.
    """
    src, tgt = f.source, f.target
    if (src.rank, src.torsion_orders) != (tgt.rank, tgt.torsion_orders):
        return False
    rel = relation_matrix(tgt)
    n = tgt.ngens
    cols = [[f.matrix[i][j] for i in range(n)] for j in range(src.ngens)]
    cols += [[rel[i][j] for i in range(n)] for j in range(len(rel[0]) if rel and rel[0] else 0)]
    if not cols:
        return n == 0
    stacked = [[col[i] for col in cols] for i in range(n)]
    diag = snf_diagonal(stacked)
    return len(diag) >= n and all(x == 1 for x in diag[:n])


def hom_inverse(f: GroupHom) -> GroupHom:
    """Inverse of an isomorphism, found by solving on canonical generators."""
    if not is_isomorphism(f):
        raise ValueError("homomorphism is not an isomorphism")
    src, tgt = f.source, f.target
    # Solve f(x_j) = e_j modulo target relations: columns of f.matrix and the
    # target relations span Z^n; express each standard basis vector.
    rel = relation_matrix(tgt)
    n = tgt.ngens
    k = src.ngens
    rel_cols = len(rel[0]) if rel and rel[0] else 0
    big = [[f.matrix[i][j] for j in range(k)] + [rel[i][j] for j in range(rel_cols)]
           for i in range(n)]
    u, d, v = smith_normal_form(big)
    cols_out = []
    for target_gen in range(n):
        rhs = [u[i][target_gen] for i in range(n)]
        y = []
        for i in range(k + rel_cols):
            if i < min(n, k + rel_cols) and i < len(rhs) and d[i][i] != 0:
                if rhs[i] % d[i][i] != 0:
                    raise ArithmeticError("generator not hit; not an isomorphism")
                y.append(rhs[i] // d[i][i])
            else:
                y.append(0)
        if any(rhs[i] != 0 and (i >= min(n, k + rel_cols) or d[i][i] == 0) for i in range(n)):
            raise ArithmeticError("generator not hit; not an isomorphism")
        x = [sum(v[i][j] * y[j] for j in range(k + rel_cols)) for i in range(k + rel_cols)]
        cols_out.append(x[:k])
    matrix = tuple(tuple(cols_out[j][i] for j in range(n)) for i in range(k))
    return GroupHom(tgt, src, matrix)
