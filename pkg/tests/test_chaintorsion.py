import random
from fractions import Fraction

import pytest

from torsionlab._poly import CyclotomicField, FieldFraction, MPoly
from torsionlab.chaintorsion import (
    BasedChainComplex,
    FractionOps,
    _determinant,
    torsion,
    torsion_sign_real,
)


class RationalFunctionOps:
    """Adapter for Q(t), realized as one-variable fractions over Q."""

    field = CyclotomicField(1)
    zero = FieldFraction.zero(field, 1)
    one = FieldFraction.one(field, 1)

    @classmethod
    def t_power(cls, k):
        num = MPoly.monomial(cls.field, 1, (max(k, 0),))
        den = MPoly.monomial(cls.field, 1, (max(-k, 0),))
        return FieldFraction(num, den)

    @classmethod
    def const(cls, c):
        return FieldFraction.from_poly(MPoly.constant(cls.field, 1, cls.field.from_rational(c)))


def frac_mat(rows):
    return [[Fraction(x) for x in row] for row in rows]


def mat_mul(ops, a, b):
    if not a or not b:
        return [[] for _ in a]
    n, k, m = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = ops.zero
            for t in range(k):
                s = s + a[i][t] * b[t][j]
            row.append(s)
        out.append(row)
    return out


def mat_inv(ops, p):
    n = len(p)
    aug = [row[:] + [ops.one if r == i else ops.zero for i in range(n)]
           for r, row in enumerate(p)]
    for j in range(n):
        piv = next(r for r in range(j, n) if aug[r][j])
        aug[j], aug[piv] = aug[piv], aug[j]
        f = aug[j][j]
        aug[j] = [x / f for x in aug[j]]
        for r in range(n):
            if r != j and aug[r][j]:
                g = aug[r][j]
                aug[r] = [x - g * y for x, y in zip(aug[r], aug[j])]
    return [row[n:] for row in aug]


def random_invertible(ops, rng, n, make):
    while True:
        m = [[make(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        if n == 0 or _determinant(ops, m):
            return m


def random_acyclic_complex(rng, ops, make, max_dim=3, length=3):
    """Shifted identity complexes conjugated coherently; acyclic by construction."""
    pieces = [rng.randint(0, max_dim) for _ in range(length)]
    dims = []
    for i in range(length + 1):
        left = pieces[i - 1] if i >= 1 else 0
        right = pieces[i] if i < length else 0
        dims.append(left + right)
    boundaries = []
    for i in range(length):
        rows, cols = dims[i], dims[i + 1]
        mat = [[ops.zero] * cols for _ in range(rows)]
        left_i = pieces[i - 1] if i >= 1 else 0
        for k in range(pieces[i]):
            mat[left_i + k][k] = ops.one
        boundaries.append(mat)
    ps = [random_invertible(ops, rng, dims[i], make) for i in range(length + 1)]
    ps_inv = [mat_inv(ops, p) if p else [] for p in ps]
    new_boundaries = [
        mat_mul(ops, mat_mul(ops, ps[i], boundaries[i]), ps_inv[i + 1])
        for i in range(length)
    ]
    return BasedChainComplex(ops, dims, new_boundaries)


def two_term(matrix):
    n = len(matrix)
    return BasedChainComplex(FractionOps, (n, n), [matrix])


def test_two_term_torsion_is_inverse_determinant():
    assert torsion(two_term(frac_mat([[2, 1], [1, 1]]))).value == 1
    assert torsion(two_term(frac_mat([[5]]))).value == Fraction(1, 5)
    assert torsion(two_term(frac_mat([[2, 0], [0, 3]]))).value == Fraction(1, 6)


def test_random_two_term_matches_det_inverse():
    rng = random.Random(37)
    for _ in range(50):
        n = rng.randint(1, 4)
        a = random_invertible(FractionOps, rng, n, Fraction)
        assert torsion(two_term(a)).value == 1 / _determinant(FractionOps, a)


def test_zero_differential_with_standard_basis():
    dims = (2, 2)
    bnd = [frac_mat([[0, 0], [0, 0]])]
    h0 = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    h1 = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    c = BasedChainComplex(FractionOps, dims, bnd, homology_basis=[h0, h1])
    assert abs(torsion(c).value) == 1

    # negating one homological basis vector flips the sign
    h0_flipped = [[Fraction(-1), Fraction(0)], [Fraction(0), Fraction(1)]]
    c2 = BasedChainComplex(FractionOps, dims, bnd, homology_basis=[h0_flipped, h1])
    assert torsion(c2).value == -torsion(c).value
    assert torsion_sign_real(c2) == -torsion_sign_real(c)


def test_acyclicity_required_without_basis():
    bnd = [frac_mat([[0]])]
    with pytest.raises(ValueError):
        torsion(BasedChainComplex(FractionOps, (1, 1), bnd))
    z = torsion(BasedChainComplex(FractionOps, (1, 1), bnd), zero_if_nonacyclic=True)
    assert z.is_zero()


def test_composition_validated():
    with pytest.raises(ValueError):
        BasedChainComplex(FractionOps, (1, 1, 1), [frac_mat([[1]]), frac_mat([[1]])])


def test_b_independence_over_rational_functions():
    rng = random.Random(41)
    ops = RationalFunctionOps

    def make(k):
        return ops.const(k) + ops.t_power(1) * ops.const(rng.randint(-1, 1))

    for trial in range(200):
        c = random_acyclic_complex(rng, ops, make, max_dim=3, length=3)
        base = torsion(c).value
        for _ in range(5):
            orders = [list(range(c.dims[i + 1])) for i in range(c.length)]
            for o in orders:
                rng.shuffle(o)
            assert torsion(c, column_orders=orders).value == base


def test_base_change_covariance():
    rng = random.Random(43)
    for _ in range(40):
        c = random_acyclic_complex(rng, FractionOps, Fraction, max_dim=3, length=2)
        i = rng.randint(0, c.length)
        n = c.dims[i]
        if n == 0:
            continue
        p = random_invertible(FractionOps, rng, n, Fraction)
        detp = _determinant(FractionOps, p)
        pinv = mat_inv(FractionOps, p)
        new_boundaries = [[row[:] for row in mat] for mat in c.boundaries]
        if i >= 1:
            new_boundaries[i - 1] = mat_mul(FractionOps, new_boundaries[i - 1], p)
        if i < c.length:
            new_boundaries[i] = mat_mul(FractionOps, pinv, new_boundaries[i])
        c2 = BasedChainComplex(FractionOps, c.dims, new_boundaries)
        # expressing everything in the new basis (columns of P) multiplies the
        # torsion by det(P)^{(-1)^i} under the alternating-determinant rule
        expected = torsion(c).value * (detp if i % 2 == 0 else 1 / detp)
        assert torsion(c2).value == expected


def test_homological_basis_covariance():
    rng = random.Random(47)
    for _ in range(40):
        dims = (rng.randint(1, 3), rng.randint(1, 3))
        bnd = [[[Fraction(0)] * dims[1] for _ in range(dims[0])]]
        hs = []
        dets = []
        for n in dims:
            p = random_invertible(FractionOps, rng, n, Fraction)
            hs.append([[p[r][cc] for r in range(n)] for cc in range(n)])
            dets.append(_determinant(FractionOps, p))
        c = BasedChainComplex(FractionOps, dims, bnd, homology_basis=hs)
        t = torsion(c).value
        assert abs(t) == abs(dets[1] / dets[0])
        # rescaling h0 by 2 divides the torsion by 2^{dim C_0}
        hs2 = [[[x * 2 for x in v] for v in hs[0]], hs[1]]
        c2 = BasedChainComplex(FractionOps, dims, bnd, homology_basis=hs2)
        assert torsion(c2).value == t / (2 ** dims[0])


def test_wrong_rank_homological_basis_rejected():
    bnd = [frac_mat([[0]])]
    with pytest.raises(ValueError):
        torsion(BasedChainComplex(FractionOps, (1, 1), bnd,
                                  homology_basis=[[], [[Fraction(1)]]]))
    with pytest.raises(ValueError):
        BasedChainComplex(FractionOps, (1, 1), bnd, homology_basis=[[], [], []])


def test_non_cycle_representative_rejected():
    bnd = [frac_mat([[1, 0], [0, 0]])]
    with pytest.raises(ValueError):
        torsion(BasedChainComplex(
            FractionOps, (2, 2), bnd,
            homology_basis=[[[Fraction(0), Fraction(1)]], [[Fraction(1), Fraction(0)]]],
        ))
