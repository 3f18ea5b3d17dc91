"""The canonical splitting of the total quotient ring of Q[G] into fields.

For ``G = Z^r + Z/m`` (cyclic torsion) the splitting has one factor per
divisor d of m: the fraction field of Laurent polynomials in r variables
over Q(zeta_d).  The projection sends the torsion generator to zeta_d and
each free generator to a variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ._poly import CycNum, CyclotomicField, FieldFraction, MPoly, cyclotomic_polynomial
from .abelian import FgAbelianGroup, GroupElement
from .groupring import GroupRingElem


class UnsupportedTorsionError(ValueError):
    """Raised for groups whose torsion part is not cyclic."""


def _cyclic_data(group: FgAbelianGroup) -> tuple[int, int]:
    """(rank, m) for G = Z^r + Z/m; m = 1 when there is no torsion."""
    if len(group.torsion_orders) > 1:
        raise UnsupportedTorsionError(
            f"torsion part {group.torsion_orders} is not cyclic; "
            "the field splitting supports a single cyclic factor only"
        )
    m = group.torsion_orders[0] if group.torsion_orders else 1
    return group.rank, m


def divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


@dataclass(frozen=True)
class FieldComponent:
    """One factor of the splitting: Q(zeta_d) extended by r variables."""

    divisor: int
    torsion_order: int
    rank: int

    @property
    def base_field(self) -> CyclotomicField:
        return CyclotomicField(self.divisor)

    @property
    def character_label(self) -> int:
        return self.divisor

    def cyclotomic_degree(self) -> int:
        return self.base_field.degree

    def zero(self) -> "FieldElement":
        return FieldElement(self, FieldFraction.zero(self.base_field, self.rank))

    def one(self) -> "FieldElement":
        return FieldElement(self, FieldFraction.one(self.base_field, self.rank))

    def from_fraction(self, frac: FieldFraction) -> "FieldElement":
        return FieldElement(self, frac)

    def member_image(self, g: GroupElement) -> FieldFraction:
        """Image of a single group element: zeta^k times a Laurent monomial."""
        k = g.torsion_part[0] if g.torsion_part else 0
        zeta = self.base_field.zeta_power(k)
        pos = tuple(max(e, 0) for e in g.free_part)
        neg = tuple(max(-e, 0) for e in g.free_part)
        num = MPoly.monomial(self.base_field, self.rank, pos, zeta)
        den = MPoly.monomial(self.base_field, self.rank, neg)
        return FieldFraction(num, den)

    def __str__(self):
        var = f"({', '.join(f't{i+1}' for i in range(self.rank))})" if self.rank else ""
        base = "Q" if self.divisor == 1 else f"Q(zeta_{self.divisor})"
        return base + var


@dataclass(frozen=True)
class FieldElement:
    """Value in one component: a reduced fraction of Laurent polynomials."""

    component: FieldComponent
    value: FieldFraction

    def _check(self, other: "FieldElement"):
        if self.component != other.component:
            raise ValueError("field component mismatch")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.component, self.value + other.value)

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.component, self.value - other.value)

    def __neg__(self):
        return FieldElement(self.component, -self.value)

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            self._check(other)
            return FieldElement(self.component, self.value * other.value)
        return FieldElement(self.component, self.value * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        self._check(other)
        return FieldElement(self.component, self.value / other.value)

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def __bool__(self):
        return bool(self.value)


def split_quotient_ring(group: FgAbelianGroup) -> list[FieldComponent]:
    """One component per divisor of the (cyclic) torsion order."""
    rank, m = _cyclic_data(group)
    return [FieldComponent(d, m, rank) for d in divisors(m)]


def project(z: GroupRingElem, comp: FieldComponent) -> FieldElement:
    """Ring homomorphism onto one component of the splitting."""
    rank, m = _cyclic_data(z.group)
    if (rank, m) != (comp.rank, comp.torsion_order):
        raise ValueError("group does not match the component")
    total = FieldFraction.zero(comp.base_field, comp.rank)
    for g, c in z.items():
        total = total + comp.member_image(g) * c
    return FieldElement(comp, total)


@dataclass(frozen=True)
class ComponentVector:
    """One field element per component of the splitting of Q[G]."""

    group: FgAbelianGroup
    values: tuple[FieldElement, ...]
    sign_refined: bool = False

    def __post_init__(self):
        expected = split_quotient_ring(self.group)
        got = [v.component for v in self.values]
        if got != expected:
            raise ValueError("component list does not match the splitting")

    @staticmethod
    def from_ring_element(z: GroupRingElem, sign_refined: bool = False) -> "ComponentVector":
        comps = split_quotient_ring(z.group)
        return ComponentVector(z.group, tuple(project(z, c) for c in comps), sign_refined)

    def component(self, divisor: int) -> FieldElement:
        for v in self.values:
            if v.component.divisor == divisor:
                return v
        raise KeyError(f"no component for divisor {divisor}")

    def __add__(self, other: "ComponentVector") -> "ComponentVector":
        if self.group != other.group:
            raise ValueError("group mismatch")
        return ComponentVector(
            self.group,
            tuple(a + b for a, b in zip(self.values, other.values)),
            self.sign_refined and other.sign_refined,
        )

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ComponentVector(self.group, tuple(-v for v in self.values), self.sign_refined)

    def scale_by_element(self, x: GroupElement) -> "ComponentVector":
        """Multiply every component by the image of the group element ``x``."""
        out = []
        for v in self.values:
            out.append(FieldElement(v.component, v.value * v.component.member_image(x)))
        return ComponentVector(self.group, tuple(out), self.sign_refined)

    def scale(self, c) -> "ComponentVector":
        return ComponentVector(
            self.group, tuple(FieldElement(v.component, v.value * c) for v in self.values),
            self.sign_refined,
        )

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)


@lru_cache(maxsize=None)
def _crt_idempotents(m: int) -> dict[int, tuple[Fraction, ...]]:
    """Idempotents e_d of Q[u]/(u^m - 1), one per divisor, as coefficient tuples."""
    out = {}
    for d in divisors(m):
        phi = cyclotomic_polynomial(d)
        # M = (u^m - 1) / Phi_d, as integer polynomial
        full = [0] * m + [1]
        full[0] = -1
        md = _div_int(full, list(phi))
        # inverse of M modulo Phi_d, computed inside Q(zeta_d)
        field = CyclotomicField(d)
        m_mod = CycNum(field, field._reduce([Fraction(c) for c in md]))
        inv = m_mod.inverse()
        # e_d = M * inv  (mod u^m - 1)
        e = _cyclic_mul([Fraction(c) for c in md] + [Fraction(0)] * (m - len(md)),
                        list(inv.vec) + [Fraction(0)] * (m - len(inv.vec)), m)
        out[d] = tuple(e)
    return out


def _div_int(num, den):
    num = num[:]
    q = [0] * (len(num) - len(den) + 1)
    for k in range(len(q) - 1, -1, -1):
        c = num[k + len(den) - 1]
        assert c % den[-1] == 0
        q[k] = c // den[-1]
        for j, y in enumerate(den):
            num[k + j] -= q[k] * y
    assert not any(num)
    return q


def _cyclic_mul(a, b, m):
    out = [Fraction(0)] * m
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[(i + j) % m] += x * y
    return out


def reassemble(vec: ComponentVector):
    """The element of Q[G] projecting to ``vec``, or None when no such
    element exists (some component has a genuine denominator).

    Torsion coordinates are recovered by CRT over the cyclotomic idempotents;
    free coordinates by exact Laurent-polynomial division inside each
    component.
    """
    group = vec.group
    rank, m = _cyclic_data(group)
    laurents = {}
    for v in vec.values:
        laur = v.value.as_laurent()
        if laur is None:
            return None
        laurents[v.component.divisor] = laur
    idem = _crt_idempotents(m)
    # collect all free exponent tuples
    exponents = sorted({e for laur in laurents.values() for e in laur})
    coeffs: dict[GroupElement, Fraction] = {}
    field_cache = {d: CyclotomicField(d) for d in laurents}
    for e in exponents:
        total = [Fraction(0)] * m
        for d, laur in laurents.items():
            c = laur.get(e)
            if c is None:
                continue
            lift = list(c.vec) + [Fraction(0)] * (m - len(c.vec))
            contrib = _cyclic_mul(lift, list(idem[d]), m)
            total = [x + y for x, y in zip(total, contrib)]
        for k, c in enumerate(total):
            if c:
                g = group.element(e, (k,) if group.torsion_orders else ())
                coeffs[g] = c
        if not group.torsion_orders and any(total[1:]):
            raise AssertionError("unexpected torsion coordinates for torsion-free group")
    return GroupRingElem.from_dict(group, coeffs)
