"""Exact arithmetic in the integral and rational group rings of a finitely
generated abelian group, with augmentation-ideal filtration tests.

Membership in a power ``I^d`` is decided by a two-layer algorithm: a unit
normalization making all free exponents nonnegative, an exact expansion in
shifted free variables ``t_i = 1 + s_i``, and Hermite-form lattice tests for
the torsion-coefficient conditions.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd

from .abelian import (
    FgAbelianGroup,
    GroupElement,
    hermite_normal_form,
    lattice_contains,
    rational_span_contains,
)

DEFAULT_TORSION_CAP = 64


def _torsion_cap() -> int:
    env = os.environ.get("TORSIONLAB_MAX_TORSION")
    return int(env) if env else DEFAULT_TORSION_CAP


@dataclass(frozen=True)
class IdealPowerQuery:
    """A requested power of the augmentation ideal, over Z or over Q."""

    exponent: int
    over: str = "Z"

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("exponent must be nonnegative")
        if self.over not in ("Z", "Q"):
            raise ValueError("coefficient ring flag must be 'Z' or 'Q'")


class GroupRingElem:
    """Finite formal combination of group elements with rational coefficients.

    Zero coefficients are never stored; keys are canonical group elements.
    """

    __slots__ = ("group", "coeffs")

    def __init__(self, group: FgAbelianGroup, coeffs: dict[GroupElement, Fraction]):
        self.group = group
        clean = {}
        for g, c in coeffs.items():
            c = Fraction(c)
            if c != 0:
                clean[g] = c
        self.coeffs = clean

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_dict(group, coeffs) -> "GroupRingElem":
        return GroupRingElem(group, {g: Fraction(c) for g, c in coeffs.items()})

    @staticmethod
    def zero(group) -> "GroupRingElem":
        return GroupRingElem(group, {})

    @staticmethod
    def one(group) -> "GroupRingElem":
        return GroupRingElem(group, {group.zero(): Fraction(1)})

    @staticmethod
    def from_element(g: GroupElement, c=1) -> "GroupRingElem":
        return GroupRingElem(g.group, {g: Fraction(c)})

    @staticmethod
    def sigma(group: FgAbelianGroup) -> "GroupRingElem":
        """The full group sum (finite groups only)."""
        if not group.is_finite():
            raise ValueError("group sum requires a finite group")
        return GroupRingElem(group, {g: Fraction(1) for g in group.elements()})

    # -- ring structure ------------------------------------------------------

    def _check(self, other):
        if self.group != other.group:
            raise ValueError("group mismatch")

    def __add__(self, other):
        self._check(other)
        d = dict(self.coeffs)
        for g, c in other.coeffs.items():
            d[g] = d.get(g, Fraction(0)) + c
        return GroupRingElem(self.group, d)

    def __neg__(self):
        return GroupRingElem(self.group, {g: -c for g, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        d: dict[GroupElement, Fraction] = {}
        for g1, c1 in self.coeffs.items():
            for g2, c2 in other.coeffs.items():
                g = g1 + g2
                d[g] = d.get(g, Fraction(0)) + c1 * c2
        return GroupRingElem(self.group, d)

    __rmul__ = __mul__

    def scale(self, c) -> "GroupRingElem":
        c = Fraction(c)
        return GroupRingElem(self.group, {g: c * v for g, v in self.coeffs.items()})

    def translate(self, x: GroupElement) -> "GroupRingElem":
        """Multiplication by the group element ``x`` (a unit of the ring)."""
        return GroupRingElem(self.group, {g + x: c for g, c in self.coeffs.items()})

    def bar(self) -> "GroupRingElem":
        """Involution induced by inversion in the group."""
        return GroupRingElem(self.group, {-g: c for g, c in self.coeffs.items()})

    def __eq__(self, other):
        return (
            isinstance(other, GroupRingElem)
            and self.group == other.group
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.group, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs.values())

    def items(self):
        return self.coeffs.items()

    def sorted_items(self):
        return sorted(self.coeffs.items(), key=lambda t: t[0].coordinates())

    def coefficient(self, g: GroupElement) -> Fraction:
        return self.coeffs.get(g, Fraction(0))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for g, c in self.sorted_items():
            parts.append(f"{c}*{g.coordinates()}")
        return " + ".join(parts)

    __repr__ = __str__


def aug(z: GroupRingElem) -> Fraction:
    """Sum of coefficients."""
    return sum(z.coeffs.values(), Fraction(0))


def multiply(a: GroupRingElem, b: GroupRingElem) -> GroupRingElem:
    return a * b


# ---------------------------------------------------------------------------
# torsion-part lattices


def _enumerate_torsion(group: FgAbelianGroup):
    tors = group.torsion_subgroup()
    elems = list(tors.elements())
    index = {e.torsion_part: k for k, e in enumerate(elems)}
    return tors, elems, index


@lru_cache(maxsize=None)
def _torsion_ideal_lattice(torsion_orders: tuple[int, ...], e: int):
    """HNF rows spanning I(Z[T])^e inside Z^{|T|} for T of the given orders."""
    tors = FgAbelianGroup(0, torsion_orders)
    size = tors.order()
    if size > _torsion_cap():
        raise ValueError(
            f"torsion group of order {size} exceeds the cap "
            f"(set TORSIONLAB_MAX_TORSION to raise it)"
        )
    _, elems, index = _enumerate_torsion(tors)
    if e == 0:
        return tuple(tuple(r) for r in hermite_normal_form(
            [[1 if i == j else 0 for j in range(size)] for i in range(size)]
        ))
    gens = [tors.generator(k) for k in range(tors.ngens)]
    # products of e generator differences, as multisets, times all elements
    products = [GroupRingElem.one(tors)]
    for _ in range(e):
        new = []
        seen = set()
        for p in products:
            for g in gens:
                q = p * (GroupRingElem.from_element(g) - GroupRingElem.one(tors))
                key = frozenset((el.torsion_part, c) for el, c in q.items())
                if key not in seen:
                    seen.add(key)
                    new.append(q)
        products = new
    rows = []
    for p in products:
        for t in elems:
            shifted = p.translate(t)
            vec = [0] * size
            for el, c in shifted.items():
                vec[index[el.torsion_part]] = int(c)
            rows.append(vec)
    return tuple(tuple(r) for r in hermite_normal_form(rows))


def _torsion_vector(z: GroupRingElem):
    tors, elems, index = _enumerate_torsion(z.group)
    vec = [Fraction(0)] * len(elems)
    for g, c in z.items():
        if any(g.free_part):
            raise ValueError("element has free support")
        vec[index[g.torsion_part]] += c
    return vec


def _torsion_power_member(coeff_vec, torsion_orders, e, over):
    if e <= 0:
        return True
    lattice = _torsion_ideal_lattice(torsion_orders, e)
    if over == "Q":
        rows = [[Fraction(x) for x in r] for r in lattice]
        return rational_span_contains(rows, coeff_vec)
    if any(c.denominator != 1 for c in coeff_vec):
        return False
    return lattice_contains([list(r) for r in lattice], [int(c) for c in coeff_vec])


# ---------------------------------------------------------------------------
# the membership algorithm


def _s_expansion(z: GroupRingElem):
    """Coefficients of the expansion t^v -> prod (1+s_i)^{v_i}.

    Requires all free exponents nonnegative.  Returns a map from s-monomial
    (tuple of nonnegative ints) to torsion coefficient vectors.
    """
    group = z.group
    r = group.rank
    tors, elems, index = _enumerate_torsion(group)
    size = len(elems)
    out: dict[tuple[int, ...], list[Fraction]] = {}
    for g, c in z.items():
        v = g.free_part
        if any(x < 0 for x in v):
            raise AssertionError("expansion requires nonnegative exponents")
        # enumerate monomials m <= v componentwise
        def rec(i, mono, coeff):
            if i == r:
                vec = out.setdefault(tuple(mono), [Fraction(0)] * size)
                vec[index[g.torsion_part]] += coeff
                return
            for m in range(v[i] + 1):
                mono.append(m)
                rec(i + 1, mono, coeff * comb(v[i], m))
                mono.pop()
        rec(0, [], c)
    return out


def _unit_normalized(z: GroupRingElem) -> GroupRingElem:
    """Translate by a free monomial so all free exponents are >= 0."""
    r = z.group.rank
    if r == 0 or z.is_zero():
        return z
    mins = [min(g.free_part[i] for g in z.coeffs) for i in range(r)]
    shift = z.group.element(tuple(-min(0, m) for m in mins),
                            (0,) * len(z.group.torsion_orders))
    return z.translate(shift)


def iadic_member(z: GroupRingElem, d: int, over: str = "Z") -> bool:
    """True iff ``z`` lies in the d-th power of the augmentation ideal.

    ``over="Z"`` tests the integral lattice (integer coefficients required);
    ``over="Q"`` tests the rational span.
    """
    IdealPowerQuery(d, over)
    if z.is_zero() or d == 0:
        return True
    if over == "Z" and not z.is_integral():
        raise ValueError("integral membership requested for rational coefficients")
    z = _unit_normalized(z)
    expansion = _s_expansion(z)
    orders = z.group.torsion_orders
    for mono, vec in expansion.items():
        k = sum(mono)
        if k < d:
            if not _torsion_power_member(vec, orders, d - k, over):
                return False
    return True


def iadic_valuation(z: GroupRingElem, cutoff: int, over: str = "Z"):
    """Largest d <= cutoff with z in I^d, or ">=cutoff" when it persists."""
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    if z.is_zero():
        return ">=cutoff"
    best = 0
    for d in range(1, cutoff + 1):
        if iadic_member(z, d, over):
            best = d
        else:
            return best
    return ">=cutoff"


# ---------------------------------------------------------------------------
# kappa normalization (finite groups)


def kappa(z: GroupRingElem) -> GroupRingElem:
    """``z - aug(z) * |G|^{-1} * Sigma`` for finite G."""
    if not z.group.is_finite():
        raise ValueError("kappa requires a finite group")
    a = aug(z)
    if a == 0:
        return z
    sigma = GroupRingElem.sigma(z.group)
    return z - sigma.scale(Fraction(a, z.group.order()))


def kappa_image_member(z: GroupRingElem, d: int) -> bool:
    """Membership of ``z`` in the kappa-image of I^d (finite groups).

    For d >= 1 the kappa map fixes I^d pointwise, so this is plain integral
    membership; for d = 0 it is lattice membership in the span of kappa(g).
    """
    if not z.group.is_finite():
        raise ValueError("kappa requires a finite group")
    if d >= 1:
        if aug(z) != 0 or not z.is_integral():
            return False
        return iadic_member(z, d, over="Z")
    # d = 0: the lattice spanned by kappa(g), g in G, has denominators |G|;
    # scale everything by |G| and run an integer test.
    group = z.group
    m = group.order()
    _, elems, index = _enumerate_torsion(group)
    rows = []
    for g in elems:
        vec = [-1] * m
        vec[index[g.torsion_part]] += m
        rows.append(vec)
    hnf = hermite_normal_form(rows)
    target = [z.coefficient(g) * m for g in elems]
    if any(c.denominator != 1 for c in target):
        return False
    return lattice_contains(hnf, [int(c) for c in target])


# ---------------------------------------------------------------------------
# nilpotent residue of the filtration


def primary_decomposition(group: FgAbelianGroup) -> dict[int, list[GroupElement]]:
    """Generators of the p-primary parts of the torsion subgroup.

    Computed on demand from the invariant factors by CRT.  Returns a map
    from prime p to generators (elements of ``group``) of the p-part.
    """
    parts: dict[int, list[GroupElement]] = {}
    for k, m in enumerate(group.torsion_orders):
        for p in _prime_factors(m):
            q = 1
            mm = m
            while mm % p == 0:
                mm //= p
                q *= p
            # the (m/q)-multiple of the generator has order q = p-part of m
            gen = group.generator(group.rank + k).scale(m // q)
            parts.setdefault(p, []).append(gen)
    return parts


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def nilpotent_residue(group: FgAbelianGroup) -> list[GroupRingElem]:
    """Ideal generators of the intersection of all powers of I.

    The residue is the sum over prime pairs p != q of the products
    I(Z[G_p]) I(Z[G_q]) Z[G]; it is empty when the torsion subgroup
    is a p-group or trivial.
    """
    parts = primary_decomposition(group)
    primes = sorted(parts)
    gens: list[GroupRingElem] = []
    one = GroupRingElem.one(group)
    for i, p in enumerate(primes):
        for q in primes[i + 1:]:
            for a in parts[p]:
                for b in parts[q]:
                    gens.append(
                        (GroupRingElem.from_element(a) - one)
                        * (GroupRingElem.from_element(b) - one)
                    )
    return gens
