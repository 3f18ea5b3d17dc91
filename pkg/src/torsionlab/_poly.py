"""Internal exact-arithmetic engine: cyclotomic numbers, multivariate
polynomials with cyclotomic coefficients, and canonically reduced fractions.

Everything is exact: rationals via ``fractions.Fraction``, cyclotomic numbers
as coefficient vectors modulo the cyclotomic polynomial, polynomials as
dictionaries keyed by exponent tuples under a fixed graded-lex order.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


# ---------------------------------------------------------------------------
# integer polynomial helpers (dense lists, low degree first)


def _int_poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _int_poly_divexact(num, den):
    """Exact division of integer polynomials with monic-up-to-sign divisor."""
    num = num[:]
    q = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(q) - 1, -1, -1):
        c = num[k + len(den) - 1]
        assert c % lead == 0
        q[k] = c // lead
        if q[k]:
            for j, y in enumerate(den):
                num[k + j] -= q[k] * y
    assert not any(num)
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(d: int) -> tuple[int, ...]:
    """Coefficients (constant first) of the d-th cyclotomic polynomial."""
    if d < 1:
        raise ValueError("order must be positive")
    num = [0] * d + [1]
    num[0] = -1  # x^d - 1
    for e in range(1, d):
        if d % e == 0:
            num = _int_poly_divexact(num, list(cyclotomic_polynomial(e)))
    return tuple(num)


# ---------------------------------------------------------------------------
# cyclotomic field Q[z]/Phi_d


class CyclotomicField:
    """Q(zeta_d), realized as Q[z] modulo the d-th cyclotomic polynomial.

    ``d = 1`` gives the rationals themselves (one-dimensional carrier).
    """

    _instances: dict[int, "CyclotomicField"] = {}

    def __new__(cls, d: int):
        if d in cls._instances:
            return cls._instances[d]
        self = super().__new__(cls)
        cls._instances[d] = self
        self.d = d
        self.minpoly = cyclotomic_polynomial(d)
        self.degree = len(self.minpoly) - 1
        # premultiplied reductions of z^k for k = degree .. 2*degree - 2
        self._reductions = []
        current = [Fraction(-c, self.minpoly[-1]) for c in self.minpoly[:-1]]
        self._reductions.append(tuple(current))
        for _ in range(self.degree - 2):
            shifted = [Fraction(0)] + current[:-1]
            top = current[-1]
            current = [s + top * r for s, r in zip(shifted, self._reductions[0])]
            self._reductions.append(tuple(current))
        self.zero = CycNum(self, (Fraction(0),) * self.degree)
        self.one = self.from_rational(1)
        return self

    def __reduce__(self):
        return (CyclotomicField, (self.d,))

    def from_rational(self, c) -> "CycNum":
        vec = [Fraction(0)] * self.degree
        vec[0] = Fraction(c)
        return CycNum(self, tuple(vec))

    def zeta_power(self, k: int) -> "CycNum":
        k %= self.d
        vec = [Fraction(0)] * max(self.degree, k + 1)
        vec[k] = Fraction(1)
        return CycNum(self, self._reduce(vec))

    def _reduce(self, vec) -> tuple[Fraction, ...]:
        n = self.degree
        if len(vec) <= n:
            return tuple(vec) + (Fraction(0),) * (n - len(vec))
        buf = list(vec)
        top = n + len(self._reductions) - 1
        for k in range(len(buf) - 1, n - 1, -1):
            c = buf[k]
            if c:
                buf[k] = 0
                if k <= top:
                    for i, r in enumerate(self._reductions[k - n]):
                        buf[i] += c * r
                else:
                    for i, r in enumerate(self._reductions[0]):
                        buf[k - n + i] += c * r
        return tuple(buf[:n])

    def __repr__(self):
        return f"Q(zeta_{self.d})"


class CycNum:
    """Element of a cyclotomic field; a vector of rationals mod Phi_d."""

    __slots__ = ("field", "vec")

    def __init__(self, field: CyclotomicField, vec):
        self.field = field
        self.vec = tuple(vec)

    def __add__(self, other):
        return CycNum(self.field, tuple(a + b for a, b in zip(self.vec, other.vec)))

    def __sub__(self, other):
        return CycNum(self.field, tuple(a - b for a, b in zip(self.vec, other.vec)))

    def __neg__(self):
        return CycNum(self.field, tuple(-a for a in self.vec))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return CycNum(self.field, tuple(a * c for a in self.vec))
        n = self.field.degree
        conv = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(self.vec):
            if a:
                for j, b in enumerate(other.vec):
                    if b:
                        conv[i + j] += a * b
        return CycNum(self.field, self.field._reduce(conv))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if not self:
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        # extended Euclid in Q[z] against the minimal polynomial
        a = [Fraction(c) for c in self.field.minpoly]
        b = list(self.vec)
        s_a, s_b = [Fraction(0)], [Fraction(1)]

        def deg(p):
            d = len(p) - 1
            while d >= 0 and p[d] == 0:
                d -= 1
            return d

        while True:
            db = deg(b)
            if db == 0:
                inv = 1 / b[0]
                return CycNum(self.field, self.field._reduce([c * inv for c in s_b]))
            da = deg(a)
            if da < db:
                a, b = b, a
                s_a, s_b = s_b, s_a
                continue
            # one division step: a -= (lead a / lead b) z^{da-db} * b
            f = a[da] / b[db]
            shift = da - db
            for j in range(db + 1):
                a[j + shift] -= f * b[j]
            grow = max(len(s_a), len(s_b) + shift)
            s_a = s_a + [Fraction(0)] * (grow - len(s_a))
            for j in range(len(s_b)):
                s_a[j + shift] -= f * s_b[j]

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * Fraction(1, 1) * Fraction(1) / Fraction(other) if False else self * (Fraction(1) / Fraction(other))
        return self * other.inverse()

    def __eq__(self, other):
        return isinstance(other, CycNum) and self.field is other.field and self.vec == other.vec

    def __hash__(self):
        return hash((self.field.d, self.vec))

    def __bool__(self):
        return any(self.vec)

    def rational_value(self) -> Fraction:
        if any(self.vec[1:]):
            raise ValueError("cyclotomic number is not rational")
        return self.vec[0]

    def as_int_pairs(self):
        return tuple((i, c) for i, c in enumerate(self.vec) if c)

    def __repr__(self):
        if self.field.degree == 1:
            return str(self.vec[0])
        parts = []
        for i, c in enumerate(self.vec):
            if c:
                parts.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        return "(" + " + ".join(parts) + ")" if parts else "0"


# ---------------------------------------------------------------------------
# multivariate polynomials over a cyclotomic field


def _grlex_key(exps):
    return (sum(exps), exps)


class MPoly:
    """Polynomial in ``nvars`` variables with cyclotomic coefficients.

    Exponents are nonnegative; terms are kept in a dict without zeros.
    """

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: CyclotomicField, nvars: int, terms: dict):
        self.field = field
        self.nvars = nvars
        self.terms = {e: c for e, c in terms.items() if c}

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zero(field, nvars):
        return MPoly(field, nvars, {})

    @staticmethod
    def one(field, nvars):
        return MPoly(field, nvars, {(0,) * nvars: field.one})

    @staticmethod
    def constant(field, nvars, c: "CycNum"):
        return MPoly(field, nvars, {(0,) * nvars: c})

    @staticmethod
    def monomial(field, nvars, exps, c=None):
        return MPoly(field, nvars, {tuple(exps): c if c is not None else field.one})

    # -- ring operations -----------------------------------------------------

    def __add__(self, other):
        d = dict(self.terms)
        for e, c in other.terms.items():
            if e in d:
                s = d[e] + c
                if s:
                    d[e] = s
                else:
                    del d[e]
            else:
                d[e] = c
        return MPoly(self.field, self.nvars, d)

    def __neg__(self):
        return MPoly(self.field, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return self.scale(other)
        d: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                if e in d:
                    s = d[e] + c
                    if s:
                        d[e] = s
                    else:
                        del d[e]
                elif c:
                    d[e] = c
        return MPoly(self.field, self.nvars, d)

    def scale(self, c):
        if isinstance(c, (int, Fraction)):
            c = self.field.from_rational(c)
        if not c:
            return MPoly.zero(self.field, self.nvars)
        return MPoly(self.field, self.nvars, {e: v * c for e, v in self.terms.items()})

    def shift(self, exps):
        """Multiply by the monomial with the given exponent tuple."""
        return MPoly(self.field, self.nvars,
                     {tuple(a + b for a, b in zip(e, exps)): c for e, c in self.terms.items()})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (
            isinstance(other, MPoly)
            and self.field is other.field
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field.d, self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- structure -----------------------------------------------------------

    def leading(self):
        """(exponent tuple, coefficient) of the graded-lex leading term."""
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def is_monomial(self):
        return len(self.terms) == 1

    def is_constant(self):
        return not self.terms or set(self.terms) == {(0,) * self.nvars}

    def constant_value(self):
        return self.terms.get((0,) * self.nvars, self.field.zero)

    def divide_exact(self, other: "MPoly"):
        """Quotient if ``other`` divides ``self`` exactly, else None."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return MPoly.zero(self.field, self.nvars)
        q: dict = {}
        rem = self
        lead_e, lead_c = other.leading()
        while not rem.is_zero():
            re, rc = rem.leading()
            diff = tuple(a - b for a, b in zip(re, lead_e))
            if any(x < 0 for x in diff):
                return None
            c = rc / lead_c
            q[diff] = c
            rem = rem - other.shift(diff).scale(c)
        return MPoly(self.field, self.nvars, q)

    def monic(self):
        if self.is_zero():
            return self
        _, c = self.leading()
        return self.scale(c.inverse())

    def eval_at_one(self) -> "CycNum":
        """Evaluate with every variable set to 1."""
        total = self.field.zero
        for c in self.terms.values():
            total = total + c
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(f"t{i+1}^{x}" for i, x in enumerate(e) if x)
            parts.append(f"{c!r}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# gcd via primitive pseudo-remainder sequences


def poly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """Monic gcd of multivariate polynomials over a cyclotomic field."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.nvars == 0:
        return MPoly.one(a.field, 0)
    g = _gcd_rec(a, b, a.nvars)
    return g.monic()


def _coeffs_in_last(p: MPoly, nvars: int) -> dict[int, MPoly]:
    out: dict[int, dict] = {}
    for e, c in p.terms.items():
        k = e[-1]
        out.setdefault(k, {})[e[:-1]] = c
    return {k: MPoly(p.field, nvars - 1, d) for k, d in out.items()}


def _from_coeffs(coeffs: dict[int, MPoly], field, nvars) -> MPoly:
    terms = {}
    for k, p in coeffs.items():
        for e, c in p.terms.items():
            terms[e + (k,)] = c
    return MPoly(field, nvars, terms)


def _gcd_rec(a: MPoly, b: MPoly, nvars: int) -> MPoly:
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if nvars == 1:
        # plain Euclid over the coefficient field
        f, g = a, b
        while not g.is_zero():
            f, g = g, _univar_rem(f, g)
        return f
    fa = _coeffs_in_last(a, nvars)
    fb = _coeffs_in_last(b, nvars)
    cont_a = _content(list(fa.values()), nvars - 1, a.field)
    cont_b = _content(list(fb.values()), nvars - 1, a.field)
    cont = _gcd_rec(cont_a, cont_b, nvars - 1)
    pa = {k: v.divide_exact(cont_a) for k, v in fa.items()}
    pb = {k: v.divide_exact(cont_b) for k, v in fb.items()}
    g = _primitive_prs(pa, pb, a.field, nvars)
    lifted_cont = MPoly(a.field, nvars, {e + (0,): c for e, c in cont.terms.items()})
    return _from_coeffs(g, a.field, nvars) * lifted_cont if isinstance(g, dict) else g * lifted_cont


def _content(polys: list[MPoly], nvars: int, field) -> MPoly:
    g = MPoly.zero(field, nvars)
    for p in polys:
        g = _gcd_rec(g, p, nvars) if not g.is_zero() else p
    return g.monic() if not g.is_zero() else MPoly.one(field, nvars)


def _univar_rem(f: MPoly, g: MPoly) -> MPoly:
    (dg,), cg = g.leading()
    rem = f
    while not rem.is_zero():
        (dr,), cr = rem.leading()
        if dr < dg:
            break
        rem = rem - g.shift((dr - dg,)).scale(cr / cg)
    return rem


def _univar_deg(coeffs: dict[int, MPoly]) -> int:
    return max((k for k, v in coeffs.items() if not v.is_zero()), default=-1)


def _primitive_prs(f: dict[int, MPoly], g: dict[int, MPoly], field, nvars) -> dict[int, MPoly]:
    """Primitive pseudo-remainder sequence in (K[x_1..x_{r-1}])[x_r]."""
    def strip(c):
        return {k: v for k, v in c.items() if not v.is_zero()}

    def primitive(c):
        cont = _content(list(c.values()), nvars - 1, field)
        return {k: v.divide_exact(cont) for k, v in c.items()}

    f, g = strip(f), strip(g)
    if _univar_deg(f) < _univar_deg(g):
        f, g = g, f
    while True:
        if not g:
            return f
        r = _pseudo_rem(f, g, field, nvars)
        r = strip(r)
        if not r:
            return g
        f, g = g, primitive(r)


def _pseudo_rem(f, g, field, nvars):
    df, dg = _univar_deg(f), _univar_deg(g)
    lc_g = g[dg]
    r = dict(f)
    while True:
        dr = _univar_deg(r)
        if dr < dg or dr < 0:
            return r
        lc_r = r[dr]
        new = {}
        for k, v in r.items():
            new[k] = v * lc_g
        for k, v in g.items():
            shifted = k + dr - dg
            term = v * lc_r
            new[shifted] = new.get(shifted, MPoly.zero(field, nvars - 1)) - term
        r = {k: v for k, v in new.items() if not v.is_zero()}


# ---------------------------------------------------------------------------
# canonical fractions


class FieldFraction:
    """Reduced fraction of multivariate polynomials over a cyclotomic field.

    Canonical form: gcd(num, den) = 1 and the denominator is monic under the
    graded-lex order (zero is stored as 0/1), so equality is structural.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly, reduce: bool = True):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if reduce:
            num, den = _reduced(num, den)
        self.num = num
        self.den = den

    @staticmethod
    def from_poly(p: MPoly) -> "FieldFraction":
        return FieldFraction(p, MPoly.one(p.field, p.nvars), reduce=False)._normalized()

    @staticmethod
    def zero(field, nvars) -> "FieldFraction":
        return FieldFraction(MPoly.zero(field, nvars), MPoly.one(field, nvars), reduce=False)

    @staticmethod
    def one(field, nvars) -> "FieldFraction":
        return FieldFraction.from_poly(MPoly.one(field, nvars))

    def _normalized(self):
        return self

    @property
    def field(self):
        return self.num.field

    @property
    def nvars(self):
        return self.num.nvars

    def __add__(self, other):
        if self.den == other.den:
            return FieldFraction(self.num + other.num, self.den)
        return FieldFraction(self.num * other.den + other.num * self.den,
                             self.den * other.den)

    def __neg__(self):
        return FieldFraction(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return FieldFraction(self.num.scale(other), self.den)
        return FieldFraction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero field element")
        return FieldFraction(self.num * other.den, self.den * other.num)

    def inverse(self):
        return FieldFraction.one(self.field, self.nvars) / self

    def __eq__(self, other):
        return (
            isinstance(other, FieldFraction)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.num.is_zero()

    def is_zero(self):
        return self.num.is_zero()

    def as_laurent(self):
        """As a Laurent polynomial: dict from integer exponent tuples to
        coefficients, or None if the reduced denominator is not a monomial."""
        if self.num.is_zero():
            return {}
        if not self.den.is_monomial():
            return None
        (de, dc), = self.den.terms.items()
        inv = dc.inverse()
        return {
            tuple(a - b for a, b in zip(e, de)): c * inv
            for e, c in self.num.terms.items()
        }

    def __repr__(self):
        if self.den == MPoly.one(self.field, self.nvars):
            return repr(self.num)
        return f"({self.num!r}) / ({self.den!r})"


def _reduced(num: MPoly, den: MPoly):
    if num.is_zero():
        return num, MPoly.one(num.field, num.nvars)
    g = poly_gcd(num, den)
    if not (g.is_monomial() and g.total_degree() == 0):
        num = num.divide_exact(g)
        den = den.divide_exact(g)
    _, lc = den.leading()
    inv = lc.inverse()
    return num.scale(inv), den.scale(inv)
