"""Free-group words, endomorphisms, and free differential calculus.

Letters are nonzero integers: ``+k`` is the k-th generator (1-based) and
``-k`` its inverse.  For genus-g surface alphabets the 2g generators pair up
as ``x_i = 2i-1`` and ``y_i = 2i``; the text syntax accepts ``x1 y1 ... `` or
``z1 ... z2g`` with uppercase meaning inversion and ``[u,v]`` for commutators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .abelian import FgAbelianGroup, GroupElement, identity_matrix
from .groupring import GroupRingElem


def _reduce_letters(letters) -> tuple[int, ...]:
    out: list[int] = []
    for a in letters:
        if a == 0:
            raise ValueError("letter 0 is not allowed")
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


@dataclass(frozen=True)
class FreeWord:
    """Freely reduced word over a fixed alphabet of ``n`` generators."""

    n: int
    letters: tuple[int, ...]

    def __post_init__(self):
        reduced = _reduce_letters(self.letters)
        for a in reduced:
            if abs(a) > self.n:
                raise ValueError(f"letter {a} outside alphabet of size {self.n}")
        object.__setattr__(self, "letters", reduced)

    @staticmethod
    def identity(n: int) -> "FreeWord":
        return FreeWord(n, ())

    @staticmethod
    def gen(n: int, k: int) -> "FreeWord":
        return FreeWord(n, (k,))

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        if self.n != other.n:
            raise ValueError("alphabet mismatch")
        return FreeWord(self.n, self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(self.n, tuple(-a for a in reversed(self.letters)))

    def __pow__(self, k: int) -> "FreeWord":
        if k < 0:
            return self.inverse() ** (-k)
        w = FreeWord.identity(self.n)
        for _ in range(k):
            w = w * self
        return w

    def conjugate(self, by: "FreeWord") -> "FreeWord":
        return by * self * by.inverse()

    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self):
        return len(self.letters)

    def exponent_sums(self) -> tuple[int, ...]:
        sums = [0] * self.n
        for a in self.letters:
            sums[abs(a) - 1] += 1 if a > 0 else -1
        return tuple(sums)

    def cyclic_reduction(self) -> "FreeWord":
        ls = list(self.letters)
        while len(ls) >= 2 and ls[0] == -ls[-1]:
            ls = ls[1:-1]
        return FreeWord(self.n, tuple(ls))

    def is_conjugate_to(self, other: "FreeWord") -> bool:
        a = self.cyclic_reduction().letters
        b = other.cyclic_reduction().letters
        if len(a) != len(b):
            return False
        if not a:
            return True
        doubled = b + b
        return any(doubled[i: i + len(a)] == a for i in range(len(b)))

    def __str__(self):
        return word_to_text(self)


def commutator(u: FreeWord, v: FreeWord) -> FreeWord:
    return u * v * u.inverse() * v.inverse()


# ---------------------------------------------------------------------------
# text syntax


def _letter_name(index: int, n: int) -> str:
    if n % 2 == 0:
        i = (index + 1) // 2
        return (f"x{i}" if index % 2 == 1 else f"y{index // 2}")
    return f"z{index}"


def word_to_text(w: FreeWord) -> str:
    if not w.letters:
        return "e"
    parts = []
    for a in w.letters:
        name = _letter_name(abs(a), w.n)
        parts.append(name.upper() if a < 0 else name)
    return " ".join(parts)


def parse_word(text: str, n: int) -> FreeWord:
    """Parse the shared word syntax: ``x1 Y2 [x1,y1]^2 z3 ...``."""
    tokens = _tokenize(text)
    word, rest = _parse_sequence(tokens, 0, n)
    if rest != len(tokens):
        raise ValueError(f"unexpected token {tokens[rest]!r} in word {text!r}")
    return word


def _tokenize(text: str) -> list[str]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "[],":
            tokens.append(c)
            i += 1
        elif c == "^":
            j = i + 1
            if j < len(text) and text[j] == "-":
                j += 1
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(text[i:j])
            i = j
        elif c.isalpha():
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(text[i:j])
            i = j
        else:
            raise ValueError(f"bad character {c!r} in word")
    return tokens


def _parse_sequence(tokens, pos, n):
    word = FreeWord.identity(n)
    while pos < len(tokens) and tokens[pos] not in (",", "]"):
        atom, pos = _parse_atom(tokens, pos, n)
        word = word * atom
    return word, pos


def _parse_atom(tokens, pos, n):
    tok = tokens[pos]
    if tok == "[":
        u, pos = _parse_sequence(tokens, pos + 1, n)
        if pos >= len(tokens) or tokens[pos] != ",":
            raise ValueError("expected ',' in commutator")
        v, pos = _parse_sequence(tokens, pos + 1, n)
        if pos >= len(tokens) or tokens[pos] != "]":
            raise ValueError("expected ']' closing commutator")
        atom = commutator(u, v)
        pos += 1
    else:
        atom = _parse_letter(tok, n)
        pos += 1
    if pos < len(tokens) and tokens[pos].startswith("^"):
        atom = atom ** int(tokens[pos][1:])
        pos += 1
    return atom, pos


def _parse_letter(tok: str, n: int) -> FreeWord:
    name = tok
    inverse = name[0].isupper()
    name = name.lower()
    kind, num = name[0], name[1:]
    if not num.isdigit():
        if name == "e":
            return FreeWord.identity(n)
        raise ValueError(f"bad letter {tok!r}")
    i = int(num)
    if kind == "x":
        index = 2 * i - 1
    elif kind == "y":
        index = 2 * i
    elif kind == "z":
        index = i
    else:
        raise ValueError(f"bad letter {tok!r}")
    if not 1 <= index <= n:
        raise ValueError(f"letter {tok!r} outside alphabet of size {n}")
    return FreeWord(n, (-index,) if inverse else (index,))


# ---------------------------------------------------------------------------
# word ring and Fox calculus


@dataclass(frozen=True)
class WordRingElem:
    """Finite integer combination of free words."""

    n: int
    terms: tuple[tuple[FreeWord, int], ...]

    @staticmethod
    def from_dict(n: int, d: dict[FreeWord, int]) -> "WordRingElem":
        items = tuple(sorted(
            ((w, c) for w, c in d.items() if c != 0),
            key=lambda t: (len(t[0].letters), t[0].letters),
        ))
        return WordRingElem(n, items)

    @staticmethod
    def zero(n: int) -> "WordRingElem":
        return WordRingElem(n, ())

    @staticmethod
    def from_word(w: FreeWord, c: int = 1) -> "WordRingElem":
        return WordRingElem.from_dict(w.n, {w: c})

    def as_dict(self) -> dict[FreeWord, int]:
        return dict(self.terms)

    def __add__(self, other: "WordRingElem") -> "WordRingElem":
        d = self.as_dict()
        for w, c in other.terms:
            d[w] = d.get(w, 0) + c
        return WordRingElem.from_dict(self.n, d)

    def __neg__(self) -> "WordRingElem":
        return WordRingElem(self.n, tuple((w, -c) for w, c in self.terms))

    def __sub__(self, other: "WordRingElem") -> "WordRingElem":
        return self + (-other)

    def __mul__(self, other: "WordRingElem") -> "WordRingElem":
        d: dict[FreeWord, int] = {}
        for w1, c1 in self.terms:
            for w2, c2 in other.terms:
                w = w1 * w2
                d[w] = d.get(w, 0) + c1 * c2
        return WordRingElem.from_dict(self.n, d)

    def left_mul_word(self, w: FreeWord) -> "WordRingElem":
        return WordRingElem.from_dict(self.n, {w * u: c for u, c in self.terms})

    def bar(self) -> "WordRingElem":
        """Anti-homomorphism induced by inversion."""
        return WordRingElem.from_dict(self.n, {u.inverse(): c for u, c in self.terms})

    def is_zero(self) -> bool:
        return not self.terms


def fox_derivative(w: FreeWord, i: int) -> WordRingElem:
    """Free derivative with respect to the i-th generator (1-based).

    Satisfies d(uv) = du + u dv, d(z_i) = 1, d(z_i^-1) = -z_i^-1.
    """
    if not 1 <= i <= w.n:
        raise IndexError(f"generator index {i} out of range")
    acc: dict[FreeWord, int] = {}
    prefix = FreeWord.identity(w.n)
    for a in w.letters:
        if a == i:
            acc[prefix] = acc.get(prefix, 0) + 1
        elif a == -i:
            u = prefix * FreeWord(w.n, (-i,))
            acc[u] = acc.get(u, 0) - 1
        prefix = prefix * FreeWord(w.n, (a,))
    return WordRingElem.from_dict(w.n, acc)


@dataclass(frozen=True)
class GeneratorMap:
    """Map from free-group generators to elements of an abelian group."""

    group: FgAbelianGroup
    images: tuple[GroupElement, ...]

    def word_image(self, w: FreeWord) -> GroupElement:
        out = self.group.zero()
        for a in w.letters:
            img = self.images[abs(a) - 1]
            out = out + (img if a > 0 else -img)
        return out


def abelianization_map(n: int) -> GeneratorMap:
    free = FgAbelianGroup(n)
    return GeneratorMap(free, tuple(free.generator(k) for k in range(n)))


def project_word(w: FreeWord, q: GeneratorMap) -> GroupElement:
    return q.word_image(w)


def project_fox(d: WordRingElem, q: GeneratorMap) -> GroupRingElem:
    """Linear extension of word -> image group element."""
    acc: dict[GroupElement, Fraction] = {}
    for w, c in d.terms:
        g = q.word_image(w)
        acc[g] = acc.get(g, 0) + c
    return GroupRingElem.from_dict(q.group, acc)


# ---------------------------------------------------------------------------
# Magnus expansion


@dataclass(frozen=True)
class MagnusSeries:
    """Truncated series in n noncommuting symbols, degree <= c."""

    n: int
    degree: int
    coeffs: tuple[tuple[tuple[int, ...], int], ...]

    @staticmethod
    def from_dict(n: int, c: int, d: dict[tuple[int, ...], int]) -> "MagnusSeries":
        items = tuple(sorted(
            ((m, v) for m, v in d.items() if v != 0 and len(m) <= c),
        ))
        return MagnusSeries(n, c, items)

    @staticmethod
    def one(n: int, c: int) -> "MagnusSeries":
        return MagnusSeries.from_dict(n, c, {(): 1})

    def as_dict(self):
        return dict(self.coeffs)

    def __mul__(self, other: "MagnusSeries") -> "MagnusSeries":
        c = min(self.degree, other.degree)
        d: dict[tuple[int, ...], int] = {}
        for m1, v1 in self.coeffs:
            for m2, v2 in other.coeffs:
                if len(m1) + len(m2) <= c:
                    m = m1 + m2
                    d[m] = d.get(m, 0) + v1 * v2
        return MagnusSeries.from_dict(self.n, c, d)

    def is_one(self) -> bool:
        return self.coeffs == (((), 1),)

    def homogeneous_part(self, k: int) -> dict[tuple[int, ...], int]:
        return {m: v for m, v in self.coeffs if len(m) == k}


def _letter_series(a: int, n: int, c: int) -> MagnusSeries:
    i = abs(a)
    d: dict[tuple[int, ...], int] = {(): 1}
    if a > 0:
        d[(i,)] = 1
    else:
        sign = -1
        for k in range(1, c + 1):
            d[(i,) * k] = sign
            sign = -sign
    return MagnusSeries.from_dict(n, c, d)


def magnus_expansion(w: FreeWord, c: int) -> MagnusSeries:
    """Substitute z_i -> 1 + X_i (inverses expanded geometrically), truncated."""
    if c < 1:
        raise ValueError("truncation degree must be >= 1")
    out = MagnusSeries.one(w.n, c)
    for a in w.letters:
        out = out * _letter_series(a, w.n, c)
    return out


def lcs_member(w: FreeWord, c: int) -> bool:
    """True iff ``w`` lies in the (c+1)-st lower-central-series term."""
    if c < 1:
        raise ValueError("class must be >= 1")
    return magnus_expansion(w, c).is_one()


def relative_derived_member(w: FreeWord, q: GeneratorMap) -> bool:
    """True iff all Fox derivatives of ``w`` vanish after projection by ``q``.

    This characterizes membership in the derived subgroup of the kernel
    of the induced map onto the abelian group.
    """
    return all(project_fox(fox_derivative(w, i + 1), q).is_zero() for i in range(w.n))


# ---------------------------------------------------------------------------
# endomorphisms, Magnus representation, winding-class homomorphism


@dataclass(frozen=True)
class FreeEndo:
    """Endomorphism of the free group, one image word per generator."""

    n: int
    images: tuple[FreeWord, ...]

    def __post_init__(self):
        if len(self.images) != self.n:
            raise ValueError("need one image per generator")
        for w in self.images:
            if w.n != self.n:
                raise ValueError("image alphabet mismatch")

    @staticmethod
    def identity(n: int) -> "FreeEndo":
        return FreeEndo(n, tuple(FreeWord.gen(n, k + 1) for k in range(n)))

    @staticmethod
    def from_images(images: dict[int, FreeWord], n: int) -> "FreeEndo":
        imgs = [images.get(k + 1, FreeWord.gen(n, k + 1)) for k in range(n)]
        return FreeEndo(n, tuple(imgs))

    def apply(self, w: FreeWord) -> FreeWord:
        out = FreeWord.identity(self.n)
        for a in w.letters:
            img = self.images[abs(a) - 1]
            out = out * (img if a > 0 else img.inverse())
        return out

    def apply_ring(self, d: WordRingElem) -> WordRingElem:
        acc = WordRingElem.zero(self.n)
        for w, c in d.terms:
            acc = acc + WordRingElem.from_word(self.apply(w), c)
        return acc

    def compose(self, other: "FreeEndo") -> "FreeEndo":
        """self after other."""
        return FreeEndo(self.n, tuple(self.apply(w) for w in other.images))

    def inverse_on(self, words: list[FreeWord]) -> bool:  # pragma: no cover
        raise NotImplementedError

    def abelianized_matrix(self) -> list[list[int]]:
        """Column j = exponent sums of the image of generator j."""
        cols = [w.exponent_sums() for w in self.images]
        return [[cols[j][i] for j in range(self.n)] for i in range(self.n)]

    def is_homologically_trivial(self) -> bool:
        return self.abelianized_matrix() == identity_matrix(self.n)


def surface_boundary_word(g: int) -> FreeWord:
    """Product of the commutators [x_i, y_i] over the 2g-letter alphabet."""
    n = 2 * g
    w = FreeWord.identity(n)
    for i in range(g):
        w = w * commutator(FreeWord.gen(n, 2 * i + 1), FreeWord.gen(n, 2 * i + 2))
    return w


def is_torelli(f: FreeEndo, boundary_word: FreeWord) -> bool:
    """Identity on homology, and the boundary word is preserved up to conjugacy."""
    if f.n % 2 != 0:
        raise ValueError("surface alphabet must have even size")
    if not f.is_homologically_trivial():
        return False
    return f.apply(boundary_word).is_conjugate_to(boundary_word)


def magnus_representation(f: FreeEndo, q: GeneratorMap | None = None):
    """Matrix of bar-involuted, abelianized Fox derivatives of ``f``.

    Entry (i, j) is the image of d f(z_j) / d z_i under the bar involution
    followed by the abelianization.  Requires ``f`` to act trivially on
    homology; the augmentation of the matrix is then the identity.
    """
    if not f.is_homologically_trivial():
        raise ValueError("endomorphism is not homologically trivial")
    if q is None:
        q = abelianization_map(f.n)
    mat = []
    for i in range(1, f.n + 1):
        row = []
        for j in range(1, f.n + 1):
            d = fox_derivative(f.images[j - 1], i)
            row.append(project_fox(d.bar(), q))
        mat.append(row)
    return mat


def chillingworth(f: FreeEndo) -> GroupElement:
    """Winding-obstruction class of a homologically trivial endomorphism.

    Returned as an element of the rank-2g free abelianization, computed as
    the class of sum_i (abelianized d f(z_i)/d z_i  - 1) in I/I^2.
    """
    if not f.is_homologically_trivial():
        raise ValueError("endomorphism is not homologically trivial")
    q = abelianization_map(f.n)
    total = [0] * f.n
    for i in range(1, f.n + 1):
        d = project_fox(fox_derivative(f.images[i - 1], i), q)
        # class of (d - aug(d)) in I/I^2 = sum of coeff * coordinates
        for g, c in d.items():
            coords = g.coordinates()
            for k in range(f.n):
                total[k] += int(c) * coords[k]
    return q.group.from_vector(total)
