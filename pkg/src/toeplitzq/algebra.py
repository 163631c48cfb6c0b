"""Noncommutative polynomials in ordered (PBW) normal form.

A monomial is a tuple of exponents ``(a_0, ..., a_{n-1})`` standing for the
ordered word ``x_0^a_0 ... x_{n-1}^a_{n-1}``. Generators are indexed from 0.
Multiplication concatenates words and straightens them with the quadratic
rules of a :class:`Presentation`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .scalar import ONE, ZERO, Number, Scalar

Monomial = tuple[int, ...]
Word = tuple[int, ...]


class PresentationError(ValueError):
    pass


def degree(m: Monomial) -> int:
    return sum(m)


def monomial_key(m: Monomial):
    """Degree first, then lexicographic with x_0 heaviest: 1, x0, x1, x0^2, x0x1, x1^2, ..."""
    return (sum(m), tuple(-e for e in m))


def monomial_word(m: Monomial) -> Word:
    return tuple(i for i, e in enumerate(m) for _ in range(e))


def word_monomial(w: Word, n: int) -> Monomial:
    """Exponent vector of an ordered word."""
    exps = [0] * n
    for g in w:
        exps[g] += 1
    return tuple(exps)


def is_ordered(w: Word) -> bool:
    return all(a <= b for a, b in zip(w, w[1:]))


def monomials_of_degree(n: int, d: int) -> list[Monomial]:
    """All exponent vectors of total degree d, in basis order."""
    if n == 0:
        return [()] if d == 0 else []
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            out.append((first,) + rest)
    return out


class NcPoly:
    """Finite linear combination of ordered monomials. Immutable.

    Zero coefficients are never stored, so equality is equality of term maps.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = Scalar.coerce(c)
                if c:
                    clean[tuple(m)] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("NcPoly is immutable")

    @classmethod
    def constant(cls, c: Number, n: int) -> "NcPoly":
        return cls({(0,) * n: c})

    @classmethod
    def monomial(cls, m: Monomial, c: Number = 1) -> "NcPoly":
        return cls({m: c})

    @classmethod
    def generator(cls, i: int, n: int) -> "NcPoly":
        exps = [0] * n
        exps[i] = 1
        return cls({tuple(exps): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        """Top degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(m) for m in self.terms), default=0)

    def items(self) -> Iterator[tuple[Monomial, Scalar]]:
        for m in sorted(self.terms, key=monomial_key):
            yield m, self.terms[m]

    def coeff(self, m: Monomial) -> Scalar:
        return self.terms.get(m, ZERO)

    def homogeneous_part(self, d: int) -> "NcPoly":
        return NcPoly({m: c for m, c in self.terms.items() if sum(m) == d})

    def truncate(self, d: int) -> "NcPoly":
        return NcPoly({m: c for m, c in self.terms.items() if sum(m) <= d})

    def __eq__(self, other) -> bool:
        if isinstance(other, NcPoly):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self.terms.items())))
        return self._hash

    def __add__(self, other: "NcPoly") -> "NcPoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, ZERO) + c
        return NcPoly(out)

    def __neg__(self) -> "NcPoly":
        return NcPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        return self + (-other)

    def scale(self, c: Number) -> "NcPoly":
        c = Scalar.coerce(c)
        return NcPoly({m: c * v for m, v in self.terms.items()})

    def __rmul__(self, c: Number) -> "NcPoly":
        if isinstance(c, (int, Fraction, Scalar)):
            return self.scale(c)
        return NotImplemented

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*{m}" for m, c in self.items()) or "0"
        return f"NcPoly({body})"


def _add_into(acc: dict, key, c: Scalar) -> None:
    v = acc.get(key)
    v = c if v is None else v + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


@dataclass(frozen=True)
class ConfluenceFailure:
    word: Word
    via_left: dict
    via_right: dict


class Presentation:
    """Quadratic straightening rules ``x_j x_i -> sum c * (ordered word, len <= 2)`` for j > i.

    Pairs without an explicit rule commute. Each right-hand word must be
    shorter than two letters or lexicographically smaller than ``(j, i)``,
    which makes rewriting terminate (degree-lex is an admissible word order).
    """

    def __init__(
        self,
        names: Iterable[str],
        rules: Mapping[tuple[int, int], Mapping[Word, Number]] | None = None,
        params: Mapping[str, object] | None = None,
    ):
        self.names = tuple(names)
        self.n = len(self.names)
        self.params = dict(params or {})
        self.rules: dict[tuple[int, int], dict[Word, Scalar]] = {}
        explicit = dict(rules or {})
        for (j, i), rhs in explicit.items():
            if not (0 <= i < j < self.n):
                raise PresentationError(f"rule x{j} x{i}: needs j > i within 0..{self.n - 1}")
            clean = {}
            for w, c in rhs.items():
                w = tuple(w)
                if len(w) > 2:
                    raise PresentationError(f"rule for {self.names[j]} {self.names[i]}: rule degree exceeds 2")
                if not is_ordered(w) or any(not (0 <= g < self.n) for g in w):
                    raise PresentationError(
                        f"rule for {self.names[j]} {self.names[i]}: right-hand side is not in ordered form"
                    )
                if len(w) == 2 and w >= (j, i):
                    raise PresentationError(
                        f"rule for {self.names[j]} {self.names[i]}: right-hand side does not decrease in degree-lex order"
                    )
                c = Scalar.coerce(c)
                if c:
                    clean[w] = c
            self.rules[(j, i)] = clean
        for j in range(self.n):
            for i in range(j):
                self.rules.setdefault((j, i), {(i, j): ONE})
        self.commutative = all(rhs == {(i, j): ONE} for (j, i), rhs in self.rules.items())
        self._mono_cache: dict[tuple[Monomial, Monomial], dict[Monomial, Scalar]] = {}

    @classmethod
    def commutative_on(cls, names: Iterable[str]) -> "Presentation":
        return cls(names)

    @classmethod
    def manin_plane(cls, q: Number, names=("x1", "x2")) -> "Presentation":
        """Two generators with x2 x1 = q x1 x2."""
        return cls(names, {(1, 0): {(0, 1): q}}, {"q": q})

    def __repr__(self) -> str:
        return f"Presentation({', '.join(self.names)})"

    # -- rewriting ---------------------------------------------------------

    def reduce_word(self, word: Word, leftmost: bool = True) -> dict[Word, Scalar]:
        """Rewrite a word to a combination of ordered words.

        ``leftmost`` picks which inversion is rewritten first; on a confluent
        presentation the result does not depend on it.
        """
        pending: dict[Word, Scalar] = {tuple(word): ONE}
        done: dict[Word, Scalar] = {}
        while pending:
            nxt: dict[Word, Scalar] = {}
            for w, c in pending.items():
                inversions = [p for p in range(len(w) - 1) if w[p] > w[p + 1]]
                if not inversions:
                    _add_into(done, w, c)
                    continue
                p = inversions[0] if leftmost else inversions[-1]
                head, tail = w[:p], w[p + 2 :]
                for rw, rc in self.rules[(w[p], w[p + 1])].items():
                    _add_into(nxt, head + rw + tail, c * rc)
            pending = nxt
        return done

    def normal_form(self, word: Iterable[int]) -> NcPoly:
        word = tuple(word)
        for g in word:
            if not 0 <= g < self.n:
                raise IndexError(f"generator index {g} out of range")
        if self.commutative:
            return NcPoly.monomial(word_monomial(word, self.n))
        return NcPoly({word_monomial(w, self.n): c for w, c in self.reduce_word(word).items()})

    def _mono_product(self, a: Monomial, b: Monomial) -> dict[Monomial, Scalar]:
        key = (a, b)
        hit = self._mono_cache.get(key)
        if hit is not None:
            return hit
        if self.commutative:
            out = {tuple(x + y for x, y in zip(a, b)): ONE}
        else:
            # a word that is already ordered needs no work
            wa, wb = monomial_word(a), monomial_word(b)
            if not wa or not wb or wa[-1] <= wb[0]:
                out = {tuple(x + y for x, y in zip(a, b)): ONE}
            else:
                out = {word_monomial(w, self.n): c for w, c in self.reduce_word(wa + wb).items()}
        self._mono_cache[key] = out
        return out

    def multiply(self, p: NcPoly, r: NcPoly) -> NcPoly:
        acc: dict[Monomial, Scalar] = {}
        for a, ca in p.terms.items():
            for b, cb in r.terms.items():
                c = ca * cb
                for m, cm in self._mono_product(a, b).items():
                    _add_into(acc, m, c * cm)
        return NcPoly(acc)

    def one(self) -> NcPoly:
        return NcPoly.constant(1, self.n)

    def gen(self, i: int) -> NcPoly:
        return NcPoly.generator(i, self.n)

    # -- display -----------------------------------------------------------

    def format_monomial(self, m: Monomial, sep: str = " ") -> str:
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return sep.join(parts) or "1"

    def format(self, p: NcPoly) -> str:
        if p.is_zero():
            return "0"
        out = []
        for m, c in p.items():
            mono = self.format_monomial(m)
            if mono == "1":
                out.append(f"({c})" if not c.is_real() and c.re else str(c))
            elif c == 1:
                out.append(mono)
            elif c == -1:
                out.append("-" + mono)
            else:
                out.append(f"({c}) {mono}" if not c.is_real() else f"{c} {mono}")
        return " + ".join(out).replace("+ -", "- ")


def normal_form(word: Iterable[int], pres: Presentation) -> NcPoly:
    return pres.normal_form(word)


def multiply(p: NcPoly, r: NcPoly, pres: Presentation) -> NcPoly:
    return pres.multiply(p, r)


def check_confluence(pres: Presentation, degree_bound: int = 3) -> list[ConfluenceFailure]:
    """Reduce every critical word two ways and report mismatches.

    Degree 3 covers the overlaps x_k x_j x_i (k > j > i), which by the diamond
    lemma decide confluence of a quadratic system; longer words up to
    ``degree_bound`` are swept as well, comparing leftmost-first against
    rightmost-first rewriting.
    """
    if degree_bound < 3:
        raise ValueError("degree_bound must be at least 3")
    failures = []
    seen = set()
    for k, j, i in itertools.combinations(range(pres.n - 1, -1, -1), 3):
        word = (k, j, i)
        seen.add(word)
        # first step fixed to each side of the overlap, then leftmost rewriting
        via_left: dict[Word, Scalar] = {}
        for w, c in pres.rules[(k, j)].items():
            for rw, rc in pres.reduce_word(w + (i,)).items():
                _add_into(via_left, rw, c * rc)
        via_right: dict[Word, Scalar] = {}
        for w, c in pres.rules[(j, i)].items():
            for rw, rc in pres.reduce_word((k,) + w).items():
                _add_into(via_right, rw, c * rc)
        if via_left != via_right:
            failures.append(ConfluenceFailure(word, via_left, via_right))
    for d in range(4, degree_bound + 1):
        for word in itertools.product(range(pres.n), repeat=d):
            inversions = sum(1 for a, b in zip(word, word[1:]) if a > b)
            if inversions < 2:
                continue
            left = pres.reduce_word(word, leftmost=True)
            right = pres.reduce_word(word, leftmost=False)
            if left != right:
                failures.append(ConfluenceFailure(word, left, right))
    return failures


def format_word(pres: Presentation, w: Word) -> str:
    return " ".join(pres.names[g] for g in w) or "1"


def format_word_combination(pres: Presentation, combo: Mapping[Word, Scalar]) -> str:
    """Render a combination of ordered words, as produced by ``reduce_word``."""
    return pres.format(NcPoly({word_monomial(w, pres.n): c for w, c in combo.items()}))
