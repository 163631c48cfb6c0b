"""Relations among creation and annihilation operators.

Words in the free algebra use letters ``(i, starred)``: ``(i, False)`` is
G[z_i] and evaluates to A*(z_i), ``(i, True)`` is G[z_i*] and evaluates to
A(z_i). A word evaluates to the operator product in the same left-to-right
order. Relations are found as the kernel of that evaluation on all words up
to a length bound, confirmed at two truncations.
"""

from __future__ import annotations

import itertools
from math import isqrt
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .linalg import RowEchelon, add_into, nullspace, span_intersection
from .quantization import Model, TruncatedOperator, annihilation_op, creation_op
from .scalar import ZERO, Number, Scalar

Letter = tuple[int, bool]
FreeWord = tuple[Letter, ...]

MINUS = "−"
DOT = "·"
HBAR = "ℏ"


def word_key(w: FreeWord):
    """Degree, then letters compared with every G[z_i] below every G[z_j*]."""
    return (len(w), tuple((starred, i) for i, starred in w))


def all_letters(n: int) -> list[Letter]:
    return [(i, False) for i in range(n)] + [(i, True) for i in range(n)]


def words_upto(letters: Sequence[Letter], dmax: int) -> list[FreeWord]:
    out = []
    for d in range(dmax + 1):
        out.extend(itertools.product(letters, repeat=d))
    return sorted(out, key=word_key)


def format_letter(letter: Letter, names: Sequence[str]) -> str:
    i, starred = letter
    return f"G[{names[i]}{'*' if starred else ''}]"


def format_word(w: FreeWord, names: Sequence[str]) -> str:
    return DOT.join(format_letter(x, names) for x in w) or "1"


def _join_terms(pieces: list[tuple[bool, str]]) -> str:
    """pieces are (negative, magnitude text) in display order."""
    if not pieces:
        return "0"
    out = []
    for k, (neg, body) in enumerate(pieces):
        if k == 0:
            out.append(f"{MINUS}{body}" if neg else body)
        else:
            out.append(f" {MINUS} {body}" if neg else f" + {body}")
    return "".join(out)


def _coefficient_piece(c: Scalar, body: str | None) -> tuple[bool, str]:
    """Split a coefficient into sign and text; ``body`` None means the unit word."""
    if c.is_real():
        neg = c.re < 0
        mag = Scalar(abs(c.re))
        if body is None:
            return neg, str(mag)
        return neg, body if mag == 1 else f"{mag}{DOT}{body}"
    if body is None:
        return False, f"({c})"
    return False, f"({c}){DOT}{body}"


class FreeElem:
    """Element of the free algebra: finite map FreeWord -> Scalar."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[FreeWord, Number] | None = None):
        clean = {}
        for w, c in (terms or {}).items():
            c = Scalar.coerce(c)
            if c:
                clean[tuple(tuple(x) for x in w)] = c
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, FreeElem):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "FreeElem") -> "FreeElem":
        acc = dict(self.terms)
        for w, c in other.terms.items():
            add_into(acc, w, c)
        return type(self)(acc)

    def __neg__(self) -> "FreeElem":
        return type(self)({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "FreeElem") -> "FreeElem":
        return self + (-other)

    def scale(self, c: Number) -> "FreeElem":
        c = Scalar.coerce(c)
        return type(self)({w: c * v for w, v in self.terms.items()})

    @property
    def top_degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({len(w) for w in self.terms}) <= 1

    def ordered_terms(self) -> list[tuple[FreeWord, Scalar]]:
        return [(w, self.terms[w]) for w in sorted(self.terms, key=word_key, reverse=True)]

    def format(self, names: Sequence[str]) -> str:
        pieces = []
        for w, c in self.ordered_terms():
            pieces.append(_coefficient_piece(c, format_word(w, names) if w else None))
        return _join_terms(pieces)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.terms!r})"


class Relation(FreeElem):
    """A nonzero element of the relation ideal, with its homogeneous parts."""

    @property
    def parts(self) -> list[FreeElem]:
        return homogeneous_parts(self)


@dataclass(frozen=True)
class ClassicalRelation:
    relation: FreeElem
    in_ideal: bool | None  # None when no span was supplied to test against


def homogeneous_parts(R: FreeElem) -> list[FreeElem]:
    """[R_0, ..., R_n] with R_j the degree-j part and R_n != 0."""
    if R.is_zero():
        raise ValueError("the zero relation has no homogeneous decomposition")
    n = R.top_degree
    return [FreeElem({w: c for w, c in R.terms.items() if len(w) == j}) for j in range(n + 1)]


def in_span(x: FreeElem, span: Iterable[FreeElem]) -> bool:
    ech = RowEchelon(order=word_key)
    for r in span:
        ech.add(r.terms)
    return ech.contains(x.terms)


def classical_relation(R: FreeElem, span: Iterable[FreeElem] | None = None) -> ClassicalRelation:
    """Top-degree part of R, flagged by whether it lies in the given relation span.

    A homogeneous R is its own classical relation and is flagged True.
    """
    top = homogeneous_parts(R)[-1]
    if R.is_homogeneous():
        return ClassicalRelation(top, True)
    if span is None:
        return ClassicalRelation(top, None)
    return ClassicalRelation(top, in_span(top, span))


# -- evaluation -------------------------------------------------------------


def letter_op(letter: Letter, D: int, model: Model) -> TruncatedOperator:
    i, starred = letter
    g = model.pres.gen(i)
    return annihilation_op(g, D, model) if starred else creation_op(g, D, model)


def pi_eval(w: FreeWord, D: int, model: Model, dmax: int | None = None) -> TruncatedOperator:
    """The operator of a word: G_a G_b ... -> T_a T_b ..."""
    if dmax is not None and len(w) > dmax:
        raise ValueError(f"word of degree {len(w)} exceeds dmax = {dmax}")
    key = ("word", tuple(w), D)
    op = model._ops.get(key)
    if op is not None:
        return op
    if not w:
        op = TruncatedOperator.identity(model, D)
    else:
        op = letter_op(w[-1], D, model)
        for letter in reversed(w[:-1]):
            op = letter_op(letter, D, model) @ op
    model._ops[key] = op
    return op


def pi_eval_elem(R: FreeElem, D: int, model: Model) -> TruncatedOperator:
    op = TruncatedOperator.zero(model, D)
    for w, c in R.terms.items():
        op = op + pi_eval(w, D, model).scale(c)
    return op


def vanishes(R: FreeElem, D: int, model: Model) -> bool:
    """True if R evaluates to zero on every column inside its validity region."""
    op = pi_eval_elem(R, D, model)
    return all(not op.column(j) for j in range(op.n_valid(model)))


def _unit_model(model: Model) -> Model:
    if model.gram.kind != "explicit" and model.gram.hbar != 1:
        return model.with_hbar(1)
    return model


def _evaluation_rows(words: Sequence[FreeWord], D: int, dmax: int, model: Model) -> list[dict[int, Scalar]]:
    """One row per matrix entry (row i, column j) with column degree <= D - dmax."""
    ncols = model.count_upto(D, D - dmax)
    rows: dict[tuple[int, int], dict[int, Scalar]] = {}
    for k, w in enumerate(words):
        op = pi_eval(w, D, model)
        if op.valid_in_degree < D - dmax:
            raise AssertionError(f"word {w} is not exact on degree <= {D - dmax}")
        for j in range(ncols):
            for i, v in op.column(j).items():
                rows.setdefault((i, j), {})[k] = v
    return list(rows.values())


@dataclass
class RelationSearch:
    """Result of a relation search together with its certification data."""

    words: list[FreeWord]
    dmax: int
    truncations: tuple[int, int]
    nullity: tuple[int, int]
    relations: list[Relation] = field(default_factory=list)

    @property
    def certificate(self) -> str:
        a, b = self.truncations
        return f"relations certified at truncation ({a}, {b})"


def search_relations(model: Model, dmax: int, D: int, letters: Sequence[Letter] | None = None) -> RelationSearch:
    """Kernel of word evaluation on words of degree <= dmax.

    The kernel is computed at truncations D and D + 2 and intersected; the
    basis is reduced row-echelon in descending word order with leading
    coefficient 1.
    """
    if dmax < 1:
        raise ValueError("dmax must be >= 1")
    if D < 2 * dmax:
        raise ValueError(f"truncation D = {D} must be at least 2*dmax = {2 * dmax}")
    model = _unit_model(model)
    letters = list(letters) if letters is not None else all_letters(model.n)
    words = words_upto(letters, dmax)
    first = nullspace(_evaluation_rows(words, D, dmax, model), len(words))
    confirmed = span_intersection(first, _evaluation_rows(words, D + 2, dmax, model))
    ech = RowEchelon(order=lambda k: word_key(words[k]))
    for v in confirmed:
        ech.add(v)
    relations = [Relation({words[k]: c for k, c in row.items()}) for row in ech.basis()]
    return RelationSearch(words, dmax, (D, D + 2), (len(first), len(confirmed)), relations)


def find_relations(model: Model, dmax: int, D: int, letters: Sequence[Letter] | None = None) -> list[Relation]:
    return search_relations(model, dmax, D, letters).relations


# -- hbar deformation -------------------------------------------------------


class DeformedRelation:
    """Map FreeWord -> {power of s: Scalar}, where s is a formal square root of hbar.

    Negative powers are allowed so the inverse-power normalization can be
    represented too.
    """

    def __init__(self, terms: Mapping[FreeWord, Mapping[int, Number]]):
        clean = {}
        for w, poly in terms.items():
            p = {k: Scalar.coerce(c) for k, c in poly.items() if Scalar.coerce(c)}
            if p:
                clean[tuple(w)] = p
        self.terms = clean

    def __eq__(self, other) -> bool:
        if isinstance(other, DeformedRelation):
            return self.terms == other.terms
        return NotImplemented

    def shift(self, k: int) -> "DeformedRelation":
        """Multiply by s^k."""
        return DeformedRelation({w: {e + k: c for e, c in p.items()} for w, p in self.terms.items()})

    def specialize(self, s: Number) -> FreeElem:
        s = Scalar.coerce(s)
        out = {}
        for w, p in self.terms.items():
            total = ZERO
            for e, c in p.items():
                total = total + c * (s**e)
            out[w] = total
        return FreeElem(out)

    def specialize_hbar(self, hbar: Number) -> FreeElem:
        """Evaluate at a given hbar; odd powers of s need hbar to be a rational square."""
        h = Fraction(hbar)
        powers = {e for p in self.terms.values() for e in p}
        if all(e % 2 == 0 for e in powers):
            out = {}
            for w, p in self.terms.items():
                total = ZERO
                for e, c in p.items():
                    total = total + c * Scalar(h ** (e // 2))
                out[w] = total
            return FreeElem(out)
        num, den = _rational_sqrt(h.numerator), _rational_sqrt(h.denominator)
        if num is None or den is None:
            raise ValueError(f"hbar = {h} is not a rational square; odd powers of hbar^(1/2) do not specialize")
        return self.specialize(Scalar(Fraction(num, den)))

    def format(self, names: Sequence[str]) -> str:
        pieces = []
        for w in sorted(self.terms, key=word_key, reverse=True):
            for e, c in sorted(self.terms[w].items()):
                factor = _hbar_power(e)
                body = format_word(w, names) if w else None
                if factor and body:
                    body = f"{factor}{DOT}{body}"
                elif factor:
                    body = factor
                pieces.append(_coefficient_piece(c, body))
        return _join_terms(pieces)


def _rational_sqrt(n: int) -> int | None:
    if n < 0:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def _hbar_power(e: int) -> str:
    if e == 0:
        return ""
    if e % 2 == 0:
        m = e // 2
        return HBAR if m == 1 else f"{HBAR}^{m}"
    return f"{HBAR}^({e}/2)"


def hbar_deform(R: FreeElem) -> DeformedRelation:
    """sum_j s^(n-j) R_j: each part weighted by hbar^((n-j)/2), n the top degree."""
    parts = homogeneous_parts(R)
    n = len(parts) - 1
    terms = {}
    for j, part in enumerate(parts):
        for w, c in part.terms.items():
            terms[w] = {n - j: c}
    return DeformedRelation(terms)


def hbar_deform_inverse(R: FreeElem) -> DeformedRelation:
    """The equivalent normalization sum_j s^(-j) R_j (defined for hbar != 0)."""
    terms = {}
    for j, part in enumerate(homogeneous_parts(R)):
        for w, c in part.terms.items():
            terms[w] = {-j: c}
    return DeformedRelation(terms)


# -- dequantized algebra ----------------------------------------------------


@dataclass
class DequantizedAlgebra:
    letters: list[Letter]
    relations: list[FreeElem]
    dimensions: list[int]

    def format_relations(self, names: Sequence[str]) -> list[str]:
        return [r.format(names) for r in self.relations]


def _ideal_slices(generators: Sequence[FreeElem], letters: Sequence[Letter], bound: int) -> list[int]:
    """dim I_d for d = 0..bound, I the two-sided ideal of homogeneous generators."""
    by_degree: dict[int, list[FreeElem]] = {}
    for g in generators:
        by_degree.setdefault(g.top_degree, []).append(g)
    dims = []
    prev: list[dict] = []
    for d in range(bound + 1):
        ech = RowEchelon(order=word_key)
        for g in by_degree.get(d, []):
            ech.add(g.terms)
        for v in prev:
            for x in letters:
                ech.add({(x,) + w: c for w, c in v.items()})
                ech.add({w + (x,): c for w, c in v.items()})
        dims.append(len(ech))
        prev = list(ech.rows.values())
    return dims


def dequantize(relations: Iterable[FreeElem], letters: Sequence[Letter], bound: int = 10) -> DequantizedAlgebra:
    """Presentation of F / R_cl and its graded dimensions up to ``bound``.

    R_cl is generated by the classical (top-degree) parts of the given
    relations; generators are deduplicated to a reduced echelon basis.
    """
    letters = list(letters)
    ech = RowEchelon(order=word_key)
    for R in relations:
        if R:
            ech.add(classical_relation(R).relation.terms)
    # rows only ever combine with rows of the same degree, so they stay homogeneous
    homogeneous = [FreeElem(row) for row in ech.basis()]
    ideal = _ideal_slices(homogeneous, letters, bound)
    L = len(letters)
    dims = [L**d - ideal[d] for d in range(bound + 1)]
    return DequantizedAlgebra(letters, homogeneous, dims)
