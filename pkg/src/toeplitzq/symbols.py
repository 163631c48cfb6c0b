"""The symbol space A = P P*, spanned by formal products h k* of monomials.

A term ``(h, k)`` means ``h . k*``. The span of terms with ``k = 1`` is P and
the span of terms with ``h = 1`` is P*. There is no product on A; only the
left action of P and the product on the P* side are defined.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Mapping

from .algebra import Monomial, NcPoly, Presentation, monomial_key, monomial_word
from .scalar import ZERO, Number, Scalar

Term = tuple[Monomial, Monomial]


class SymbolError(ValueError):
    pass


class SymbolElem:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Term, Number] | None = None):
        clean = {}
        if terms:
            for (h, k), c in terms.items():
                c = Scalar.coerce(c)
                if c:
                    clean[(tuple(h), tuple(k))] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("SymbolElem is immutable")

    @classmethod
    def term(cls, h: Monomial, k: Monomial, c: Number = 1) -> "SymbolElem":
        return cls({(h, k): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, SymbolElem):
            return self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self.terms.items())))
        return self._hash

    def items(self) -> Iterator[tuple[Term, Scalar]]:
        for t in sorted(self.terms, key=lambda hk: (monomial_key(hk[0]), monomial_key(hk[1]))):
            yield t, self.terms[t]

    def __add__(self, other: "SymbolElem") -> "SymbolElem":
        out = dict(self.terms)
        for t, c in other.terms.items():
            out[t] = out.get(t, ZERO) + c
        return SymbolElem(out)

    def __neg__(self) -> "SymbolElem":
        return SymbolElem({t: -c for t, c in self.terms.items()})

    def __sub__(self, other: "SymbolElem") -> "SymbolElem":
        return self + (-other)

    def scale(self, c: Number) -> "SymbolElem":
        c = Scalar.coerce(c)
        return SymbolElem({t: c * v for t, v in self.terms.items()})

    def __rmul__(self, c: Number) -> "SymbolElem":
        if isinstance(c, (int, Fraction, Scalar)):
            return self.scale(c)
        return NotImplemented

    def bidegree(self) -> tuple[int, int]:
        """(max holomorphic degree, max antiholomorphic degree) over all terms."""
        return (
            max((sum(h) for h, _ in self.terms), default=0),
            max((sum(k) for _, k in self.terms), default=0),
        )

    def in_holo(self) -> bool:
        return all(not any(k) for _, k in self.terms)

    def in_antiholo(self) -> bool:
        return all(not any(h) for h, _ in self.terms)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*{h}.{k}*" for (h, k), c in self.items()) or "0"
        return f"SymbolElem({body})"


def embed(p: NcPoly) -> SymbolElem:
    """P -> A, phi |-> phi . 1*."""
    return SymbolElem({(m, (0,) * len(m)): c for m, c in p.terms.items()})


def embed_star(p: NcPoly) -> SymbolElem:
    """P -> P* inside A, phi |-> phi*."""
    return conjugate(embed(p))


def holo_part(g: SymbolElem) -> NcPoly:
    """Inverse of :func:`embed` on the P sub-span."""
    if not g.in_holo():
        raise SymbolError("symbol is not in P")
    return NcPoly({h: c for (h, _), c in g.terms.items()})


def star_part(g: SymbolElem) -> NcPoly:
    """The polynomial psi with g = psi*, for g in P*."""
    if not g.in_antiholo():
        raise SymbolError("symbol is not in P*")
    return NcPoly({k: c.conj() for (_, k), c in g.terms.items()})


def conjugate(g: SymbolElem) -> SymbolElem:
    return SymbolElem({(k, h): c.conj() for (h, k), c in g.terms.items()})


def left_act(phi: NcPoly, g: SymbolElem, pres: Presentation) -> SymbolElem:
    """phi . (h k*) = (phi h) k*."""
    acc: dict[Term, Scalar] = {}
    for (h, k), c in g.terms.items():
        prod = pres.multiply(phi, NcPoly.monomial(h, c))
        for m, v in prod.terms.items():
            t = (m, k)
            acc[t] = acc.get(t, ZERO) + v
    return SymbolElem(acc)


def star_multiply(p_star: SymbolElem, r_star: SymbolElem, pres: Presentation) -> SymbolElem:
    """Product on P*: k* . l* := (l k)*."""
    if not p_star.in_antiholo() or not r_star.in_antiholo():
        raise SymbolError("star_multiply is only defined on P*")
    k, l = star_part(p_star), star_part(r_star)
    return embed_star(pres.multiply(l, k))


def format_symbol(g: SymbolElem, pres: Presentation) -> str:
    if g.is_zero():
        return "0"
    out = []
    for (h, k), c in g.items():
        hs = pres.format_monomial(h) if any(h) else ""
        # (x_a ... x_b)* = x_b* ... x_a*
        ks = " ".join(f"{pres.names[i]}*" for i in reversed(monomial_word(k)))
        body = " ".join(s for s in (hs, ks) if s) or "1"
        if body == "1":
            out.append(f"({c})" if c.re and c.im else str(c))
        elif c == 1:
            out.append(body)
        elif c == -1:
            out.append("-" + body)
        else:
            out.append(f"({c}) {body}" if c.re and c.im else f"{c} {body}")
    return " + ".join(out).replace("+ -", "- ")
