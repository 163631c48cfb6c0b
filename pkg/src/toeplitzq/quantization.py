"""Truncated matrices of Toeplitz, creation and annihilation operators.

Everything acts on the span of basis monomials of degree <= D. A truncated
operator remembers how far it can raise degree and up to which input degree
its columns agree with the untruncated operator; equality checks are only
ever made inside that region.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .algebra import Monomial, NcPoly, Presentation, monomials_of_degree
from .linalg import SparseMatrix, add_into, axpy, inverse, is_hermitian, is_positive_definite
from .scalar import ONE, ZERO, Scalar
from .symbols import SymbolElem, SymbolError, embed, left_act, star_part

PRESETS = ("bargmann", "q-bargmann", "explicit")


class ModelError(ValueError):
    pass


def q_integer(n: int, q: Fraction) -> Fraction:
    """[n]_q = 1 + q + ... + q^(n-1)."""
    return sum((Fraction(q) ** j for j in range(n)), Fraction(0))


def q_factorial(n: int, q: Fraction) -> Fraction:
    out = Fraction(1)
    for j in range(1, n + 1):
        out *= q_integer(j, q)
    return out


@dataclass(frozen=True)
class GramData:
    """A graded inner product on P, block-diagonal by degree.

    ``weights`` gives diagonal entries per monomial (default 1); ``blocks``
    gives a full Hermitian block per degree, indexed in basis order.
    ``blocks`` wins where both are present. Presets compute weights from a
    formula.
    """

    kind: str = "bargmann"
    hbar: Fraction = Fraction(1)
    q: Fraction | None = None
    weights: Mapping[Monomial, Fraction] = field(default_factory=dict)
    blocks: Mapping[int, Sequence[Sequence[Scalar]]] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in PRESETS:
            raise ModelError(f"unknown gram preset {self.kind!r}")
        object.__setattr__(self, "hbar", Fraction(self.hbar))
        if self.hbar <= 0:
            raise ModelError("hbar must be positive")
        if self.kind == "q-bargmann":
            if self.q is None:
                raise ModelError("q-bargmann needs a value for q")
            object.__setattr__(self, "q", Fraction(self.q))
            if self.q <= -1:
                raise ModelError("q-bargmann weights need q > -1")
        for m, w in self.weights.items():
            if Fraction(w) <= 0:
                raise ModelError(f"non-positive weight {w} for monomial {m}")
        for d, block in self.blocks.items():
            if not is_hermitian(block):
                raise ModelError(f"gram block of degree {d} is not Hermitian")
            if not is_positive_definite(block):
                raise ModelError(f"gram block of degree {d} is not positive definite")

    def weight(self, m: Monomial) -> Fraction:
        d = sum(m)
        if self.kind == "bargmann":
            w = Fraction(1)
            for e in m:
                w *= factorial(e)
            return w * self.hbar**d
        if self.kind == "q-bargmann":
            return q_factorial(d, self.q) * self.hbar**d
        # monomials without explicit data are orthonormal
        return Fraction(self.weights.get(m, 1))

    def block(self, d: int, monos: Sequence[Monomial]) -> list[list[Scalar]]:
        if d in self.blocks:
            block = [[Scalar.coerce(x) for x in row] for row in self.blocks[d]]
            if len(block) != len(monos):
                raise ModelError(f"gram block of degree {d} must be {len(monos)}x{len(monos)}")
            return block
        n = len(monos)
        return [[Scalar(self.weight(monos[i])) if i == j else ZERO for j in range(n)] for i in range(n)]

    def with_hbar(self, hbar) -> "GramData":
        return GramData(self.kind, Fraction(hbar), self.q, self.weights, self.blocks)


class Model:
    """A presentation of P together with a graded inner product."""

    def __init__(self, pres: Presentation, gram: GramData):
        if gram.kind == "bargmann" and not pres.commutative:
            raise ModelError("the bargmann preset needs a commutative presentation")
        if gram.kind == "q-bargmann" and pres.n != 1:
            raise ModelError("the q-bargmann preset has exactly one generator")
        self.pres = pres
        self.gram = gram
        self._basis: dict[int, list[Monomial]] = {}
        self._blocks: dict[int, list[list[Scalar]]] = {}
        self._inv_blocks: dict[int, list[list[Scalar]]] = {}
        self._ops: dict = {}

    @classmethod
    def bargmann(cls, n: int = 1, hbar=1, names=None) -> "Model":
        names = names or (("z",) if n == 1 else tuple(f"z{i + 1}" for i in range(n)))
        return cls(Presentation(names), GramData("bargmann", Fraction(hbar)))

    @classmethod
    def q_bargmann(cls, q, hbar=1, name="z") -> "Model":
        return cls(Presentation((name,)), GramData("q-bargmann", Fraction(hbar), Fraction(q)))

    def with_hbar(self, hbar) -> "Model":
        return Model(self.pres, self.gram.with_hbar(hbar))

    @property
    def n(self) -> int:
        return self.pres.n

    def basis(self, D: int) -> list[Monomial]:
        if D < 0:
            raise ValueError("truncation degree must be >= 0")
        if D not in self._basis:
            out = []
            for d in range(D + 1):
                out.extend(monomials_of_degree(self.n, d))
            self._basis[D] = out
        return self._basis[D]

    def index(self, D: int) -> dict[Monomial, int]:
        key = ("index", D)
        if key not in self._ops:
            self._ops[key] = {m: i for i, m in enumerate(self.basis(D))}
        return self._ops[key]

    def count_upto(self, D: int, d: int) -> int:
        """Number of basis monomials of degree <= d (0 if d < 0)."""
        if d < 0:
            return 0
        return len(self.basis(min(d, D)))

    def gram_block(self, d: int) -> list[list[Scalar]]:
        if d not in self._blocks:
            self._blocks[d] = self.gram.block(d, monomials_of_degree(self.n, d))
        return self._blocks[d]

    def gram_inverse_block(self, d: int) -> list[list[Scalar]]:
        if d not in self._inv_blocks:
            self._inv_blocks[d] = inverse(self.gram_block(d))
        return self._inv_blocks[d]

    def _block_diagonal(self, D: int, inverse_blocks: bool) -> SparseMatrix:
        cols = []
        offset = 0
        for d in range(D + 1):
            block = self.gram_inverse_block(d) if inverse_blocks else self.gram_block(d)
            size = len(block)
            for j in range(size):
                cols.append({offset + i: block[i][j] for i in range(size) if block[i][j]})
            offset += size
        return SparseMatrix(offset, offset, cols)

    def gram_matrix(self, D: int) -> SparseMatrix:
        key = ("gram", D)
        if key not in self._ops:
            self._ops[key] = self._block_diagonal(D, False)
        return self._ops[key]

    def gram_inverse(self, D: int) -> SparseMatrix:
        key = ("gram_inv", D)
        if key not in self._ops:
            self._ops[key] = self._block_diagonal(D, True)
        return self._ops[key]

    # -- vectors <-> polynomials --------------------------------------------

    def to_vector(self, p: NcPoly, D: int) -> dict[int, Scalar]:
        idx = self.index(D)
        out = {}
        for m, c in p.terms.items():
            if sum(m) > D:
                raise ValueError(f"polynomial degree exceeds truncation {D}")
            out[idx[m]] = c
        return out

    def to_poly(self, v: Mapping[int, Scalar], D: int) -> NcPoly:
        basis = self.basis(D)
        return NcPoly({basis[i]: c for i, c in v.items()})


@dataclass(frozen=True)
class TruncatedOperator:
    """Exact matrix on basis(D).

    ``raise_deg`` bounds how much the operator raises degree;
    columns of degree <= ``valid_in_degree`` agree with the untruncated
    operator.
    """

    matrix: SparseMatrix
    D: int
    raise_deg: int
    valid_in_degree: int

    @classmethod
    def identity(cls, model: Model, D: int) -> "TruncatedOperator":
        return cls(SparseMatrix.identity(len(model.basis(D))), D, 0, D)

    @classmethod
    def zero(cls, model: Model, D: int) -> "TruncatedOperator":
        n = len(model.basis(D))
        return cls(SparseMatrix.zeros(n, n), D, 0, D)

    def __matmul__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        if self.D != other.D:
            raise ValueError("truncation mismatch")
        valid = min(other.valid_in_degree, self.valid_in_degree - other.raise_deg, self.D)
        return TruncatedOperator(self.matrix @ other.matrix, self.D, self.raise_deg + other.raise_deg, valid)

    def __add__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        return TruncatedOperator(
            self.matrix + other.matrix,
            self.D,
            max(self.raise_deg, other.raise_deg),
            min(self.valid_in_degree, other.valid_in_degree),
        )

    def __sub__(self, other: "TruncatedOperator") -> "TruncatedOperator":
        return self + other.scale(-ONE)

    def scale(self, c) -> "TruncatedOperator":
        return TruncatedOperator(self.matrix.scale(c), self.D, self.raise_deg, self.valid_in_degree)

    def n_valid(self, model: Model) -> int:
        return model.count_upto(self.D, self.valid_in_degree)

    def apply(self, p: NcPoly, model: Model) -> NcPoly:
        return model.to_poly(self.matrix.apply(model.to_vector(p, self.D)), self.D)

    def column(self, j: int) -> dict[int, Scalar]:
        return self.matrix.cols[j]

    def agrees_with(self, other: "TruncatedOperator", model: Model) -> tuple[bool, int | None]:
        """Column-wise equality on the common validity region.

        Returns (equal, first differing column or None).
        """
        limit = model.count_upto(self.D, min(self.valid_in_degree, other.valid_in_degree))
        for j in range(limit):
            if self.matrix.cols[j] != other.matrix.cols[j]:
                return False, j
        return True, None


def basis(D: int, pres: Presentation) -> list[Monomial]:
    out = []
    for d in range(D + 1):
        out.extend(monomials_of_degree(pres.n, d))
    return out


def _vector_pairing(model: Model, u: Mapping[int, Scalar], v: Mapping[int, Scalar], D: int) -> Scalar:
    """<u, v> = sum conj(u_a) G_ab v_b, conjugate-linear in u."""
    basis_D = model.basis(D)
    total = ZERO
    offsets = {}
    for a, cu in u.items():
        d = sum(basis_D[a])
        if d not in offsets:
            offsets[d] = model.count_upto(D, d - 1)
        start = offsets[d]
        block = model.gram_block(d)
        for b, cv in v.items():
            if sum(basis_D[b]) != d:
                continue
            g = block[a - start][b - start]
            if g:
                total = total + cu.conj() * g * cv
    return total


def inner_product(phi: NcPoly, psi: NcPoly, model: Model) -> Scalar:
    """Graded inner product on P, conjugate-linear in the first argument."""
    total = ZERO
    degrees = {sum(m) for m in phi.terms} & {sum(m) for m in psi.terms}
    for d in degrees:
        monos = monomials_of_degree(model.n, d)
        where = {m: i for i, m in enumerate(monos)}
        block = model.gram_block(d)
        for m, a in phi.terms.items():
            if sum(m) != d:
                continue
            row = block[where[m]]
            for k, b in psi.terms.items():
                if sum(k) == d:
                    g = row[where[k]]
                    if g:
                        total = total + a.conj() * g * b
    return total


def star_inner_product(psi1: SymbolElem, psi2: SymbolElem, model: Model) -> Scalar:
    """<psi1, psi2> on P* := <psi2*, psi1*> on P."""
    try:
        return inner_product(star_part(psi2), star_part(psi1), model)
    except SymbolError:
        raise SymbolError("star_inner_product takes elements of P*") from None


def _multiplication_columns(h: NcPoly, model: Model, D: int, D_out: int) -> list[dict[int, Scalar]]:
    """Columns of phi |-> phi h for phi in basis(D), kept up to degree D_out."""
    idx = model.index(D_out)
    pres = model.pres
    cols = []
    for m in model.basis(D):
        out: dict[int, Scalar] = {}
        for a, ca in h.terms.items():
            for prod, cp in pres._mono_product(m, a).items():
                if sum(prod) <= D_out:
                    add_into(out, idx[prod], ca * cp)
        cols.append(out)
    return cols


def creation_op(h: NcPoly, D: int, model: Model) -> TruncatedOperator:
    """A*(h) = T_h = M_h: phi |-> phi h, truncated above degree D."""
    key = ("create", h, D)
    op = model._ops.get(key)
    if op is None:
        n = len(model.basis(D))
        top = max(h.degree(), 0)
        cols = _multiplication_columns(h, model, D, D)
        op = TruncatedOperator(SparseMatrix(n, n, cols), D, top, D - top)
        model._ops[key] = op
    return op


def annihilation_op(k: NcPoly, D: int, model: Model) -> TruncatedOperator:
    """A(k) = T_{k*}, the Gram adjoint of A*(k).

    Solved block by block as G^{-1} C^dagger G, where C is A*(k) kept to
    rows of degree <= D. Gradedness makes every column exact.
    """
    key = ("annihilate", k, D)
    op = model._ops.get(key)
    if op is None:
        creation = creation_op(k, D, model).matrix
        adj = model.gram_inverse(D) @ creation.conj_transpose() @ model.gram_matrix(D)
        op = TruncatedOperator(adj, D, -k.min_degree() if k else 0, D)
        model._ops[key] = op
    return op


def _term_op(h: Monomial, k: Monomial, D: int, model: Model) -> TruncatedOperator:
    key = ("term", h, k, D)
    op = model._ops.get(key)
    if op is None:
        op = annihilation_op(NcPoly.monomial(k), D, model) @ creation_op(NcPoly.monomial(h), D, model)
        model._ops[key] = op
    return op


def toeplitz_op(g: SymbolElem, D: int, model: Model) -> TruncatedOperator:
    """T_g, built term by term in anti-Wick order: T_{h k*} = A(k) A*(h)."""
    hdeg, kdeg = g.bidegree()
    if hdeg > D or kdeg > D:
        raise ValueError(f"symbol bidegree ({hdeg}, {kdeg}) exceeds truncation {D}")
    if g.is_zero():
        return TruncatedOperator.zero(model, D)
    n = len(model.basis(D))
    cols: list[dict[int, Scalar]] = [{} for _ in range(n)]
    raise_deg, valid = None, D
    for (h, k), c in g.terms.items():
        op = _term_op(h, k, D, model)
        for j, col in enumerate(op.matrix.cols):
            if col:
                axpy(cols[j], c, col)
        raise_deg = op.raise_deg if raise_deg is None else max(raise_deg, op.raise_deg)
        valid = min(valid, op.valid_in_degree)
    return TruncatedOperator(SparseMatrix(n, n, cols), D, raise_deg, valid)


def multiplication_op(g: NcPoly, D: int, model: Model) -> TruncatedOperator:
    """M_g for g in P, read off from the left action phi . g on basis vectors."""
    n = len(model.basis(D))
    idx = model.index(D)
    g_sym = embed(g)
    cols = []
    for m in model.basis(D):
        image = left_act(NcPoly.monomial(m), g_sym, model.pres)
        col = {}
        for (h, _), c in image.terms.items():
            if sum(h) <= D:
                col[idx[h]] = c
        cols.append(col)
    top = max(g.degree(), 0)
    return TruncatedOperator(SparseMatrix(n, n, cols), D, top, D - top)


def projection(g: SymbolElem, D: int, model: Model) -> NcPoly:
    """P(g) := T_g(1)."""
    op = toeplitz_op(g, D, model)
    if op.valid_in_degree < 0:
        raise ValueError("truncation too small to project this symbol")
    return model.to_poly(op.column(0), D)


def kernel_witness_check(g: SymbolElem, D: int, model: Model) -> tuple[bool, bool]:
    """(T_g vanishes on its validity region, P(phi g) = 0 for every basis phi there)."""
    op = toeplitz_op(g, D, model)
    limit = op.n_valid(model)
    t_zero = all(not op.column(j) for j in range(limit))
    ran_in_ker = True
    for m in model.basis(D)[:limit]:
        if projection(left_act(NcPoly.monomial(m), g, model.pres), D, model):
            ran_in_ker = False
            break
    return t_zero, ran_in_ker


def pairing_table(op: TruncatedOperator, model: Model) -> dict[tuple[int, int], Scalar]:
    """Nonzero values <op e_a, e_b> for columns a inside the validity region."""
    D = op.D
    basis_D = model.basis(D)
    out = {}
    for a in range(op.n_valid(model)):
        u = op.column(a)
        degrees = {sum(basis_D[r]) for r in u}
        for d in degrees:
            start = model.count_upto(D, d - 1)
            for b in range(start, start + len(model.gram_block(d))):
                val = _vector_pairing(model, u, {b: ONE}, D)
                if val:
                    out[(a, b)] = val
    return out


def format_matrix(op: TruncatedOperator) -> list[list[str]]:
    return [[str(x) for x in row] for row in op.matrix.dense()]
