"""Randomized exact checks of the Toeplitz quantization identities."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .algebra import NcPoly, check_confluence, format_word, format_word_combination, monomials_of_degree
from .quantization import (
    Model,
    TruncatedOperator,
    annihilation_op,
    creation_op,
    inner_product,
    multiplication_op,
    pairing_table,
    projection,
    toeplitz_op,
)
from .scalar import Scalar
from .symbols import SymbolElem, conjugate, embed, embed_star, format_symbol, left_act, star_multiply


def random_scalar(rng: random.Random, complex_coeffs: bool = True) -> Scalar:
    while True:
        re = Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2, 3)))
        im = Fraction(rng.randint(-2, 2), rng.choice((1, 2))) if complex_coeffs and rng.random() < 0.4 else 0
        s = Scalar(re, im)
        if s:
            return s


def random_poly(rng: random.Random, n: int, max_degree: int, max_terms: int = 3) -> NcPoly:
    """Random nonzero polynomial of degree <= max_degree."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        d = rng.randint(0, max_degree)
        terms[rng.choice(monomials_of_degree(n, d))] = random_scalar(rng)
    p = NcPoly(terms)
    return p if p else NcPoly.constant(1, n)


def random_monomial_poly(rng: random.Random, n: int, max_degree: int) -> NcPoly:
    d = rng.randint(0, max_degree)
    return NcPoly.monomial(rng.choice(monomials_of_degree(n, d)), random_scalar(rng))


def random_symbol(rng: random.Random, n: int, max_holo: int, max_anti: int, max_terms: int = 3) -> SymbolElem:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        h = rng.choice(monomials_of_degree(n, rng.randint(0, max_holo)))
        k = rng.choice(monomials_of_degree(n, rng.randint(0, max_anti)))
        terms[(h, k)] = random_scalar(rng)
    return SymbolElem(terms)


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    trials: int = 0
    columns_checked: int = 0
    witness: str | None = None

    def fail(self, witness: str) -> None:
        if self.passed:
            self.passed = False
            self.witness = witness

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "trials": self.trials,
            "columns_checked": self.columns_checked,
            "witness": self.witness,
        }


@dataclass
class AxiomReport:
    D: int
    trials: int
    seed: int
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def get(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)

    def as_dict(self) -> dict:
        return {
            "truncation": self.D,
            "trials": self.trials,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.checks],
        }


CHECK_NAMES = (
    "T_1 = I",
    "A*(1) = A(1) = I",
    "T_g = M_g for g in P",
    "T_g T_psi = T_(psi g)",
    "adjoint pairing <T_g f1, f2> = <f1, T_(g*) f2>",
    "Gram adjoint of T_g equals T_(g*)",
    "A(k) is the exact adjoint of untruncated A*(k)",
    "anti-Wick T_(h g*) = T_(g*) T_h",
    "product reversal T_(g1...gn) = T_gn...T_g1",
    "star side T_(h1*...hm*) = T_hm*...T_h1*",
    "mixed T_((g1...gn)(h1*...hm*)) = T_hm*...T_h1* T_gn...T_g1",
    "P^2 = P and P = id on P",
)


def _compare(res: CheckResult, lhs: TruncatedOperator, rhs: TruncatedOperator, model: Model, label: str) -> None:
    ok, col = lhs.agrees_with(rhs, model)
    res.columns_checked += model.count_upto(lhs.D, min(lhs.valid_in_degree, rhs.valid_in_degree))
    if not ok:
        mono = model.pres.format_monomial(model.basis(lhs.D)[col])
        res.fail(f"{label}; columns differ at basis vector {mono}")


def _compose(ops: list[TruncatedOperator]) -> TruncatedOperator:
    return reduce(lambda a, b: a @ b, ops)


def _gram_adjoint(op: TruncatedOperator, model: Model) -> TruncatedOperator:
    D = op.D
    adj = model.gram_inverse(D) @ op.matrix.conj_transpose() @ model.gram_matrix(D)
    return TruncatedOperator(adj, D, -op.raise_deg, D)


def verify_axioms(model: Model, D: int, trials: int = 50, seed: int = 0) -> AxiomReport:
    """Check every identity on random inputs; failures come back as data.

    Input degrees are kept small relative to D so each composed word still
    has a nonempty validity region.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    pres, n = model.pres, model.n
    deg = max(1, min(2, D // 4))
    report = AxiomReport(D, trials, seed)
    res = {name: CheckResult(name) for name in CHECK_NAMES}
    report.checks = list(res.values())
    show = lambda g: format_symbol(g, pres)  # noqa: E731
    one = pres.one()
    identity = TruncatedOperator.identity(model, D)

    r = res["T_1 = I"]
    r.trials = 1
    _compare(r, toeplitz_op(embed(one), D, model), identity, model, "T_1")
    r = res["A*(1) = A(1) = I"]
    r.trials = 1
    _compare(r, creation_op(one, D, model), identity, model, "A*(1)")
    _compare(r, annihilation_op(one, D, model), identity, model, "A(1)")

    for _ in range(trials):
        psi = random_poly(rng, n, deg)
        r = res["T_g = M_g for g in P"]
        r.trials += 1
        _compare(r, toeplitz_op(embed(psi), D, model), multiplication_op(psi, D, model), model,
                 f"g = {pres.format(psi)}")

        g = random_symbol(rng, n, deg, deg)
        psi = random_poly(rng, n, deg)
        r = res["T_g T_psi = T_(psi g)"]
        r.trials += 1
        lhs = toeplitz_op(g, D, model) @ toeplitz_op(embed(psi), D, model)
        _compare(r, lhs, toeplitz_op(left_act(psi, g, pres), D, model), model,
                 f"g = {show(g)}, psi = {pres.format(psi)}")

        g = random_symbol(rng, n, deg, deg)
        tg, tgs = toeplitz_op(g, D, model), toeplitz_op(conjugate(g), D, model)
        r = res["adjoint pairing <T_g f1, f2> = <f1, T_(g*) f2>"]
        r.trials += 1
        left = pairing_table(tg, model)     # <T_g e_a, e_b>
        right = pairing_table(tgs, model)   # <T_g* e_b, e_a> = conj <e_a, T_g* e_b>
        na, nb = tg.n_valid(model), tgs.n_valid(model)
        r.columns_checked += na * nb
        for a in range(na):
            for b in range(nb):
                lv = left.get((a, b))
                rv = right.get((b, a))
                lv = lv if lv is not None else Scalar(0)
                rv = rv.conj() if rv is not None else Scalar(0)
                if lv != rv:
                    r.fail(f"g = {show(g)}, basis pair ({a}, {b}): {lv} != {rv}")
                    break

        r = res["Gram adjoint of T_g equals T_(g*)"]
        r.trials += 1
        # rows of the Gram adjoint are exact only where T_g's columns are
        adj = _gram_adjoint(tg, model)
        rows_ok = tg.n_valid(model)
        cols = tgs.n_valid(model)
        r.columns_checked += cols
        for j in range(cols):
            mine = {i: v for i, v in adj.matrix.cols[j].items() if i < rows_ok}
            theirs = {i: v for i, v in tgs.matrix.cols[j].items() if i < rows_ok}
            if mine != theirs:
                r.fail(f"g = {show(g)}, column {j}")
                break

        k = random_poly(rng, n, deg)
        r = res["A(k) is the exact adjoint of untruncated A*(k)"]
        r.trials += 1
        a_op = annihilation_op(k, D, model)
        basis_D = model.basis(D)
        r.columns_checked += len(basis_D)
        lhs_table = pairing_table(a_op, model)  # <A(k) e_a, e_b>
        rhs_table = {}  # <e_a, A*(k) e_b> with A*(k) e_b computed in full
        for b, m in enumerate(basis_D):
            image = pres.multiply(NcPoly.monomial(m), k)
            for d in {sum(x) for x in image.terms if sum(x) <= D}:
                start = model.count_upto(D, d - 1)
                for a in range(start, model.count_upto(D, d)):
                    val = inner_product(NcPoly.monomial(basis_D[a]), image, model)
                    if val:
                        rhs_table[(a, b)] = val
        if lhs_table != rhs_table:
            bad = min(key for key in lhs_table.keys() | rhs_table.keys() if lhs_table.get(key) != rhs_table.get(key))
            r.fail(f"k = {pres.format(k)}, basis pair {bad}")

        gp, hp = random_poly(rng, n, deg), random_poly(rng, n, deg)
        r = res["anti-Wick T_(h g*) = T_(g*) T_h"]
        r.trials += 1
        lhs = toeplitz_op(left_act(hp, embed_star(gp), pres), D, model)
        rhs = toeplitz_op(embed_star(gp), D, model) @ toeplitz_op(embed(hp), D, model)
        _compare(r, lhs, rhs, model, f"g = {pres.format(gp)}, h = {pres.format(hp)}")

        gs = [random_monomial_poly(rng, n, deg) for _ in range(rng.randint(1, 3))]
        r = res["product reversal T_(g1...gn) = T_gn...T_g1"]
        r.trials += 1
        prod = reduce(pres.multiply, gs)
        lhs = toeplitz_op(embed(prod), D, model)
        rhs = _compose([toeplitz_op(embed(x), D, model) for x in reversed(gs)])
        _compare(r, lhs, rhs, model, "g = " + ", ".join(pres.format(x) for x in gs))

        hs = [random_monomial_poly(rng, n, deg) for _ in range(rng.randint(1, 3))]
        r = res["star side T_(h1*...hm*) = T_hm*...T_h1*"]
        r.trials += 1
        star_prod = reduce(lambda a, b: star_multiply(a, b, pres), [embed_star(x) for x in hs])
        lhs = toeplitz_op(star_prod, D, model)
        rhs = _compose([toeplitz_op(embed_star(x), D, model) for x in reversed(hs)])
        _compare(r, lhs, rhs, model, "h = " + ", ".join(pres.format(x) for x in hs))

        r = res["mixed T_((g1...gn)(h1*...hm*)) = T_hm*...T_h1* T_gn...T_g1"]
        r.trials += 1
        lhs = toeplitz_op(left_act(prod, star_prod, pres), D, model)
        rhs = _compose(
            [toeplitz_op(embed_star(x), D, model) for x in reversed(hs)]
            + [toeplitz_op(embed(x), D, model) for x in reversed(gs)]
        )
        _compare(r, lhs, rhs, model, "g = " + ", ".join(pres.format(x) for x in gs)
                 + "; h = " + ", ".join(pres.format(x) for x in hs))

        g = random_symbol(rng, n, deg, deg)
        psi = random_poly(rng, n, deg)
        r = res["P^2 = P and P = id on P"]
        r.trials += 1
        pg = projection(g, D, model)
        if projection(embed(pg), D, model) != pg:
            r.fail(f"g = {show(g)}")
        if projection(embed(psi), D, model) != psi:
            r.fail(f"P(psi) != psi for psi = {pres.format(psi)}")
        r.columns_checked += 1
    return report


def check_model(model: Model, D: int, trials: int = 50, seed: int = 0, degree_bound: int = 3) -> dict:
    """Confluence guard plus the axiom suite, as one report."""
    failures = check_confluence(model.pres, degree_bound)

    overlaps = [
        {
            "word": format_word(model.pres, f.word),
            "via_left": format_word_combination(model.pres, f.via_left),
            "via_right": format_word_combination(model.pres, f.via_right),
        }
        for f in failures
    ]
    out = {"confluence": {"degree_bound": degree_bound, "passed": not failures, "failures": overlaps}}
    if failures:
        out["axioms"] = None
        out["passed"] = False
        return out
    report = verify_axioms(model, D, trials, seed)
    out["axioms"] = report.as_dict()
    out["passed"] = report.passed
    return out
