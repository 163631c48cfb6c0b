from fractions import Fraction

import pytest

from toeplitzq.algebra import Presentation, monomials_of_degree
from toeplitzq.axioms import CHECK_NAMES, check_model, verify_axioms
from toeplitzq.linalg import SparseMatrix
from toeplitzq.quantization import GramData, Model


class WrongAdjointModel(Model):
    """Forgets G^{-1} when forming adjoints, so A(k) stops being the adjoint of A*(k)."""

    def gram_inverse(self, D: int) -> SparseMatrix:
        return SparseMatrix.identity(len(self.basis(D)))


def manin_model(q, D):
    weights = {m: Fraction(1 + sum(m) + m[0]) for d in range(D + 1) for m in monomials_of_degree(2, d)}
    return Model(Presentation.manin_plane(q), GramData("explicit", weights=weights))


@pytest.mark.parametrize(
    "model",
    [Model.bargmann(1), Model.bargmann(1, hbar=Fraction(2, 3)), Model.q_bargmann(Fraction(1, 2)), manin_model(2, 6)],
    ids=["bargmann", "bargmann-hbar", "q-bargmann", "manin"],
)
def test_axioms_pass(model):
    report = verify_axioms(model, 6, trials=8, seed=1)
    assert [c.name for c in report.checks] == list(CHECK_NAMES)
    failed = [c.as_dict() for c in report.checks if not c.passed]
    assert report.passed, failed
    assert all(c.trials >= 1 for c in report.checks)


def test_broken_adjoint_is_caught():
    model = WrongAdjointModel(Presentation(("z",)), GramData("bargmann"))
    report = verify_axioms(model, 6, trials=5, seed=0)
    assert not report.passed
    bad = report.get("A(k) is the exact adjoint of untruncated A*(k)")
    assert not bad.passed and bad.witness


def test_check_model_reports_overlap_and_skips_axioms():
    pres = Presentation(
        ("x1", "x2", "x3"),
        {(1, 0): {(0, 1): 2}, (2, 1): {(1, 2): 1}, (2, 0): {(0, 2): 1, (1, 1): 1}},
    )
    model = Model(pres, GramData("explicit"))
    out = check_model(model, 4, trials=2)
    assert out["passed"] is False and out["axioms"] is None
    assert out["confluence"]["failures"][0]["word"] == "x3 x2 x1"


def test_reports_are_deterministic():
    a = check_model(Model.bargmann(2), 4, trials=3, seed=5)
    b = check_model(Model.bargmann(2), 4, trials=3, seed=5)
    assert a == b and a["passed"]


def test_trials_must_be_positive():
    with pytest.raises(ValueError):
        verify_axioms(Model.bargmann(1), 4, trials=0)
