from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toeplitzq.algebra import Presentation
from toeplitzq.modelfile import (
    ModelConfig,
    ModelParseError,
    SymbolParseError,
    bundled_model_text,
    bundled_models,
    parse_model,
    parse_symbol,
    render_model,
)
from toeplitzq.scalar import I, Scalar
from toeplitzq.symbols import SymbolElem, format_symbol


def diagnostics(text, **kw):
    with pytest.raises(ModelParseError) as info:
        parse_model(text, **kw)
    return [(d.line, d.col, d.message) for d in info.value.diagnostics]


def test_bundled_models_present():
    assert bundled_models() == ["bargmann1.tq", "bargmann2.tq", "inconsistent3.tq", "qbargmann.tq"]


def test_bargmann1():
    config = parse_model(bundled_model_text("bargmann1.tq"))
    assert config.generators == ("z",)
    assert config.preset == "bargmann"
    assert config.hbar == 1
    assert (config.degree, config.dmax, config.bound) == (8, 2, 10)


@pytest.mark.parametrize("name", ["bargmann1.tq", "bargmann2.tq", "qbargmann.tq", "inconsistent3.tq"])
def test_render_roundtrip(name):
    config = parse_model(bundled_model_text(name), check_confluence_=False)
    assert parse_model(render_model(config), check_confluence_=False) == config


def test_rule_expressions():
    text = """
[algebra]
generators = a, b, c
rule: b a = q a b - (1/2 + 3/4 i) c + 2 hbar^2   # trailing comment
rule: c b = -i b c
[params]
q = 3/2
hbar = 1/2
[gram]
preset = explicit
"""
    config = parse_model(text, check_confluence_=False)
    rules = config.rule_coefficients()
    assert rules[(1, 0)] == {(0, 1): Fraction(3, 2), (2,): -Scalar(Fraction(1, 2), Fraction(3, 4)), (): Fraction(1, 2)}
    assert rules[(2, 1)] == {(1, 2): -I}
    pres = config.presentation()
    assert isinstance(pres, Presentation) and not pres.commutative


def test_unbound_parameter():
    text = "[algebra]\ngenerators = z1, z2\nrule: z2 z1 = q z1 z2\n"
    assert diagnostics(text) == [(3, 15, "unbound parameter q")]


def test_rule_degree():
    text = "[algebra]\ngenerators = z1, z2\nrule: z2 z1 = z1 z2 z2\n"
    assert diagnostics(text) == [(3, 15, "rule degree exceeds 2")]


def test_many_diagnostics_at_once():
    text = """[algebra]
generators = x, y
rule: y w = x y
rule: y x = x ^
[gram]
preset = explicit
weight: x = -1
[params]
hbar = 0
[truncation]
degree = many
[bogus]
"""
    got = diagnostics(text)
    messages = [m for _, _, m in got]
    assert "unknown generator w in rule" in messages
    assert "expected an integer exponent after '^'" in messages
    assert "non-positive weight -1" in messages
    assert "hbar must be positive" in messages
    assert "degree must be an integer" in messages
    assert "unknown section [bogus]" in messages
    assert [line for line, _, _ in got] == sorted(line for line, _, _ in got)


@pytest.mark.parametrize(
    "body, message",
    [
        ("rule: x y = x y", "out-of-order pair"),
        ("rule: y x = y x", "not in ordered form"),
        ("rule: y x = y y", "smaller than its left side"),
        ("rule: y x = x y\nrule: y x = x y", "duplicate rule"),
        ("rule: y x = x $ y", "unexpected character '$'"),
        ("rule: y x = x y*", "starred letters are not allowed"),
        ("rule: y x = (1 + x)", "only numbers and i"),
        ("rule: y x = (1 + 2", "unbalanced parenthesis"),
        ("rule: y x =", "expected an expression"),
        ("rule: y x = 1/0 x y", "zero denominator"),
    ],
)
def test_rule_errors(body, message):
    text = f"[algebra]\ngenerators = x, y\n{body}\n"
    assert any(message in m for _, _, m in diagnostics(text))


def test_structure_errors():
    assert any("outside of any section" in m for _, _, m in diagnostics("generators = x\n"))
    assert any("missing 'generators" in m for _, _, m in diagnostics("[gram]\npreset = bargmann\n"))
    assert any("unknown gram preset" in m for _, _, m in diagnostics("[algebra]\ngenerators = x\n[gram]\npreset = fock\n"))
    assert any("dmax must be >= 1" in m for _, _, m in diagnostics("[algebra]\ngenerators = x\n[ccr]\ndmax = 0\n"))
    assert any("duplicate key" in m for _, _, m in diagnostics("[algebra]\ngenerators = x\n[ccr]\ndmax = 1\ndmax = 2\n"))
    assert any("both a generator and a parameter" in m for _, _, m in diagnostics("[algebra]\ngenerators = q\n[params]\nq = 1\n"))


def test_model_level_errors_become_diagnostics():
    manin = "[algebra]\ngenerators = x, y\nrule: y x = 2 x y\n[gram]\npreset = bargmann\n"
    assert any("commutative presentation" in m for _, _, m in diagnostics(manin))
    qb = "[algebra]\ngenerators = z\n[params]\nq = -2\n[gram]\npreset = q-bargmann\n"
    assert any("q > -1" in m for _, _, m in diagnostics(qb))
    block = "[algebra]\ngenerators = x, y\n[gram]\npreset = explicit\nblock 1 = 1, 2 ; 2, 1\n"
    assert any("not positive definite" in m for _, _, m in diagnostics(block))


def test_confluence_is_checked_unless_disabled():
    text = bundled_model_text("inconsistent3.tq")
    got = diagnostics(text)
    assert len(got) == 1 and got[0][2] == "confluence failure on overlap x3 x2 x1"
    assert got[0][0] == 5  # the x3 x2 rule line
    assert parse_model(text, check_confluence_=False).generators == ("x1", "x2", "x3")


def test_explicit_gram_data():
    text = """[algebra]
generators = x, y
[gram]
preset = explicit
weight: x = 2
weight: y = 3
weight: x y = 1/2
block 1 = 2, i ; -i, 2
"""
    config = parse_model(text)
    assert config.weights == {(1, 0): 2, (0, 1): 3, (1, 1): Fraction(1, 2)}
    model = config.build_model()
    assert model.gram_block(1) == [[Scalar(2), I], [-I, Scalar(2)]]


@settings(max_examples=40)
@given(
    st.fractions(min_value=-4, max_value=4, max_denominator=5),
    st.integers(1, 12),
)
def test_render_roundtrip_generated(coeff, degree):
    config = parse_model(f"[algebra]\ngenerators = x, y\nrule: y x = {coeff} x y\n[gram]\npreset = explicit\n[truncation]\ndegree = {degree}\n")
    assert parse_model(render_model(config)) == config


# -- symbols ----------------------------------------------------------------

B2 = parse_model(bundled_model_text("bargmann2.tq"))


def test_parse_symbol_examples():
    assert parse_symbol("z1 z1*", B2) == SymbolElem.term((1, 0), (1, 0))
    assert parse_symbol("2 z2 z1 - i", B2) == SymbolElem.term((1, 1), (0, 0), 2) + SymbolElem.term((0, 0), (0, 0), -I)
    assert parse_symbol("z1^2 z2* z1*", B2) == SymbolElem.term((2, 0), (1, 1))


def test_parse_symbol_star_product_order():
    manin = parse_model("[algebra]\ngenerators = x1, x2\nrule: x2 x1 = i x1 x2\n[gram]\npreset = explicit\n")
    # x1* x2* = (x2 x1)* = (i x1 x2)* = -i (x1 x2)*
    assert parse_symbol("x1* x2*", manin) == SymbolElem.term((0, 0), (1, 1), -I)
    assert parse_symbol("x2* x1*", manin) == SymbolElem.term((0, 0), (1, 1))


def test_parse_symbol_rejects_wrong_order():
    with pytest.raises(SymbolParseError, match="undefined in this realization"):
        parse_symbol("z1* z1", B2)
    with pytest.raises(SymbolParseError, match="unknown generator"):
        parse_symbol("w*", B2)
    with pytest.raises(SymbolParseError, match="unbound parameter"):
        parse_symbol("t z1", B2)


def test_format_parse_symbol_roundtrip():
    pres = B2.presentation()
    for text in ["z1 z2^2 z1* z2*", "-(1/2 - 3/4i) z2 z1 + i", "1/3", "z2* z1* + z1"]:
        g = parse_symbol(text, B2)
        assert parse_symbol(format_symbol(g, pres), B2) == g


def test_empty_config_defaults():
    config = ModelConfig(("z",))
    assert config.build_model().gram.kind == "bargmann"
