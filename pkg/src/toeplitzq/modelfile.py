"""Reader and writer for ``.tq`` model files.

A model file is line oriented::

    # comments start with '#'
    [algebra]
    generators = x1, x2
    rule: x2 x1 = q x1 x2
    [params]
    q = 2
    hbar = 1
    [gram]
    preset = explicit              # bargmann | q-bargmann | explicit
    weight: x1 x2 = 3/2            # diagonal entry for one monomial
    block 1 = 2, i ; -i, 2         # full Hermitian block for a degree
    [truncation]
    degree = 8
    [ccr]
    dmax = 2
    bound = 10

Parsing never stops at the first problem: every issue found is reported
as a :class:`Diagnostic` with a 1-based line and column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterator

from .algebra import Presentation, PresentationError, check_confluence, format_word, is_ordered, word_monomial
from .quantization import GramData, Model, ModelError, PRESETS
from .scalar import I, ONE, Scalar, parse_scalar
from .symbols import SymbolElem, embed_star, left_act

SECTIONS = ("algebra", "params", "gram", "truncation", "ccr")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(
    r"""(?P<ws>\s+)
    |(?P<num>[0-9]+(?:/[0-9]+)?)
    |(?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    |(?P<op>[-+()^*])""",
    re.VERBOSE,
)


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.message}"


class ModelParseError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


@dataclass(frozen=True)
class RuleTerm:
    """coefficient * (product of named parameters) * ordered word."""

    coeff: Scalar
    params: tuple[str, ...]
    word: tuple[int, ...]


@dataclass(frozen=True)
class Rule:
    lhs: tuple[int, int]
    rhs: tuple[RuleTerm, ...]


@dataclass
class ModelConfig:
    generators: tuple[str, ...]
    rules: tuple[Rule, ...] = ()
    params: dict[str, Fraction] = field(default_factory=dict)
    preset: str = "bargmann"
    weights: dict[tuple[int, ...], Fraction] = field(default_factory=dict)
    blocks: dict[int, list[list[Scalar]]] = field(default_factory=dict)
    degree: int = 8
    dmax: int = 2
    bound: int = 10

    @property
    def hbar(self) -> Fraction:
        return self.params.get("hbar", Fraction(1))

    def rule_coefficients(self) -> dict[tuple[int, int], dict[tuple[int, ...], Scalar]]:
        out = {}
        for rule in self.rules:
            rhs: dict[tuple[int, ...], Scalar] = {}
            for t in rule.rhs:
                c = t.coeff
                for p in t.params:
                    c = c * Scalar(self.params[p])
                rhs[t.word] = rhs.get(t.word, Scalar(0)) + c
            out[rule.lhs] = rhs
        return out

    def presentation(self) -> Presentation:
        return Presentation(self.generators, self.rule_coefficients(), self.params)

    def gram(self) -> GramData:
        q = self.params.get("q") if self.preset == "q-bargmann" else None
        return GramData(self.preset, self.hbar, q, dict(self.weights), dict(self.blocks))

    def build_model(self) -> Model:
        return Model(self.presentation(), self.gram())


# -- lexing helpers ----------------------------------------------------------


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    col: int  # 1-based


def _tokenize(text: str, col0: int, line: int, diags: list[Diagnostic]) -> list[_Tok] | None:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            diags.append(Diagnostic(line, col0 + pos, f"unexpected character {text[pos]!r}"))
            return None
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, m.group(), col0 + pos))
        pos = m.end()
    return toks


@dataclass
class _Factor:
    """A parsed product: scalar coefficient, parameter names, letters (gen, starred)."""

    coeff: Scalar
    params: list[str]
    letters: list[tuple[int, bool, int]]  # (generator, starred, column)
    param_cols: list[int] = field(default_factory=list)


def _parse_sum(
    toks: list[_Tok],
    line: int,
    gens: dict[str, int],
    allow_star: bool,
    diags: list[Diagnostic],
    end_col: int,
) -> list[_Factor] | None:
    """sum := ['+'|'-'] product (('+'|'-') product)* ; product := factor+."""
    terms: list[_Factor] = []
    pos = 0
    ok = True

    def err(col: int, msg: str) -> None:
        nonlocal ok
        ok = False
        diags.append(Diagnostic(line, col, msg))

    if not toks:
        err(end_col, "expected an expression")
        return None
    while pos < len(toks):
        sign = ONE
        while pos < len(toks) and toks[pos].kind == "op" and toks[pos].text in "+-":
            if toks[pos].text == "-":
                sign = -sign
            pos += 1
        term = _Factor(sign, [], [])
        start = pos
        while pos < len(toks) and not (toks[pos].kind == "op" and toks[pos].text in "+-"):
            t = toks[pos]
            if t.kind == "num":
                try:
                    term.coeff = term.coeff * Scalar(Fraction(t.text))
                except ZeroDivisionError:
                    err(t.col, f"zero denominator in {t.text}")
                pos += 1
            elif t.kind == "op" and t.text == "(":
                depth, j = 0, pos
                while j < len(toks):
                    if toks[j].text == "(":
                        depth += 1
                    elif toks[j].text == ")":
                        depth -= 1
                        if depth == 0:
                            break
                    j += 1
                if j >= len(toks):
                    err(t.col, "unbalanced parenthesis")
                    return None
                inner = _parse_sum(toks[pos + 1 : j], line, gens, False, diags, toks[j].col)
                if inner is None:
                    return None
                if any(f.letters for f in inner) or any(f.params for f in inner):
                    err(t.col, "only numbers and i may appear inside parentheses")
                else:
                    total = Scalar(0)
                    for f in inner:
                        total = total + f.coeff
                    term.coeff = term.coeff * total
                pos = j + 1
            elif t.kind == "ident":
                pos += 1
                power = 1
                if pos < len(toks) and toks[pos].text == "^":
                    if pos + 1 < len(toks) and toks[pos + 1].kind == "num" and "/" not in toks[pos + 1].text:
                        power = int(toks[pos + 1].text)
                        pos += 2
                    else:
                        err(toks[pos].col, "expected an integer exponent after '^'")
                        return None
                starred = False
                if pos < len(toks) and toks[pos].text == "*":
                    if not allow_star:
                        err(toks[pos].col, "starred letters are not allowed here")
                        return None
                    starred = True
                    pos += 1
                if t.text in gens:
                    term.letters.extend([(gens[t.text], starred, t.col)] * power)
                elif starred:
                    err(t.col, f"unknown generator {t.text}")
                elif t.text == "i":
                    term.coeff = term.coeff * (I**power)
                else:
                    # parameters are central, so their position in the product is irrelevant
                    term.params.extend([t.text] * power)
                    term.param_cols.extend([t.col] * power)
            else:
                err(t.col, f"unexpected {t.text!r}")
                return None
        if pos == start:
            err(toks[pos - 1].col if pos else end_col, "expected a term")
            return None
        terms.append(term)
    return terms if ok else None


def _check_params(term: _Factor, params: dict, line: int, diags: list[Diagnostic]) -> None:
    for name, col in zip(term.params, term.param_cols):
        if name not in params:
            diags.append(Diagnostic(line, col, f"unbound parameter {name}"))


# -- model parsing ----------------------------------------------------------


def _lines(text: str) -> Iterator[tuple[int, int, str]]:
    """(line number, column of first char, content without comment) for nonblank lines."""
    for k, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        stripped = body.lstrip()
        if stripped:
            yield k, len(body) - len(stripped) + 1, stripped


def _parse_int(value: str, line: int, col: int, key: str, diags: list[Diagnostic], minimum: int = 0) -> int | None:
    try:
        v = int(value)
    except ValueError:
        diags.append(Diagnostic(line, col, f"{key} must be an integer"))
        return None
    if v < minimum:
        diags.append(Diagnostic(line, col, f"{key} must be >= {minimum}"))
        return None
    return v


def parse_model(text: str, check_confluence_: bool = True) -> ModelConfig:
    """Parse and validate a model file; raise ModelParseError with every diagnostic found."""
    diags: list[Diagnostic] = []
    section = None
    generators: list[str] = []
    gen_line = None
    raw_rules: list[tuple[int, int, str]] = []
    raw_weights: list[tuple[int, int, str]] = []
    raw_blocks: list[tuple[int, int, str]] = []
    params: dict[str, Fraction] = {}
    param_lines: dict[str, int] = {}
    rule_lines: dict[tuple[int, int], int] = {}
    settings: dict[str, tuple[int, int, str]] = {}
    seen_keys: set[tuple[str, str]] = set()

    for line, col, body in _lines(text):
        if body.startswith("["):
            if not body.endswith("]"):
                diags.append(Diagnostic(line, col, "malformed section header"))
                continue
            name = body[1:-1].strip()
            if name not in SECTIONS:
                diags.append(Diagnostic(line, col, f"unknown section [{name}]"))
                section = "?"
            else:
                section = name
            continue
        if section is None:
            diags.append(Diagnostic(line, col, "line outside of any section"))
            continue
        if section == "?":
            continue
        if section == "algebra" and body.startswith("rule:"):
            raw_rules.append((line, col + 5, body[5:]))
            continue
        if section == "gram" and body.startswith("weight:"):
            raw_weights.append((line, col + 7, body[7:]))
            continue
        if section == "gram" and body.startswith("block"):
            raw_blocks.append((line, col + 5, body[5:]))
            continue
        if "=" not in body:
            diags.append(Diagnostic(line, col, "expected 'key = value'"))
            continue
        key, value = body.split("=", 1)
        key = key.strip()
        vcol = col + len(body.split("=", 1)[0]) + 1 + (len(value) - len(value.lstrip()))
        value = value.strip()
        if (section, key) in seen_keys:
            diags.append(Diagnostic(line, col, f"duplicate key {key} in [{section}]"))
            continue
        seen_keys.add((section, key))
        if section == "algebra":
            if key != "generators":
                diags.append(Diagnostic(line, col, f"unknown key {key} in [algebra]"))
                continue
            gen_line = line
            names = [g.strip() for g in value.split(",")]
            for g in names:
                if not _IDENT.fullmatch(g) or g == "i":
                    diags.append(Diagnostic(line, vcol, f"bad generator name {g!r}"))
            if len(set(names)) != len(names):
                diags.append(Diagnostic(line, vcol, "duplicate generator name"))
            generators = names
        elif section == "params":
            if not _IDENT.fullmatch(key) or key == "i":
                diags.append(Diagnostic(line, col, f"bad parameter name {key!r}"))
                continue
            param_lines[key] = line
            try:
                params[key] = Fraction(value.replace(" ", ""))
            except (ValueError, ZeroDivisionError):
                diags.append(Diagnostic(line, vcol, f"parameter {key} must be a rational a/b"))
        elif section == "gram":
            if key != "preset":
                diags.append(Diagnostic(line, col, f"unknown key {key} in [gram]"))
            elif value not in PRESETS:
                diags.append(Diagnostic(line, vcol, f"unknown gram preset {value!r}"))
            else:
                settings["preset"] = (line, vcol, value)
        elif section == "truncation":
            if key != "degree":
                diags.append(Diagnostic(line, col, f"unknown key {key} in [truncation]"))
            else:
                settings["degree"] = (line, vcol, value)
        elif section == "ccr":
            if key not in ("dmax", "bound"):
                diags.append(Diagnostic(line, col, f"unknown key {key} in [ccr]"))
            else:
                settings[key] = (line, vcol, value)

    if gen_line is None:
        diags.append(Diagnostic(1, 1, "missing 'generators = ...' in [algebra]"))
    clash = set(generators) & set(params)
    for name in sorted(clash):
        diags.append(Diagnostic(gen_line or 1, 1, f"{name} is both a generator and a parameter"))
    gens = {g: k for k, g in enumerate(generators)}

    rules: list[Rule] = []
    seen_lhs = set()
    for line, col, body in raw_rules:
        if "=" not in body:
            diags.append(Diagnostic(line, col, "expected 'rule: <gen> <gen> = <expression>'"))
            continue
        lhs_text, rhs_text = body.split("=", 1)
        rhs_col = col + len(lhs_text) + 1
        lhs_names = lhs_text.split()
        lead = col + len(lhs_text) - len(lhs_text.lstrip())
        if len(lhs_names) != 2:
            diags.append(Diagnostic(line, lead, "rule left side must be two generators"))
            continue
        bad = [g for g in lhs_names if g not in gens]
        if bad:
            diags.append(Diagnostic(line, lead, f"unknown generator {bad[0]} in rule"))
            continue
        j, i = gens[lhs_names[0]], gens[lhs_names[1]]
        if not j > i:
            diags.append(Diagnostic(line, lead, f"rule left side must be an out-of-order pair (here {lhs_names[0]} {lhs_names[1]})"))
            continue
        if (j, i) in seen_lhs:
            diags.append(Diagnostic(line, lead, f"duplicate rule for {lhs_names[0]} {lhs_names[1]}"))
            continue
        seen_lhs.add((j, i))
        rule_lines[(j, i)] = line
        toks = _tokenize(rhs_text, rhs_col, line, diags)
        if toks is None:
            continue
        terms = _parse_sum(toks, line, gens, False, diags, rhs_col + len(rhs_text))
        if terms is None:
            continue
        rhs = []
        ok = True
        for term in terms:
            _check_params(term, params, line, diags)
            word = tuple(g for g, _, _ in term.letters)
            where = term.letters[0][2] if term.letters else rhs_col
            if len(word) > 2:
                diags.append(Diagnostic(line, where, "rule degree exceeds 2"))
                ok = False
            elif not is_ordered(word):
                diags.append(Diagnostic(line, where, "rule right-hand side monomial is not in ordered form"))
                ok = False
            elif len(word) == 2 and word >= (j, i):
                diags.append(Diagnostic(line, where, "rule right-hand side must be smaller than its left side in degree-lex order"))
                ok = False
            rhs.append(RuleTerm(term.coeff, tuple(term.params), word))
        if ok:
            rules.append(Rule((j, i), tuple(rhs)))

    weights: dict[tuple[int, ...], Fraction] = {}
    for line, col, body in raw_weights:
        if "=" not in body:
            diags.append(Diagnostic(line, col, "expected 'weight: <monomial> = <value>'"))
            continue
        mono_text, value = body.split("=", 1)
        names = mono_text.split()
        if not names or any(g not in gens for g in names):
            diags.append(Diagnostic(line, col, f"weight needs a monomial in the generators, got {mono_text.strip()!r}"))
            continue
        word = tuple(gens[g] for g in names)
        if not is_ordered(word):
            diags.append(Diagnostic(line, col, "weight monomial is not in ordered form"))
            continue
        vcol = col + len(mono_text) + 1
        try:
            w = Fraction(value.replace(" ", ""))
        except (ValueError, ZeroDivisionError):
            diags.append(Diagnostic(line, vcol, "weight must be a rational a/b"))
            continue
        if w <= 0:
            diags.append(Diagnostic(line, vcol, f"non-positive weight {w}"))
            continue
        weights[word_monomial(word, len(generators))] = w

    blocks: dict[int, list[list[Scalar]]] = {}
    for line, col, body in raw_blocks:
        if "=" not in body:
            diags.append(Diagnostic(line, col, "expected 'block <degree> = <row> ; <row> ...'"))
            continue
        deg_text, value = body.split("=", 1)
        deg = _parse_int(deg_text.strip(), line, col, "block degree", diags)
        if deg is None:
            continue
        try:
            block = [[parse_scalar(x) for x in row.split(",")] for row in value.split(";")]
        except ValueError as e:
            diags.append(Diagnostic(line, col + len(deg_text) + 1, str(e)))
            continue
        blocks[deg] = block

    preset = settings.get("preset", (0, 0, "bargmann"))[2]
    degree = dmax = bound = None
    for key, default, minimum in (("degree", 8, 0), ("dmax", 2, 1), ("bound", 10, 0)):
        if key in settings:
            line, col, value = settings[key]
            v = _parse_int(value, line, col, key, diags, minimum)
        else:
            v = default
        if key == "degree":
            degree = v
        elif key == "dmax":
            dmax = v
        else:
            bound = v

    if "hbar" in params and params["hbar"] <= 0:
        diags.append(Diagnostic(param_lines["hbar"], 1, "hbar must be positive"))

    config = ModelConfig(
        tuple(generators), tuple(rules), params, preset, weights, blocks,
        degree if degree is not None else 8, dmax or 2, bound if bound is not None else 10,
    )
    if not diags:
        try:
            model = config.build_model()
        except (ModelError, PresentationError) as e:
            where = settings.get("preset", (1, 1, ""))
            diags.append(Diagnostic(where[0] or 1, where[1] or 1, str(e)))
        else:
            if check_confluence_:
                for f in check_confluence(model.pres):
                    # blame the rule that rewrites the leading pair of the overlap word
                    line = rule_lines.get(f.word[:2], gen_line or 1)
                    diags.append(Diagnostic(line, 1, f"confluence failure on overlap {format_word(model.pres, f.word)}"))
    if diags:
        raise ModelParseError(sorted(diags, key=lambda d: (d.line, d.col)))
    return config


def load_model(path, check_confluence_: bool = True) -> ModelConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_model(fh.read(), check_confluence_)


def bundled_models() -> list[str]:
    return sorted(p.name for p in resources.files("toeplitzq.models").iterdir() if p.name.endswith(".tq"))


def bundled_model_text(name: str) -> str:
    return resources.files("toeplitzq.models").joinpath(name).read_text(encoding="utf-8")


# -- rendering --------------------------------------------------------------


def _frac(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _render_term(t: RuleTerm, names: tuple[str, ...]) -> str:
    parts = []
    if t.coeff != 1 or (not t.params and not t.word):
        parts.append(f"({t.coeff})" if not t.coeff.is_real() else str(t.coeff))
    parts.extend(t.params)
    parts.extend(names[g] for g in t.word)
    return " ".join(parts)


def render_model(config: ModelConfig) -> str:
    names = config.generators
    out = ["[algebra]", "generators = " + ", ".join(names)]
    for rule in config.rules:
        j, i = rule.lhs
        rhs = " + ".join(_render_term(t, names) for t in rule.rhs) or "0"
        out.append(f"rule: {names[j]} {names[i]} = {rhs}")
    if config.params:
        out += ["", "[params]"]
        out += [f"{k} = {_frac(v)}" for k, v in config.params.items()]
    out += ["", "[gram]", f"preset = {config.preset}"]
    for m, w in config.weights.items():
        mono = " ".join(names[g] for g, e in enumerate(m) for _ in range(e))
        out.append(f"weight: {mono} = {_frac(w)}")
    for d, block in config.blocks.items():
        rows = " ; ".join(", ".join(str(x) for x in row) for row in block)
        out.append(f"block {d} = {rows}")
    out += ["", "[truncation]", f"degree = {config.degree}"]
    out += ["", "[ccr]", f"dmax = {config.dmax}", f"bound = {config.bound}", ""]
    return "\n".join(out)


# -- symbol expressions -----------------------------------------------------


class SymbolParseError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(f"column {d.col}: {d.message}" for d in diagnostics))


def parse_symbol(text: str, config: ModelConfig, pres: Presentation | None = None) -> SymbolElem:
    """Parse a sum of terms ``c h1 h2 ... k1* k2* ...`` into an element of P P*.

    Every unstarred letter must come before every starred one; the product
    k1* k2* ... is read as (... k2 k1)*.
    """
    pres = pres or config.presentation()
    gens = {g: k for k, g in enumerate(config.generators)}
    diags: list[Diagnostic] = []
    toks = _tokenize(text, 1, 1, diags)
    terms = _parse_sum(toks, 1, gens, True, diags, len(text) + 1) if toks is not None else None
    if terms is None:
        raise SymbolParseError(diags)
    total = SymbolElem()
    for term in terms:
        _check_params(term, config.params, 1, diags)
        seen_star = False
        for g, starred, col in term.letters:
            if starred:
                seen_star = True
            elif seen_star:
                diags.append(Diagnostic(
                    1, col,
                    f"{config.generators[g]} follows a starred letter: the product g* h is undefined "
                    "in this realization (symbols must have the form h k*)",
                ))
                break
        if diags:
            continue
        c = term.coeff
        for p in term.params:
            c = c * Scalar(config.params[p])
        holo = [g for g, starred, _ in term.letters if not starred]
        anti = [g for g, starred, _ in term.letters if starred]
        h = pres.normal_form(holo)
        k = pres.normal_form(reversed(anti))
        total = total + left_act(h, embed_star(k), pres).scale(c)
    if diags:
        raise SymbolParseError(diags)
    return total
