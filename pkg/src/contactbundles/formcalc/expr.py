"""Expression trees for form coefficients: parser, differentiation, evaluation.

The node set is deliberately small: variables, exact rational constants, pi,
sums, products, quotients, integer powers, sin/cos/exp and negation.  Trees
are immutable.  `normalize` rewrites a tree into a sum of products of atomic
factors with exact rational coefficients, merging like terms; this is enough
for the cancellations the calculus layer relies on (mixed partials, d o d = 0)
while equality of general expressions remains a numeric check at random
points, not a canonical-form decision.

Surface syntax for coefficients:

    Expr  := sum over IDENT, RATIONAL, pi, + - * / ^INT, sin cos exp, parens

Rational literals (including decimal and scientific notation) are parsed
bit-exactly into `fractions.Fraction`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np


class FormSyntaxError(ValueError):
    """Syntax error with a 0-based offset into the source text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at offset {position})")
        self.position = position


class UnknownVariableError(FormSyntaxError):
    def __init__(self, name: str, position: int):
        super().__init__(f"unknown variable {name!r}", position)
        self.name = name


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Rat(Expr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))


@dataclass(frozen=True)
class Pi(Expr):
    pass


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Add(Expr):
    terms: Tuple[Expr, ...]


@dataclass(frozen=True)
class Mul(Expr):
    factors: Tuple[Expr, ...]


@dataclass(frozen=True)
class Div(Expr):
    num: Expr
    den: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Sin(Expr):
    arg: Expr


@dataclass(frozen=True)
class Cos(Expr):
    arg: Expr


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr


ZERO = Rat(Fraction(0))
ONE = Rat(Fraction(1))


def rational(v) -> Rat:
    return Rat(Fraction(v))


# ---------------------------------------------------------------------------
# rendering (also provides the deterministic sort key for normalization)

def render(e: Expr) -> str:
    """Canonical text; reparses to an equal tree."""
    return _render(e, 0)


def _render(e: Expr, prec: int) -> str:
    # precedence levels: 0 sum, 1 product, 2 unary, 3 power/atom
    if isinstance(e, Rat):
        v = e.value
        s = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        if v < 0 and prec >= 2:
            return f"({s})"
        if v.denominator != 1 and prec >= 1:
            return f"({s})"
        return s
    if isinstance(e, Pi):
        return "pi"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Add):
        s = " + ".join(_render(t, 1) for t in e.terms)
        return f"({s})" if prec >= 1 else s
    if isinstance(e, Mul):
        s = "*".join(_render(f, 2) for f in e.factors)
        return f"({s})" if prec >= 2 else s
    if isinstance(e, Div):
        s = f"{_render(e.num, 2)}/{_render(e.den, 3)}"
        return f"({s})" if prec >= 2 else s
    if isinstance(e, Pow):
        if isinstance(e.base, (Var, Pi, Sin, Cos, Exp)):
            b = _render(e.base, 3)
        else:
            b = f"({_render(e.base, 0)})"
        return f"{b}^{e.exponent}"
    if isinstance(e, Neg):
        s = f"-{_render(e.arg, 2)}"
        return f"({s})" if prec >= 2 else s
    if isinstance(e, Sin):
        return f"sin({_render(e.arg, 0)})"
    if isinstance(e, Cos):
        return f"cos({_render(e.arg, 0)})"
    if isinstance(e, Exp):
        return f"exp({_render(e.arg, 0)})"
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# normalization: sum of products of atomic factors

Monomial = Tuple[Tuple[Expr, int], ...]  # sorted ((atom, exponent), ...)
SOP = Dict[Monomial, Fraction]


def _atom_key(a: Expr) -> str:
    return render(a)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    acc: Dict[Expr, int] = dict(m1)
    for a, k in m2:
        acc[a] = acc.get(a, 0) + k
    items = [(a, k) for a, k in acc.items() if k != 0]
    items.sort(key=lambda ak: (_atom_key(ak[0]), ak[1]))
    return tuple(items)


def _sop_add(s1: SOP, s2: SOP) -> SOP:
    out = dict(s1)
    for m, c in s2.items():
        c2 = out.get(m, Fraction(0)) + c
        if c2:
            out[m] = c2
        elif m in out:
            del out[m]
    return out


def _sop_mul(s1: SOP, s2: SOP) -> SOP:
    out: SOP = {}
    for m1, c1 in s1.items():
        for m2, c2 in s2.items():
            m = _mono_mul(m1, m2)
            c = out.get(m, Fraction(0)) + c1 * c2
            if c:
                out[m] = c
            elif m in out:
                del out[m]
    return out


def _sop_scale(s: SOP, c: Fraction) -> SOP:
    if not c:
        return {}
    return {m: cc * c for m, cc in s.items()}


def _sop_const(c: Fraction) -> SOP:
    return {(): Fraction(c)} if c else {}


def _sop_atom(a: Expr, k: int = 1) -> SOP:
    return {((a, k),): Fraction(1)}


def _sop_invert(s: SOP) -> SOP:
    if not s:
        raise ZeroDivisionError("division by symbolic zero")
    if len(s) == 1:
        (mono, coeff), = s.items()
        inv_mono = tuple((a, -k) for a, k in mono)
        inv_mono = tuple(sorted(inv_mono, key=lambda ak: (_atom_key(ak[0]), ak[1])))
        return {inv_mono: Fraction(1) / coeff}
    return _sop_atom(Pow(_rebuild(s), -1))


def _to_sop(e: Expr) -> SOP:
    if isinstance(e, Rat):
        return _sop_const(e.value)
    if isinstance(e, (Pi, Var)):
        return _sop_atom(e)
    if isinstance(e, Neg):
        return _sop_scale(_to_sop(e.arg), Fraction(-1))
    if isinstance(e, Add):
        out: SOP = {}
        for t in e.terms:
            out = _sop_add(out, _to_sop(t))
        return out
    if isinstance(e, Mul):
        out = _sop_const(Fraction(1))
        for f in e.factors:
            out = _sop_mul(out, _to_sop(f))
        return out
    if isinstance(e, Div):
        return _sop_mul(_to_sop(e.num), _sop_invert(_to_sop(e.den)))
    if isinstance(e, Pow):
        base = _to_sop(e.base)
        k = e.exponent
        if k == 0:
            return _sop_const(Fraction(1))
        core = base if k > 0 else _sop_invert(base)
        out = dict(core)
        for _ in range(abs(k) - 1):
            out = _sop_mul(out, core)
        return out
    if isinstance(e, (Sin, Cos, Exp)):
        arg = normalize(e.arg)
        if isinstance(arg, Rat) and arg.value == 0:
            if isinstance(e, Sin):
                return {}
            return _sop_const(Fraction(1))
        return _sop_atom(type(e)(arg))
    raise TypeError(f"not an expression: {e!r}")


def _rebuild(s: SOP) -> Expr:
    if not s:
        return ZERO
    terms = []
    for mono, coeff in sorted(s.items(), key=lambda mc: tuple((_atom_key(a), k) for a, k in mc[0])):
        factors = []
        if coeff != 1 or not mono:
            factors.append(Rat(coeff))
        for a, k in mono:
            factors.append(a if k == 1 else Pow(a, k))
        terms.append(factors[0] if len(factors) == 1 else Mul(tuple(factors)))
    return terms[0] if len(terms) == 1 else Add(tuple(terms))


@lru_cache(maxsize=65536)
def normalize(e: Expr) -> Expr:
    """Sum-of-products canonicalisation with exact coefficient arithmetic."""
    return _rebuild(_to_sop(e))


def is_zero(e: Expr) -> bool:
    n = normalize(e)
    return isinstance(n, Rat) and n.value == 0


# ---------------------------------------------------------------------------
# calculus and substitution

def diff(e: Expr, var: str) -> Expr:
    """Symbolic partial derivative; the result is normalized."""
    return normalize(_diff(e, var))


def _diff(e: Expr, var: str) -> Expr:
    if isinstance(e, (Rat, Pi)):
        return ZERO
    if isinstance(e, Var):
        return ONE if e.name == var else ZERO
    if isinstance(e, Neg):
        return Neg(_diff(e.arg, var))
    if isinstance(e, Add):
        return Add(tuple(_diff(t, var) for t in e.terms))
    if isinstance(e, Mul):
        terms = []
        fs = e.factors
        for i in range(len(fs)):
            terms.append(Mul(tuple(fs[:i]) + (_diff(fs[i], var),) + tuple(fs[i + 1:])))
        return Add(tuple(terms))
    if isinstance(e, Div):
        return Div(Add((Mul((_diff(e.num, var), e.den)),
                        Neg(Mul((e.num, _diff(e.den, var)))))),
                   Pow(e.den, 2))
    if isinstance(e, Pow):
        if e.exponent == 0:
            return ZERO
        return Mul((Rat(Fraction(e.exponent)), Pow(e.base, e.exponent - 1), _diff(e.base, var)))
    if isinstance(e, Sin):
        return Mul((Cos(e.arg), _diff(e.arg, var)))
    if isinstance(e, Cos):
        return Neg(Mul((Sin(e.arg), _diff(e.arg, var))))
    if isinstance(e, Exp):
        return Mul((Exp(e.arg), _diff(e.arg, var)))
    raise TypeError(f"not an expression: {e!r}")


def subst(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Simultaneous substitution of variables by expressions (not normalized)."""
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, (Rat, Pi)):
        return e
    if isinstance(e, Neg):
        return Neg(subst(e.arg, mapping))
    if isinstance(e, Add):
        return Add(tuple(subst(t, mapping) for t in e.terms))
    if isinstance(e, Mul):
        return Mul(tuple(subst(f, mapping) for f in e.factors))
    if isinstance(e, Div):
        return Div(subst(e.num, mapping), subst(e.den, mapping))
    if isinstance(e, Pow):
        return Pow(subst(e.base, mapping), e.exponent)
    if isinstance(e, (Sin, Cos, Exp)):
        return type(e)(subst(e.arg, mapping))
    raise TypeError(f"not an expression: {e!r}")


def variables(e: Expr) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, (Rat, Pi)):
        return set()
    if isinstance(e, (Neg, Sin, Cos, Exp)):
        return variables(e.arg)
    if isinstance(e, Add):
        return set().union(*(variables(t) for t in e.terms)) if e.terms else set()
    if isinstance(e, Mul):
        return set().union(*(variables(f) for f in e.factors)) if e.factors else set()
    if isinstance(e, Div):
        return variables(e.num) | variables(e.den)
    if isinstance(e, Pow):
        return variables(e.base)
    raise TypeError(f"not an expression: {e!r}")


def eval_expr(e: Expr, env: Mapping[str, float]) -> float:
    if isinstance(e, Rat):
        return float(e.value)
    if isinstance(e, Pi):
        return math.pi
    if isinstance(e, Var):
        return float(env[e.name])
    if isinstance(e, Neg):
        return -eval_expr(e.arg, env)
    if isinstance(e, Add):
        return math.fsum(eval_expr(t, env) for t in e.terms)
    if isinstance(e, Mul):
        out = 1.0
        for f in e.factors:
            out *= eval_expr(f, env)
        return out
    if isinstance(e, Div):
        return eval_expr(e.num, env) / eval_expr(e.den, env)
    if isinstance(e, Pow):
        return eval_expr(e.base, env) ** e.exponent
    if isinstance(e, Sin):
        return math.sin(eval_expr(e.arg, env))
    if isinstance(e, Cos):
        return math.cos(eval_expr(e.arg, env))
    if isinstance(e, Exp):
        return math.exp(eval_expr(e.arg, env))
    raise TypeError(f"not an expression: {e!r}")


def compile_expr(e: Expr, names: Sequence[str]):
    """Compile to a vectorised numpy function of the chart coordinates."""

    def emit(x: Expr) -> str:
        if isinstance(x, Rat):
            return repr(float(x.value))
        if isinstance(x, Pi):
            return "np.pi"
        if isinstance(x, Var):
            return f"_v_{x.name}"
        if isinstance(x, Neg):
            return f"(-{emit(x.arg)})"
        if isinstance(x, Add):
            return "(" + " + ".join(emit(t) for t in x.terms) + ")" if x.terms else "0.0"
        if isinstance(x, Mul):
            return "(" + " * ".join(emit(f) for f in x.factors) + ")" if x.factors else "1.0"
        if isinstance(x, Div):
            return f"({emit(x.num)} / {emit(x.den)})"
        if isinstance(x, Pow):
            if x.exponent < 0:
                return f"({emit(x.base)} ** {x.exponent:.1f})"
            return f"({emit(x.base)} ** {x.exponent})"
        if isinstance(x, Sin):
            return f"np.sin({emit(x.arg)})"
        if isinstance(x, Cos):
            return f"np.cos({emit(x.arg)})"
        if isinstance(x, Exp):
            return f"np.exp({emit(x.arg)})"
        raise TypeError(f"not an expression: {x!r}")

    args = ", ".join(f"_v_{n}" for n in names)
    src = f"lambda {args}: ({emit(e)}) + 0.0*({' + '.join(f'_v_{n}' for n in names)})"
    return eval(src, {"np": np})  # noqa: S307 - source is generated here


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)

_FUNCTIONS = {"sin": Sin, "cos": Cos, "exp": Exp}


@dataclass(frozen=True)
class _Token:
    kind: str  # number | ident | op | end
    text: str
    pos: int


def tokenize(text: str) -> list:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad = pos + (len(text[pos:]) - len(stripped))
            raise FormSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens, allowed: Iterable[str], params: Mapping[str, Expr]):
        self.tokens = tokens
        self.i = 0
        self.allowed = set(allowed)
        self.params = dict(params)

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect_op(self, op: str) -> _Token:
        t = self.peek()
        if t.kind != "op" or t.text != op:
            raise FormSyntaxError(f"expected {op!r}", t.pos)
        return self.next()

    def parse_sum(self) -> Expr:
        terms = [self.parse_product()]
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "+-":
                self.next()
                rhs = self.parse_product()
                terms.append(rhs if t.text == "+" else Neg(rhs))
            else:
                break
        return terms[0] if len(terms) == 1 else Add(tuple(terms))

    def parse_product(self) -> Expr:
        out = self.parse_unary()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "*/":
                self.next()
                rhs = self.parse_unary()
                out = Mul((out, rhs)) if t.text == "*" else Div(out, rhs)
            else:
                break
        return out

    def parse_unary(self) -> Expr:
        t = self.peek()
        if t.kind == "op" and t.text == "-":
            self.next()
            return Neg(self.parse_unary())
        if t.kind == "op" and t.text == "+":
            self.next()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.next()
            sign = 1
            t2 = self.peek()
            if t2.kind == "op" and t2.text == "-":
                self.next()
                sign = -1
            t3 = self.next()
            if t3.kind != "number" or not t3.text.isdigit():
                raise FormSyntaxError("exponent must be an integer literal", t3.pos)
            return Pow(base, sign * int(t3.text))
        return base

    def parse_atom(self) -> Expr:
        t = self.next()
        if t.kind == "number":
            return Rat(Fraction(t.text))
        if t.kind == "op" and t.text == "(":
            inner = self.parse_sum()
            self.expect_op(")")
            return inner
        if t.kind == "ident":
            if t.text == "pi":
                return Pi()
            if t.text in _FUNCTIONS:
                self.expect_op("(")
                arg = self.parse_sum()
                self.expect_op(")")
                return _FUNCTIONS[t.text](arg)
            if t.text in self.params:
                return self.params[t.text]
            if t.text in self.allowed:
                return Var(t.text)
            raise UnknownVariableError(t.text, t.pos)
        raise FormSyntaxError(f"unexpected token {t.text!r}" if t.text else "unexpected end of input", t.pos)


def parse_expr(text: str, allowed: Iterable[str], params: Optional[Mapping[str, object]] = None) -> Expr:
    """Parse a coefficient expression over the given variable names.

    `params` binds extra identifiers to numbers or expressions at parse time.
    """
    bound = {k: (v if isinstance(v, Expr) else rational(v)) for k, v in (params or {}).items()}
    parser = _Parser(tokenize(text), allowed, bound)
    out = parser.parse_sum()
    t = parser.peek()
    if t.kind != "end":
        raise FormSyntaxError(f"trailing input {t.text!r}", t.pos)
    return out
