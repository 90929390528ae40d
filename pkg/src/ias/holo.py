"""Closed-form holomorphic expressions over C_eps.

Expressions are immutable trees built from the variable ``z``, constants,
``+ - * /``, integer powers, unary minus and ``exp``.  They evaluate under
:class:`~ias.cnum.CEps` arithmetic (scalars or whole grids) and differentiate
exactly.

The text syntax used by the CLI::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' ['-'] INT)?
    atom  := NUMBER | NUMBER'j' | 'j' | 'z' | 'exp' '(' expr ')'
           | '(' expr ')' | '(' [sign] NUMBER sign NUMBER 'j' ')'

A parenthesised ``(a+bj)`` written without spaces is read as one constant,
which is how constants with both parts are printed; ``parse(str(e)) == e``
for every tree.
"""

from __future__ import annotations

import math
import re

import numpy as np

from .cnum import CEps, as_ceps
from .errors import AlgebraMismatchError, ExpressionSyntaxError, SingularDivisorError

__all__ = [
    "HoloExpr", "Var", "Const", "Add", "Sub", "Mul", "Div", "Pow", "Neg", "Exp",
    "var", "const", "exp", "parse", "evaluate", "derive",
]


class HoloExpr:
    kind = "expr"
    precedence = 5
    __slots__ = ("children", "eps")

    def __init__(self, *children, eps=None):
        if eps is None:
            eps = children[0].eps
        for c in children:
            if c.eps != eps:
                raise AlgebraMismatchError(f"mixed eps in expression: {c.eps} vs {eps}")
        self.children = children
        self.eps = eps

    # building
    def _wrap(self, other) -> "HoloExpr":
        if isinstance(other, HoloExpr):
            if other.eps != self.eps:
                raise AlgebraMismatchError(f"mixed eps in expression: {other.eps} vs {self.eps}")
            return other
        return Const(as_ceps(other, self.eps))

    def __add__(self, other):
        return Add(self, self._wrap(other))

    def __radd__(self, other):
        return Add(self._wrap(other), self)

    def __sub__(self, other):
        return Sub(self, self._wrap(other))

    def __rsub__(self, other):
        return Sub(self._wrap(other), self)

    def __mul__(self, other):
        return Mul(self, self._wrap(other))

    def __rmul__(self, other):
        return Mul(self._wrap(other), self)

    def __truediv__(self, other):
        return Div(self, self._wrap(other))

    def __rtruediv__(self, other):
        return Div(self._wrap(other), self)

    def __pow__(self, n):
        return Pow(self, n)

    def __neg__(self):
        return Neg(self)

    # evaluation
    def eval(self, z: CEps) -> CEps:
        if z.eps != self.eps:
            raise AlgebraMismatchError(f"expression has eps={self.eps}, point has eps={z.eps}")
        out = self._eval(z)
        if isinstance(z.re, np.ndarray) and not isinstance(out.re, np.ndarray):
            out = CEps(np.full(z.shape, out.re), np.full(z.shape, out.im), out.eps)
        return out

    __call__ = eval

    def _eval(self, z):
        raise NotImplementedError

    def derive(self) -> "HoloExpr":
        raise NotImplementedError

    # structure
    def _key(self):
        return (self.kind, self.eps, tuple(c._key() for c in self.children))

    def __eq__(self, other):
        return isinstance(other, HoloExpr) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"<{type(self).__name__} {self}>"

    def _child_str(self, child, right=False):
        s = str(child)
        if child.precedence < self.precedence or (right and child.precedence == self.precedence):
            return f"({s})"
        return s


class Var(HoloExpr):
    kind = "var"
    __slots__ = ()

    def __init__(self, eps=1):
        self.children = ()
        self.eps = int(eps)

    def _eval(self, z):
        return z

    def derive(self):
        return Const(CEps(1.0, 0.0, self.eps))

    def __str__(self):
        return "z"


class Const(HoloExpr):
    kind = "const"
    __slots__ = ("value",)

    def __init__(self, value: CEps):
        self.value = CEps(float(value.re), float(value.im), value.eps)
        self.children = ()
        self.eps = value.eps

    def _key(self):
        return ("const", self.eps, float(self.value.re).hex(), float(self.value.im).hex())

    def _eval(self, z):
        return self.value

    def derive(self):
        return Const(CEps(0.0, 0.0, self.eps))

    @property
    def is_zero(self):
        return self.value.re == 0 and self.value.im == 0

    @property
    def is_one(self):
        return self.value.re == 1 and self.value.im == 0

    def __str__(self):
        r, i = self.value.re, self.value.im
        r_pos = math.copysign(1.0, r) > 0
        i_pos = math.copysign(1.0, i) > 0
        if i == 0 and i_pos and r_pos:
            return repr(r)
        if r == 0 and r_pos and i > 0:
            return f"{i!r}j"
        sign = "+" if i_pos else "-"
        return f"({r!r}{sign}{abs(i)!r}j)"


class Add(HoloExpr):
    kind = "add"
    precedence = 1
    __slots__ = ()

    def _eval(self, z):
        a, b = self.children
        return a._eval(z) + b._eval(z)

    def derive(self):
        a, b = self.children
        return _add(a.derive(), b.derive())

    def __str__(self):
        a, b = self.children
        return f"{self._child_str(a)} + {self._child_str(b, right=True)}"


class Sub(HoloExpr):
    kind = "sub"
    precedence = 1
    __slots__ = ()

    def _eval(self, z):
        a, b = self.children
        return a._eval(z) - b._eval(z)

    def derive(self):
        a, b = self.children
        return _sub(a.derive(), b.derive())

    def __str__(self):
        a, b = self.children
        return f"{self._child_str(a)} - {self._child_str(b, right=True)}"


class Mul(HoloExpr):
    kind = "mul"
    precedence = 2
    __slots__ = ()

    def _eval(self, z):
        a, b = self.children
        return a._eval(z) * b._eval(z)

    def derive(self):
        a, b = self.children
        return _add(_mul(a.derive(), b), _mul(a, b.derive()))

    def __str__(self):
        a, b = self.children
        return f"{self._child_str(a)} * {self._child_str(b, right=True)}"


class Div(HoloExpr):
    kind = "div"
    precedence = 2
    __slots__ = ()

    def _eval(self, z):
        a, b = self.children
        num, den = a._eval(z), b._eval(z)
        try:
            return num / den
        except SingularDivisorError as exc:
            raise SingularDivisorError(f"{exc} in subexpression {self}") from None

    def derive(self):
        a, b = self.children
        # (a/b)' = (a'b - ab') / b^2
        top = _sub(_mul(a.derive(), b), _mul(a, b.derive()))
        if isinstance(top, Const) and top.is_zero:
            return top
        return Div(top, Pow(b, 2))

    def __str__(self):
        a, b = self.children
        return f"{self._child_str(a)} / {self._child_str(b, right=True)}"


class Neg(HoloExpr):
    kind = "neg"
    precedence = 3
    __slots__ = ()

    def _eval(self, z):
        return -self.children[0]._eval(z)

    def derive(self):
        d = self.children[0].derive()
        if isinstance(d, Const):
            return Const(-d.value) if not d.is_zero else d
        return Neg(d)

    def __str__(self):
        return "-" + self._child_str(self.children[0])


class Pow(HoloExpr):
    kind = "int_pow"
    precedence = 4
    __slots__ = ("n",)

    def __init__(self, base, n):
        if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
            raise TypeError("exponent must be an integer")
        super().__init__(base)
        self.n = int(n)

    def _key(self):
        return ("int_pow", self.eps, self.n, self.children[0]._key())

    def _eval(self, z):
        base = self.children[0]._eval(z)
        try:
            return base ** self.n
        except SingularDivisorError as exc:
            raise SingularDivisorError(f"{exc} in subexpression {self}") from None

    def derive(self):
        (f,) = self.children
        if self.n == 0:
            return Const(CEps(0.0, 0.0, self.eps))
        lead = f if self.n == 2 else (Pow(f, self.n - 1) if self.n != 1 else None)
        coef = Const(CEps(float(self.n), 0.0, self.eps))
        outer = coef if lead is None else _mul(coef, lead)
        return _mul(outer, f.derive())

    def __str__(self):
        base = self.children[0]
        s = str(base)
        if base.precedence <= self.precedence:
            s = f"({s})"
        return f"{s}^{self.n}"


class Exp(HoloExpr):
    kind = "exp"
    __slots__ = ()

    def _eval(self, z):
        return self.children[0]._eval(z).exp()

    def derive(self):
        return _mul(self, self.children[0].derive())

    def __str__(self):
        return f"exp({self.children[0]})"


# light simplification keeps derivative trees small; all folds are exact
def _zero(e):
    return isinstance(e, Const) and e.is_zero


def _one(e):
    return isinstance(e, Const) and e.is_one


def _add(a, b):
    if _zero(a):
        return b
    if _zero(b):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    return Add(a, b)


def _sub(a, b):
    if _zero(b):
        return a
    if _zero(a):
        return Neg(b) if not isinstance(b, Const) else Const(-b.value)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    return Sub(a, b)


def _mul(a, b):
    if _zero(a) or _zero(b):
        return Const(CEps(0.0, 0.0, a.eps))
    if _one(a):
        return b
    if _one(b):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if isinstance(b, Const) and not isinstance(a, Const):
        return Mul(b, a)
    return Mul(a, b)


# public helpers

def var(eps: int = 1) -> Var:
    return Var(eps)


def const(value, eps: int = 1) -> Const:
    return Const(as_ceps(value, eps))


def exp(arg: HoloExpr) -> Exp:
    return Exp(arg)


def evaluate(f: HoloExpr, z: CEps) -> CEps:
    return f.eval(z)


def derive(f: HoloExpr) -> HoloExpr:
    return f.derive()


# parsing

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_TOKEN_RE = re.compile(
    rf"""
    (?P<ws>\s+)
  | (?P<plit>\((?P<pre>[+-]?{_NUM})(?P<psg>[+-])(?P<pim>{_NUM})j\))
  | (?P<imag>{_NUM}j)
  | (?P<num>{_NUM})
  | (?P<name>[A-Za-z_]\w*)
  | (?P<op>[-+*/^()])
  | (?P<bad>.)
    """,
    re.VERBOSE,
)


def _tokenize(text):
    toks = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        pos = m.start()
        if kind == "ws":
            continue
        if kind == "plit":
            im_part = float(m.group("pim"))
            if m.group("psg") == "-":
                im_part = -im_part
            toks.append(("const", (float(m.group("pre")), im_part), pos, m.group(0)))
        elif kind == "imag":
            toks.append(("const", (0.0, float(m.group("imag")[:-1])), pos, m.group(0)))
        elif kind == "num":
            toks.append(("const", (float(m.group("num")), 0.0), pos, m.group(0)))
        elif kind == "name":
            toks.append(("name", m.group("name"), pos, m.group(0)))
        elif kind == "op":
            toks.append(("op", m.group("op"), pos, m.group(0)))
        else:
            raise ExpressionSyntaxError(f"unexpected character {m.group(0)!r} at column {pos + 1}")
    toks.append(("end", None, len(text), ""))
    return toks


class _Parser:
    def __init__(self, text, eps):
        self.text = text
        self.eps = eps
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect_op(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            self.fail(tok, f"expected {op!r}")

    def fail(self, tok, msg):
        where = f"column {tok[2] + 1}" if tok[0] != "end" else "end of input"
        raise ExpressionSyntaxError(f"{msg} at {where} in {self.text!r}")

    def parse(self):
        e = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            self.fail(tok, "unexpected token")
        return e

    def expr(self):
        e = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def term(self):
        e = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            rhs = self.unary()
            e = Mul(e, rhs) if op == "*" else Div(e, rhs)
        return e

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            return Pow(base, self.integer())
        return base

    def integer(self):
        tok = self.take()
        closing = False
        if tok[0] == "op" and tok[1] == "(":
            closing = True
            tok = self.take()
        sign = 1
        if tok[0] == "op" and tok[1] == "-":
            sign = -1
            tok = self.take()
        if tok[0] != "const" or tok[1][1] != 0.0 or not float(tok[1][0]).is_integer():
            self.fail(tok, "exponent must be an integer literal")
        if any(ch in tok[3] for ch in ".eEj"):
            self.fail(tok, "exponent must be an integer literal")
        if closing:
            self.expect_op(")")
        return sign * int(tok[1][0])

    def atom(self):
        tok = self.take()
        kind, val = tok[0], tok[1]
        if kind == "const":
            re_part, im_part = val
            if not (math.isfinite(re_part) and math.isfinite(im_part)):
                self.fail(tok, "non-finite literal")
            return Const(CEps(re_part, im_part, self.eps))
        if kind == "name":
            if val == "z":
                return Var(self.eps)
            if val == "j":
                return Const(CEps(0.0, 1.0, self.eps))
            if val == "exp":
                nxt = self.peek()
                if nxt[0] == "const" and nxt[3].startswith("("):
                    return Exp(self.atom())
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return Exp(arg)
            self.fail(tok, f"unknown name {val!r}")
        if kind == "op" and val == "(":
            e = self.expr()
            self.expect_op(")")
            return e
        self.fail(tok, "expected a number, 'z', 'j', 'exp(' or '('")


def parse(text: str, eps: int = 1) -> HoloExpr:
    """Parse the infix syntax described in the module docstring."""
    if eps not in (1, -1):
        raise AlgebraMismatchError(f"eps must be +1 or -1, got {eps!r}")
    return _Parser(text, eps).parse()
