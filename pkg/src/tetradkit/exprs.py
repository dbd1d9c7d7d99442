"""Analytic expression DSL with exact first and second derivatives.

Expressions are parsed into immutable ASTs over chart coordinates and named
constants.  Evaluation propagates truncated second-order Taylor data (value,
gradient, Hessian) through every node, so derivatives are exact to machine
precision wherever the expression is defined — no finite differencing.

Grammar (loosest to tightest binding)::

    expr   := term  (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ['^' unary]            # right-associative, binds tightest
    atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

Function application requires parentheses.  The function set is fixed:
sin, cos, tan, exp, ln, sqrt, sinh, cosh, tanh, abs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Expr",
    "Jet2",
    "ExprError",
    "ExprSyntaxError",
    "ExprNameError",
    "ExprDomainError",
    "parse_expr",
    "eval_jet2",
    "FUNCTION_NAMES",
]

FUNCTION_NAMES = ("sin", "cos", "tan", "exp", "ln", "sqrt", "sinh", "cosh", "tanh", "abs")


class ExprError(ValueError):
    """Base class for expression errors."""


class ExprSyntaxError(ExprError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ExprNameError(ExprError):
    def __init__(self, name, offset):
        super().__init__(f"unknown identifier '{name}' (at offset {offset})")
        self.name = name
        self.offset = offset


class ExprDomainError(ExprError):
    def __init__(self, message, fragment, point):
        pt = np.asarray(point)
        super().__init__(f"{message} in '{fragment}' at point {pt.tolist()}")
        self.fragment = fragment
        self.point = point


# ---------------------------------------------------------------------------
# AST nodes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Const:
    name: str
    value: float


@dataclass(frozen=True)
class Var:
    index: int
    name: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: object
    right: object


@dataclass(frozen=True)
class Call:
    func: str
    arg: object


# ---------------------------------------------------------------------------
# Second-order Taylor data
# ---------------------------------------------------------------------------


class Jet2:
    """Value, gradient and Hessian of a scalar at one point (or a batch).

    ``value`` has the batch shape (scalar evaluation gives a 0-d array),
    ``grad`` appends one axis of length n, ``hess`` two.  The Hessian is
    exactly symmetric: every arithmetic rule below builds it from manifestly
    symmetric combinations, which IEEE addition/multiplication preserve.
    """

    __slots__ = ("value", "grad", "hess")

    def __init__(self, value, grad, hess):
        self.value = value
        self.grad = grad
        self.hess = hess

    @staticmethod
    def constant(c, n, batch_shape=()):
        v = np.full(batch_shape, float(c))
        return Jet2(v, np.zeros(batch_shape + (n,)), np.zeros(batch_shape + (n, n)))

    @staticmethod
    def coordinate(values, i, n):
        values = np.asarray(values, dtype=float)
        g = np.zeros(values.shape + (n,))
        g[..., i] = 1.0
        return Jet2(values, g, np.zeros(values.shape + (n, n)))

    @property
    def n(self):
        return self.grad.shape[-1]

    def __add__(self, other):
        return Jet2(self.value + other.value, self.grad + other.grad, self.hess + other.hess)

    def __sub__(self, other):
        return Jet2(self.value - other.value, self.grad - other.grad, self.hess - other.hess)

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __mul__(self, other):
        v = self.value * other.value
        g = self.value[..., None] * other.grad + other.value[..., None] * self.grad
        # outer(a,b) + outer(b,a) is exactly symmetric entrywise
        cross = (self.grad[..., :, None] * other.grad[..., None, :]
                 + other.grad[..., :, None] * self.grad[..., None, :])
        h = (self.value[..., None, None] * other.hess
             + other.value[..., None, None] * self.hess + cross)
        return Jet2(v, g, h)

    def __truediv__(self, other):
        v = self.value / other.value
        g = (self.grad - v[..., None] * other.grad) / other.value[..., None]
        cross = (g[..., :, None] * other.grad[..., None, :]
                 + other.grad[..., :, None] * g[..., None, :])
        h = (self.hess - v[..., None, None] * other.hess - cross) / other.value[..., None, None]
        return Jet2(v, g, h)

    def chain(self, f0, f1, f2):
        """Compose with a scalar function given f(v), f'(v), f''(v)."""
        g = f1[..., None] * self.grad
        outer = self.grad[..., :, None] * self.grad[..., None, :]
        h = f1[..., None, None] * self.hess + f2[..., None, None] * outer
        return Jet2(f0, g, h)

    def ipow(self, k):
        """Integer power by binary exponentiation (exact on polynomials)."""
        if k == 0:
            return Jet2.constant(1.0, self.n, self.value.shape)
        if k < 0:
            return Jet2.constant(1.0, self.n, self.value.shape) / self.ipow(-k)
        out = None
        base = self
        while k:
            if k & 1:
                out = base if out is None else out * base
            k >>= 1
            if k:
                base = base * base
        return out


def _jet_call(func, u, node, point):
    v = u.value
    if func == "sin":
        return u.chain(np.sin(v), np.cos(v), -np.sin(v))
    if func == "cos":
        return u.chain(np.cos(v), -np.sin(v), -np.cos(v))
    if func == "tan":
        t = np.tan(v)
        s = 1.0 + t * t
        return u.chain(t, s, 2.0 * t * s)
    if func == "exp":
        e = np.exp(v)
        return u.chain(e, e, e)
    if func == "ln":
        if np.any(v <= 0.0):
            raise ExprDomainError("log of non-positive value", to_source(node), point)
        return u.chain(np.log(v), 1.0 / v, -1.0 / (v * v))
    if func == "sqrt":
        if np.any(v < 0.0):
            raise ExprDomainError("sqrt of negative value", to_source(node), point)
        r = np.sqrt(v)
        return u.chain(r, 0.5 / r, -0.25 / (r * v))
    if func == "sinh":
        return u.chain(np.sinh(v), np.cosh(v), np.sinh(v))
    if func == "cosh":
        return u.chain(np.cosh(v), np.sinh(v), np.cosh(v))
    if func == "tanh":
        t = np.tanh(v)
        s = 1.0 - t * t
        return u.chain(t, s, -2.0 * t * s)
    if func == "abs":
        s = np.sign(v)
        return u.chain(np.abs(v), s, np.zeros_like(v))
    raise AssertionError(func)


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

_TOKEN_OPS = set("+-*/^()")


def _tokenize(source):
    tokens = []  # (kind, text, offset)
    i, m = 0, len(source)
    while i < m:
        c = source[i]
        if c.isspace():
            i += 1
            continue
        if c in _TOKEN_OPS:
            tokens.append(("op", c, i))
            i += 1
            continue
        if c.isdigit() or c == ".":
            j = i
            seen_dot = False
            while j < m and (source[j].isdigit() or (source[j] == "." and not seen_dot)):
                if source[j] == ".":
                    seen_dot = True
                j += 1
            # optional exponent part
            if j < m and source[j] in "eE":
                k = j + 1
                if k < m and source[k] in "+-":
                    k += 1
                if k < m and source[k].isdigit():
                    while k < m and source[k].isdigit():
                        k += 1
                    j = k
            text = source[i:j]
            try:
                float(text)
            except ValueError:
                raise ExprSyntaxError(f"bad number '{text}'", i) from None
            tokens.append(("num", text, i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < m and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(("ident", source[i:j], i))
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character '{c}'", i)
    tokens.append(("end", "", m))
    return tokens


class _Parser:
    def __init__(self, tokens, coords, constants):
        self.tokens = tokens
        self.pos = 0
        self.coords = {name: i for i, name in enumerate(coords)}
        self.constants = constants

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, text, off = self.peek()
        if kind != "op" or text != op:
            raise ExprSyntaxError(f"expected '{op}'", off)
        return self.advance()

    def parse(self):
        node = self.expr()
        kind, text, off = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected '{text}'", off)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = BinOp(text, node, self.term())
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = BinOp(text, node, self.unary())
            else:
                return node

    def unary(self):
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self):
        node = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            node = BinOp("^", node, self.unary())
        return node

    def atom(self):
        kind, text, off = self.advance()
        if kind == "num":
            return Num(float(text))
        if kind == "ident":
            if text in FUNCTION_NAMES:
                nk, nt, noff = self.peek()
                if nk != "op" or nt != "(":
                    raise ExprSyntaxError(f"function '{text}' requires parentheses", noff)
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            if text in self.coords:
                return Var(self.coords[text], text)
            if text in self.constants:
                return Const(text, float(self.constants[text]))
            raise ExprNameError(text, off)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExprSyntaxError(f"unexpected '{text or 'end of input'}'", off)


# ---------------------------------------------------------------------------
# Printing and symbolic derivative
# ---------------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _fmt_num(x):
    return repr(float(x))  # shortest round-tripping decimal


def to_source(node, parent_prec=0):
    if isinstance(node, Num):
        s = _fmt_num(node.value)
        if node.value < 0 and parent_prec > 0:
            return f"({s})"
        return s
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        s = "-" + to_source(node.arg, _PREC["neg"])
        return f"({s})" if parent_prec > _PREC["neg"] else s
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        if node.op == "^":
            # right-associative; exponent re-enters at unary level
            s = f"{to_source(node.left, p + 1)}^{to_source(node.right, p)}"
        else:
            # left-associative: right child needs strictly higher binding
            s = f"{to_source(node.left, p)}{node.op}{to_source(node.right, p + 1)}"
        return f"({s})" if parent_prec > p else s
    raise AssertionError(node)


def _int_exponent(node):
    """Return the exponent as int when it is a syntactic integer literal."""
    if isinstance(node, Num) and float(node.value).is_integer():
        return int(node.value)
    if isinstance(node, Neg):
        k = _int_exponent(node.arg)
        if k is not None:
            return -k
    return None


_ZERO = Num(0.0)
_ONE = Num(1.0)


def _is_zero(node):
    return isinstance(node, Num) and node.value == 0.0


def _d(node, i):
    """Symbolic partial derivative d(node)/d(coord i).  No simplification
    beyond dropping terms with a literal zero factor."""
    if isinstance(node, (Num, Const)):
        return _ZERO
    if isinstance(node, Var):
        return _ONE if node.index == i else _ZERO
    if isinstance(node, Neg):
        da = _d(node.arg, i)
        return _ZERO if _is_zero(da) else Neg(da)
    if isinstance(node, BinOp):
        da, db = _d(node.left, i), _d(node.right, i)
        if node.op in "+-":
            if _is_zero(da) and _is_zero(db):
                return _ZERO
            if _is_zero(db):
                return da if node.op == "+" else da
            if _is_zero(da):
                return db if node.op == "+" else Neg(db)
            return BinOp(node.op, da, db)
        if node.op == "*":
            terms = []
            if not _is_zero(da):
                terms.append(BinOp("*", da, node.right))
            if not _is_zero(db):
                terms.append(BinOp("*", node.left, db))
            if not terms:
                return _ZERO
            return terms[0] if len(terms) == 1 else BinOp("+", terms[0], terms[1])
        if node.op == "/":
            # (a/b)' = a'/b - a*b'/b^2
            terms = []
            if not _is_zero(da):
                terms.append(BinOp("/", da, node.right))
            if not _is_zero(db):
                terms.append(Neg(BinOp("/", BinOp("*", node.left, db),
                                       BinOp("^", node.right, Num(2.0)))))
            if not terms:
                return _ZERO
            return terms[0] if len(terms) == 1 else BinOp("+", terms[0], terms[1])
        if node.op == "^":
            k = _int_exponent(node.right)
            if k is not None:
                if _is_zero(da):
                    return _ZERO
                if k == 0:
                    return _ZERO
                body = BinOp("*", Num(float(k)), BinOp("^", node.left, Num(float(k - 1))))
                return BinOp("*", body, da)
            # a^b = exp(b ln a):  (a^b)' = a^b (b' ln a + b a'/a)
            pieces = []
            if not _is_zero(db):
                pieces.append(BinOp("*", db, Call("ln", node.left)))
            if not _is_zero(da):
                pieces.append(BinOp("/", BinOp("*", node.right, da), node.left))
            if not pieces:
                return _ZERO
            inner = pieces[0] if len(pieces) == 1 else BinOp("+", pieces[0], pieces[1])
            return BinOp("*", node, inner)
    if isinstance(node, Call):
        da = _d(node.arg, i)
        if _is_zero(da):
            return _ZERO
        u = node.arg
        table = {
            "sin": lambda: Call("cos", u),
            "cos": lambda: Neg(Call("sin", u)),
            "tan": lambda: BinOp("/", _ONE, BinOp("^", Call("cos", u), Num(2.0))),
            "exp": lambda: Call("exp", u),
            "ln": lambda: BinOp("/", _ONE, u),
            "sqrt": lambda: BinOp("/", Num(0.5), Call("sqrt", u)),
            "sinh": lambda: Call("cosh", u),
            "cosh": lambda: Call("sinh", u),
            "tanh": lambda: BinOp("-", _ONE, BinOp("^", Call("tanh", u), Num(2.0))),
            "abs": lambda: BinOp("/", u, Call("abs", u)),
        }
        return BinOp("*", table[node.func](), da)
    raise AssertionError(node)


# ---------------------------------------------------------------------------
# Public expression object
# ---------------------------------------------------------------------------


class Expr:
    """Immutable parsed expression over named coordinates.

    Safe to share between threads: evaluation walks the AST without touching
    any shared mutable state.
    """

    __slots__ = ("root", "coords", "source")

    def __init__(self, root, coords, source=None):
        self.root = root
        self.coords = tuple(coords)
        self.source = source if source is not None else to_source(root)

    def __repr__(self):
        return f"Expr({self.source!r})"

    def jet(self, point):
        """Evaluate value/gradient/Hessian at ``point`` (shape (n,) or batch (..., n))."""
        point = np.asarray(point, dtype=float)
        n = len(self.coords)
        if point.shape[-1] != n:
            raise ExprError(f"point has {point.shape[-1]} components, expected {n}")
        coord_jets = [Jet2.coordinate(point[..., i], i, n) for i in range(n)]
        jet = self._eval(self.root, coord_jets, point)
        if not np.all(np.isfinite(jet.value)) or not np.all(np.isfinite(jet.grad)) \
                or not np.all(np.isfinite(jet.hess)):
            raise ExprDomainError("non-finite result", self.source, point)
        return jet

    def value(self, point):
        return self.jet(point).value

    def __call__(self, point):
        return self.jet(point).value

    def derivative(self, i):
        """Exact symbolic partial derivative with respect to coordinate i."""
        return Expr(_d(self.root, i), self.coords)

    def _eval(self, node, coord_jets, point):
        if isinstance(node, Num):
            return Jet2.constant(node.value, len(self.coords), point.shape[:-1])
        if isinstance(node, Const):
            return Jet2.constant(node.value, len(self.coords), point.shape[:-1])
        if isinstance(node, Var):
            return coord_jets[node.index]
        if isinstance(node, Neg):
            return -self._eval(node.arg, coord_jets, point)
        if isinstance(node, BinOp):
            a = self._eval(node.left, coord_jets, point)
            if node.op == "^":
                k = _int_exponent(node.right)
                if k is not None:
                    if k < 0 and np.any(a.value == 0.0):
                        raise ExprDomainError("zero base with negative exponent",
                                              to_source(node), point)
                    return a.ipow(k)
                b = self._eval(node.right, coord_jets, point)
                if np.any(a.value <= 0.0):
                    raise ExprDomainError("non-integer power of non-positive base",
                                          to_source(node), point)
                return _jet_call("exp", b * _jet_call("ln", a, node, point), node, point)
            b = self._eval(node.right, coord_jets, point)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            if node.op == "/":
                if np.any(b.value == 0.0):
                    raise ExprDomainError("division by zero", to_source(node), point)
                return a / b
        if isinstance(node, Call):
            u = self._eval(node.arg, coord_jets, point)
            return _jet_call(node.func, u, node, point)
        raise AssertionError(node)


def parse_expr(source, coords, constants=None):
    """Parse ``source`` over the named coordinates and constants.

    Raises ExprSyntaxError (with byte offset) on malformed input and
    ExprNameError on identifiers that are neither coordinates nor constants.
    """
    if not source or not source.strip():
        raise ExprSyntaxError("empty expression", 0)
    constants = dict(constants or {})
    for name in tuple(coords) + tuple(constants):
        if name in FUNCTION_NAMES:
            raise ExprError(f"name '{name}' collides with a built-in function")
    tokens = _tokenize(source)
    root = _Parser(tokens, coords, constants).parse()
    return Expr(root, coords, source)


def eval_jet2(expr, point):
    """Value, gradient and Hessian of ``expr`` at ``point`` by Taylor arithmetic."""
    return expr.jet(point)
