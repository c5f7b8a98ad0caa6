"""Exact sparse polynomials over ZZ, QQ or GF(p), graded by total degree.

A polynomial in ``k`` variables is a mapping from exponent tuples (length
``k``) to nonzero coefficients.  The degree-``i`` part of the grading is the
span of the monomials of total degree ``i``; the degree-zero part is the
coefficient ring itself.

  2 + 3*x + x^2   ->  {(0,): 2, (1,): 3, (2,): 1}

The zero polynomial has no terms but still remembers its ring and arity.
Instances are immutable; all arithmetic returns new objects.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Tuple

from .errors import ParseError, PreconditionError, StructuralError
from .rings import QQ, ZZ, CoefficientRing, Scalar

Exponent = Tuple[int, ...]


def _grlex_key(e: Exponent):
    return (sum(e), e)


class GradedPoly:
    __slots__ = ("ring", "nvars", "_terms", "_hash")

    def __init__(self, ring: CoefficientRing, nvars: int, terms: Mapping = ()):
        if nvars < 0:
            raise StructuralError("number of variables must be nonnegative")
        clean: Dict[Exponent, Scalar] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, c in items:
            exp = tuple(int(x) for x in exp)
            if len(exp) != nvars or any(x < 0 for x in exp):
                raise StructuralError(f"exponent {exp} does not fit {nvars} variables")
            c = ring.coerce(c)
            c = clean.get(exp, ring.zero) + c
            clean[exp] = ring.reduce(c)
        self.ring = ring
        self.nvars = nvars
        self._terms = {e: c for e, c in clean.items() if c != 0}
        self._hash = None

    @classmethod
    def _raw(cls, ring, nvars, terms):
        # trusted constructor: coefficients already reduced and nonzero
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.nvars = nvars
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors ---------------------------------------------------------
    @classmethod
    def constant(cls, ring: CoefficientRing, nvars: int, c=0) -> "GradedPoly":
        return cls(ring, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, ring: CoefficientRing, nvars: int, index: int) -> "GradedPoly":
        if not 0 <= index < nvars:
            raise StructuralError(f"variable index {index} out of range for {nvars} variables")
        exp = [0] * nvars
        exp[index] = 1
        return cls._raw(ring, nvars, {tuple(exp): ring.one})

    @classmethod
    def parse(cls, text: str, ring: CoefficientRing = ZZ, nvars: int = 1) -> "GradedPoly":
        return _Parser(text, ring, nvars).parse()

    def zero(self) -> "GradedPoly":
        return GradedPoly._raw(self.ring, self.nvars, {})

    def one(self) -> "GradedPoly":
        return GradedPoly._raw(self.ring, self.nvars, {(0,) * self.nvars: self.ring.one})

    def matrix_type(self):
        from .matrices import MatrixG

        return MatrixG

    def scalar(self, c) -> "GradedPoly":
        """The constant ``c`` in the same ring as ``self``."""
        return GradedPoly.constant(self.ring, self.nvars, c)

    # -- inspection -----------------------------------------------------------
    @property
    def terms(self) -> Tuple[Tuple[Exponent, Scalar], ...]:
        """Terms sorted by total degree, then lexicographically descending."""
        return tuple(sorted(self._terms.items(), key=lambda t: (sum(t[0]), tuple(-x for x in t[0]))))

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def nterms(self) -> int:
        return len(self._terms)

    def is_unit(self) -> bool:
        return self.is_constant() and self.ring.is_unit(self.constant_term())

    def __bool__(self):
        return bool(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self._terms}
        if not degs:
            return True
        return len(degs) == 1 and (d is None or degs == {d})

    def constant_term(self) -> Scalar:
        return self._terms.get((0,) * self.nvars, self.ring.zero)

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise PreconditionError(f"{self} is not a degree-zero element")
        return self.constant_term()

    def coefficient(self, exp: Exponent) -> Scalar:
        return self._terms.get(tuple(exp), self.ring.zero)

    # -- ring structure -------------------------------------------------------
    def _check(self, other: "GradedPoly"):
        if self.ring != other.ring or self.nvars != other.nvars:
            raise StructuralError(
                f"ring mismatch: {self.ring}[{self.nvars} vars] vs {other.ring}[{other.nvars} vars]"
            )

    def _lift(self, other) -> "GradedPoly":
        if isinstance(other, GradedPoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = ring.reduce(out.get(e, 0) + c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return GradedPoly._raw(ring, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        ring = self.ring
        return GradedPoly._raw(ring, self.nvars, {e: ring.reduce(-c) for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return self.zero()
        ring = self.ring
        out: Dict[Exponent, Scalar] = {}
        get = out.get
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple([a + b for a, b in zip(e1, e2)])
                out[e] = get(e, 0) + c1 * c2
        if ring.kind == "fp":
            p = ring.p
            out = {e: c % p for e, c in out.items() if c % p}
        else:
            out = {e: c for e, c in out.items() if c}
        return GradedPoly._raw(ring, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        result, base = self.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "GradedPoly":
        c = self.ring.coerce(c)
        ring = self.ring
        out = {}
        for e, v in self._terms.items():
            v = ring.reduce(v * c)
            if v:
                out[e] = v
        return GradedPoly._raw(ring, self.nvars, out)

    def exact_div(self, other: "GradedPoly") -> "GradedPoly":
        """Quotient of an exact division; ArithmeticError if there is a remainder."""
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        ring = self.ring
        if other.is_constant():
            c = other.constant_term()
            out = {e: ring.exact_div(v, c) for e, v in self._terms.items()}
            return GradedPoly._raw(ring, self.nvars, out)
        lead_e = max(other._terms, key=_grlex_key)
        lead_c = other._terms[lead_e]
        rem = dict(self._terms)
        quot: Dict[Exponent, Scalar] = {}
        while rem:
            e = max(rem, key=_grlex_key)
            shift = tuple(a - b for a, b in zip(e, lead_e))
            if any(x < 0 for x in shift):
                raise ArithmeticError(f"{other} does not divide {self}")
            q = ring.exact_div(rem[e], lead_c)
            quot[shift] = q
            for oe, oc in other._terms.items():
                te = tuple(a + b for a, b in zip(oe, shift))
                v = ring.reduce(rem.get(te, 0) - q * oc)
                if v:
                    rem[te] = v
                else:
                    rem.pop(te, None)
        return GradedPoly._raw(ring, self.nvars, quot)

    def content(self) -> int:
        """gcd of the coefficients (integer polynomials only)."""
        from math import gcd

        g = 0
        for c in self._terms.values():
            g = gcd(g, int(c))
        return g

    # -- grading ----------------------------------------------------------------
    def homogeneous_component(self, i: int) -> "GradedPoly":
        return GradedPoly._raw(
            self.ring, self.nvars, {e: c for e, c in self._terms.items() if sum(e) == i}
        )

    def grade_decompose(self) -> "GradeDecomposition":
        parts: Dict[int, Dict[Exponent, Scalar]] = {}
        for e, c in self._terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return GradeDecomposition(
            tuple((d, GradedPoly._raw(self.ring, self.nvars, parts[d])) for d in sorted(parts))
        )

    def plus_eval(self, t) -> "GradedPoly":
        """b+(t) = sum_i b_i t^i for a degree-zero ``t``."""
        t = self._scalar_arg(t)
        ring = self.ring
        out = {}
        powers: Dict[int, Scalar] = {}
        for e, c in self._terms.items():
            d = sum(e)
            if d not in powers:
                powers[d] = pow(t, d, ring.p) if ring.kind == "fp" else t ** d
            v = ring.reduce(c * powers[d])
            if v:
                out[e] = v
        return GradedPoly._raw(ring, self.nvars, out)

    def _scalar_arg(self, t) -> Scalar:
        if isinstance(t, GradedPoly):
            self._check(t)
            if not t.is_constant():
                raise PreconditionError(f"{t} is not a degree-zero element")
            return t.constant_term()
        try:
            return self.ring.coerce(t)
        except (StructuralError, ParseError) as exc:
            raise PreconditionError(f"{t!r} is not a degree-zero element of {self.ring}") from exc

    def swan_weibel_extend(self) -> "GradedPoly":
        """epsilon(b) = b_0 + b_1 X + b_2 X^2 + ..., with X appended as the last variable."""
        return GradedPoly._raw(
            self.ring, self.nvars + 1, {e + (sum(e),): c for e, c in self._terms.items()}
        )

    def x_coefficients(self) -> Tuple["GradedPoly", ...]:
        """Split a polynomial in ``nvars`` variables by powers of the last variable."""
        if self.nvars == 0:
            raise StructuralError("no variable to split along")
        by_power: Dict[int, Dict[Exponent, Scalar]] = {}
        for e, c in self._terms.items():
            by_power.setdefault(e[-1], {})[e[:-1]] = c
        top = max(by_power, default=-1)
        return tuple(
            GradedPoly._raw(self.ring, self.nvars - 1, by_power.get(k, {})) for k in range(top + 1)
        )

    def specialize(self, index: int, value) -> "GradedPoly":
        """Substitute a scalar for variable ``index`` and drop that variable."""
        value = self.ring.coerce(value)
        ring = self.ring
        out: Dict[Exponent, Scalar] = {}
        for e, c in self._terms.items():
            ne = e[:index] + e[index + 1:]
            out[ne] = out.get(ne, 0) + c * value ** e[index]
        out = {e: ring.reduce(c) for e, c in out.items() if ring.reduce(c)}
        return GradedPoly._raw(ring, self.nvars - 1, out)

    # -- comparison, printing, serialization ------------------------------------
    def __eq__(self, other):
        if isinstance(other, GradedPoly):
            return self.ring == other.ring and self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == self.scalar(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.nvars, frozenset(self._terms.items())))
        return self._hash

    def var_names(self):
        return var_names(self.nvars)

    def __str__(self):
        if not self._terms:
            return "0"
        names = self.var_names()
        pieces = []
        for e, c in self.terms:
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k
            )
            neg = self.ring.kind != "fp" and c < 0
            mag = -c if neg else c
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            pieces.append(("-" if neg else "+", body))
        sign, body = pieces[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"GradedPoly({self.ring}, {self.nvars}, '{self}')"

    def to_json(self) -> dict:
        return {
            "ring": self.ring.spec,
            "num_vars": self.nvars,
            "terms": [[list(e), str(c)] for e, c in self.terms],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GradedPoly":
        try:
            ring = CoefficientRing.from_spec(data["ring"])
            return cls(ring, int(data["num_vars"]), [(tuple(e), c) for e, c in data["terms"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed polynomial JSON: {exc}") from exc


@dataclass(frozen=True)
class GradeDecomposition:
    parts: Tuple[Tuple[int, GradedPoly], ...]

    def __iter__(self) -> Iterator[Tuple[int, GradedPoly]]:
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def degrees(self):
        return [d for d, _ in self.parts]

    def reassemble(self, template: GradedPoly) -> GradedPoly:
        out = template.zero()
        for _, part in self.parts:
            out = out + part
        return out


def homogeneous_component(a: GradedPoly, i: int) -> GradedPoly:
    return a.homogeneous_component(i)


def grade_decompose(a: GradedPoly) -> GradeDecomposition:
    return a.grade_decompose()


def plus_eval(b: GradedPoly, t) -> GradedPoly:
    return b.plus_eval(t)


def swan_weibel_extend(b: GradedPoly) -> GradedPoly:
    return b.swan_weibel_extend()


def ring_arith(a: GradedPoly, b: GradedPoly, op: str) -> GradedPoly:
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def var_names(nvars: int):
    if nvars <= 3:
        return ["x", "y", "z"][:nvars]
    return [f"x{i + 1}" for i in range(nvars)]


# ---------------------------------------------------------------------------
# text grammar:  expr := term (('+'|'-') term)*
#                term := unary (('*'|'/') unary)*
#                unary := ('+'|'-') unary | power
#                power := atom ('^' INT)?
#                atom := INT | VAR | '(' expr ')'

_TOKEN = re.compile(r"\s*(?:(\d+)|(x\d+|[a-z]\w*)|(\*\*|[-+*/^()]))")


class _Parser:
    def __init__(self, text: str, ring: CoefficientRing, nvars: int):
        self.text = text
        self.ring = ring
        self.nvars = nvars
        self.tokens = self._tokenize(text)
        self.pos = 0
        self.aliases = {f"x{i + 1}": i for i in range(nvars)}
        if nvars <= 3:
            self.aliases.update({n: i for i, n in enumerate("xyz"[:nvars])})

    @staticmethod
    def _tokenize(text):
        tokens, pos = [], 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos:].strip()[:1]!r} in {text!r}")
            num, name, op = m.groups()
            if num is not None:
                tokens.append(("num", int(num)))
            elif name is not None:
                tokens.append(("var", name))
            else:
                tokens.append(("op", "^" if op == "**" else op))
            pos = m.end()
        return tokens

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self) -> GradedPoly:
        if not self.tokens:
            raise ParseError("empty polynomial")
        out = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input in {self.text!r}")
        return out

    def expr(self):
        out = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs
        return out

    def term(self):
        out = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                out = out * rhs
            else:
                if not rhs.is_constant() or rhs.is_zero():
                    raise ParseError(f"can only divide by nonzero constants in {self.text!r}")
                c = rhs.constant_term()
                if self.ring.kind == "int":
                    q = Fraction(1, c)
                    if q.denominator != 1:
                        raise ParseError(f"division by {c} leaves ZZ in {self.text!r}")
                    out = out.scale(q.numerator)
                    continue
                out = out.scale(self.ring.inv(c))
        return out

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be a nonnegative integer in {self.text!r}")
            return base ** val
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return GradedPoly.constant(self.ring, self.nvars, val)
        if kind == "var":
            if val not in self.aliases:
                raise ParseError(f"unknown variable {val!r} for {self.nvars} variables")
            return GradedPoly.variable(self.ring, self.nvars, self.aliases[val])
        if (kind, val) == ("op", "("):
            out = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError(f"unbalanced parentheses in {self.text!r}")
            return out
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def poly(text: str, ring: CoefficientRing = ZZ, nvars: int = 1) -> GradedPoly:
    """Shorthand for :meth:`GradedPoly.parse`."""
    return GradedPoly.parse(text, ring, nvars)


__all__ = [
    "GradedPoly",
    "GradeDecomposition",
    "homogeneous_component",
    "grade_decompose",
    "plus_eval",
    "swan_weibel_extend",
    "ring_arith",
    "poly",
    "QQ",
    "ZZ",
]
