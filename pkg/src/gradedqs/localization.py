"""Localization at a degree-zero element, dilation, and Local-Global patching.

An element of A_s is stored as ``num / s^k`` with ``num`` a polynomial over
the coefficient ring and ``k`` as small as possible.  Over a field every
nonzero ``s`` is a unit, so ``k`` is always 0 there and localization does
nothing; all the interesting cases live over ZZ.

Dilation replaces a matrix a over A_s (with a+(0) = I) by a+(s^l); each
degree-d term gains a factor s^(l d), so for l large enough every
denominator clears and the matrix pulls back to A.  Patching glues such
local information through a partition of unity b_1 + ... + b_r = 1 with
b_i in (s_i^l_i):

    a = a+(b_1 + ... + b_r) = prod_i a+(b_i + ... + b_r) a+(b_(i+1) + ... + b_r)^-1
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    BadLocalData,
    DenominatorNotCleared,
    NotComaximal,
    NotInCongruenceSubgroup,
    NotInvertible,
    NotUnimodular,
    ParseError,
    PreconditionError,
    StructuralError,
)
from .matrices import GroupCase, MatrixG, det_is_unit, is_in_G, is_level_plus
from .poly import GradedPoly
from .rings import GF, QQ, ZZ, CoefficientRing
from .words import ElemGen, ElemWord, commutator


def _s_value(s, ring: CoefficientRing):
    if isinstance(s, GradedPoly):
        if not s.is_constant():
            raise PreconditionError(f"localizing element {s} is not of degree zero")
        s = s.constant_term()
    try:
        s = ring.coerce(s)
    except StructuralError as exc:
        raise PreconditionError(f"cannot localize at {s!r}") from exc
    if ring.reduce(s) == 0:
        raise PreconditionError("cannot localize at zero")
    return s


def _unit_part_free(c: int, s: int) -> int:
    """Strip from |c| every prime factor it shares with s."""
    c = abs(c)
    g = gcd(c, s)
    while g > 1:
        c //= g
        g = gcd(c, s)
    return c


def _power_exponent(den: int, s: int) -> Optional[int]:
    """Least j with den | s^j, or None."""
    if _unit_part_free(den, s) != 1:
        return None
    j, q = 0, 1
    while q % den:
        q *= s
        j += 1
    return j


class LocalizedPoly:
    """num / s^k in A_s, kept normalized (s never divides num when k > 0)."""

    __slots__ = ("s", "num", "k", "_hash")

    def __init__(self, s, num: GradedPoly, k: int = 0):
        if k < 0:
            raise StructuralError("denominator exponent must be nonnegative")
        s = _s_value(s, num.ring)
        num, k = _normalize(s, num, k)
        self.s, self.num, self.k = s, num, k
        self._hash = None

    @classmethod
    def _raw(cls, s, num, k):
        obj = cls.__new__(cls)
        obj.s, obj.num, obj.k = s, num, k
        obj._hash = None
        return obj

    def _make(self, num, k):
        num, k = _normalize(self.s, num, k)
        return LocalizedPoly._raw(self.s, num, k)

    # -- ring plumbing ----------------------------------------------------------------
    @property
    def ring(self) -> CoefficientRing:
        return self.num.ring

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def zero(self) -> "LocalizedPoly":
        return LocalizedPoly._raw(self.s, self.num.zero(), 0)

    def one(self) -> "LocalizedPoly":
        return LocalizedPoly._raw(self.s, self.num.one(), 0)

    def matrix_type(self):
        return LocalizedMatrix

    def from_graded(self, p: GradedPoly) -> "LocalizedPoly":
        return self._make(p, 0)

    def scalar(self, c) -> "LocalizedPoly":
        """The constant c, which must lie in A_s (its denominator divides a power of s)."""
        ring = self.ring
        if isinstance(c, Fraction) and c.denominator != 1 and ring.kind == "int":
            j = _power_exponent(c.denominator, self.s)
            if j is None:
                raise StructuralError(f"{c} is not an element of the localization at {self.s}")
            return self._make(self.num.scalar(c * self.s ** j), j)
        return self._make(self.num.scalar(c), 0)

    def _lift(self, other) -> "LocalizedPoly":
        if isinstance(other, LocalizedPoly):
            if other.s != self.s or other.ring != self.ring or other.nvars != self.nvars:
                raise StructuralError("localized elements live in different rings")
            return other
        if isinstance(other, GradedPoly):
            self.num._check(other)
            return self._make(other, 0)
        if isinstance(other, (int, Fraction)):
            return self.scalar(other)
        return NotImplemented

    # -- inspection -----------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    @property
    def nterms(self) -> int:
        return self.num.nterms

    def degree(self) -> int:
        return self.num.degree()

    def is_constant(self) -> bool:
        return self.num.is_constant()

    def constant_value(self):
        c = self.num.constant_value()
        if self.k == 0:
            return c
        return Fraction(c, self.s ** self.k)

    def is_unit(self) -> bool:
        if not self.num.is_constant() or self.num.is_zero():
            return False
        c = self.num.constant_term()
        if self.ring.is_field:
            return True
        return _unit_part_free(c, self.s) == 1

    def inverse(self) -> "LocalizedPoly":
        """Inverse of a unit of A_s."""
        if not self.is_unit():
            raise NotInvertible(f"{self} is not a unit of the localization")
        c = self.num.constant_term()
        if self.ring.is_field:
            return self._make(self.num.scalar(self.ring.inv(c)), 0)
        j = _power_exponent(abs(c), self.s)
        sign = 1 if c > 0 else -1
        # s^k / c = (s^k * s^j / |c|) / s^j
        return self._make(self.num.scalar(sign * self.s ** (self.k + j) // abs(c)), j)

    def pullback(self) -> GradedPoly:
        """The element of A this localizes from; fails while a denominator remains."""
        if self.k:
            raise DenominatorNotCleared(f"{self} still has denominator {self.s}^{self.k}")
        return self.num

    # -- arithmetic -----------------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        k = max(self.k, other.k)
        a = self.num if self.k == k else self.num.scale(self.s ** (k - self.k))
        b = other.num if other.k == k else other.num.scale(self.s ** (k - other.k))
        return self._make(a + b, k)

    __radd__ = __add__

    def __neg__(self):
        return LocalizedPoly._raw(self.s, -self.num, self.k)

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
        return self._make(self.num * other.num, self.k + other.k)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return self._make(self.num ** e, self.k * e)

    # -- grading ----------------------------------------------------------------------
    def homogeneous_component(self, i: int) -> "LocalizedPoly":
        return self._make(self.num.homogeneous_component(i), self.k)

    def plus_eval(self, t) -> "LocalizedPoly":
        if isinstance(t, LocalizedPoly):
            if not t.is_constant():
                raise PreconditionError(f"{t} is not a degree-zero element")
            t = t.constant_value()
        if isinstance(t, GradedPoly):
            t = t.constant_value()
        if isinstance(t, Fraction) and t.denominator != 1 and self.ring.kind == "int":
            tl = self.scalar(t)
            out = self.zero()
            for d, part in self.num.grade_decompose():
                out = out + self._make(part, self.k) * tl ** d
            return out
        return self._make(self.num.plus_eval(t), self.k)

    # -- comparison and output -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LocalizedPoly):
            return self.s == other.s and self.k == other.k and self.num == other.num
        if isinstance(other, (GradedPoly, int, Fraction)):
            try:
                return self == self._lift(other)
            except StructuralError:
                return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.s, self.k, self.num))
        return self._hash

    def __str__(self):
        if self.k == 0:
            return str(self.num)
        den = f"{self.s}" if self.k == 1 else f"{self.s}^{self.k}"
        body = str(self.num)
        if self.num.nterms > 1:
            body = f"({body})"
        return f"{body}/{den}"

    def __repr__(self):
        return f"LocalizedPoly('{self}')"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "s": str(self.s), "k": self.k}

    @classmethod
    def from_json(cls, data: dict) -> "LocalizedPoly":
        try:
            num = GradedPoly.from_json(data["num"])
            return cls(Fraction(data["s"]), num, int(data["k"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed localized polynomial JSON: {exc}") from exc


def _normalize(s, num: GradedPoly, k: int):
    if num.is_zero():
        return num, 0
    ring = num.ring
    if k == 0:
        return num, 0
    if ring.is_field or s in (1, -1):
        return num.scale(ring.inv(ring.coerce(s)) ** k if ring.kind != "fp" else pow(s, -k, ring.p)), 0
    terms = dict(num.items())
    while k > 0 and all(c % s == 0 for c in terms.values()):
        terms = {e: c // s for e, c in terms.items()}
        k -= 1
    return GradedPoly._raw(ring, num.nvars, terms), k


class LocalizedMatrix(MatrixG):
    """Square matrix over A_s; all entries share s."""

    __slots__ = ()

    @property
    def s(self):
        return self.like.s

    def common_denominator(self) -> int:
        """Largest denominator exponent over all entries."""
        return max(e.k for r in self.rows for e in r)

    def numerator_matrix(self) -> Tuple[MatrixG, int]:
        """(N, K) with self = N / s^K."""
        kk = self.common_denominator()
        s = self.s
        rows = [[e.num if e.k == kk else e.num.scale(s ** (kk - e.k)) for e in r] for r in self.rows]
        return MatrixG._raw(tuple(tuple(r) for r in rows)), kk

    def det(self, method: str = "bareiss"):
        num, kk = self.numerator_matrix()
        return self.like._make(num.det(method), self.n * kk)

    def pullback(self) -> MatrixG:
        return MatrixG._raw(tuple(tuple(e.pullback() for e in r) for r in self.rows))

    def __repr__(self):
        return f"LocalizedMatrix({self})"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "s": str(self.s),
            "entries": [[{"num": e.num.to_json(), "k": e.k} for e in r] for r in self.rows],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LocalizedMatrix":
        try:
            s = Fraction(data["s"])
            rows = [
                [LocalizedPoly(s, GradedPoly.from_json(e["num"]), int(e["k"])) for e in r]
                for r in data["entries"]
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed localized matrix JSON: {exc}") from exc
        return cls(rows)


# ---------------------------------------------------------------------------
# localization maps


def localize(p, s) -> LocalizedPoly:
    """The image of p in A_s."""
    if isinstance(p, LocalizedPoly):
        return p
    return LocalizedPoly(s, p, 0)


def localize_matrix(a: MatrixG, s) -> LocalizedMatrix:
    if isinstance(a, LocalizedMatrix):
        if a.s != _s_value(s, a.like.ring):
            raise StructuralError("matrix is already localized at a different element")
        return a
    like = localize(a.like, s)
    return LocalizedMatrix._raw(tuple(tuple(like.from_graded(e) for e in r) for r in a.rows))


def localize_word(w: ElemWord, s) -> ElemWord:
    return w.map_args(lambda z: localize(z, s)) if w.gens else ElemWord.empty(w.case, w.n, localize(w.like, s))


def loc_arith(a: LocalizedPoly, b: LocalizedPoly | None, op: str) -> LocalizedPoly:
    """op in add | sub | mul | inverse (b unused for inverse)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "inverse":
        return a.inverse()
    raise ValueError(f"unknown operation {op!r}")


def injectivity_check(a: MatrixG, b: MatrixG, s) -> bool:
    """Whether localizing at s separates a and b exactly when they differ.

    Over our domains localization at s != 0 is injective, so equal images with
    different sources would be an arithmetic bug and raise.
    """
    if a.n != b.n:
        raise StructuralError("matrices of different sizes")
    same_local = localize_matrix(a, s) == localize_matrix(b, s)
    same = a == b
    if same_local and not same:
        raise AssertionError("localization identified two different matrices")
    return same_local == same


# ---------------------------------------------------------------------------
# dilation


def _term_exponent(c: int, d: int, k: int, s: int) -> Optional[int]:
    """Least l with s^k | c * s^(l d); None if no l works."""
    if k == 0:
        return 0
    target = s ** k
    if c % target == 0:
        return 0
    if d == 0:
        return None
    l, val = 0, c
    step = s ** d
    while val % target:
        l += 1
        val *= step
    return l


def dilation_exponent(a: LocalizedMatrix) -> int:
    """Minimal l such that a+(s^l) has no denominators left."""
    if not is_level_plus(a):
        raise NotInCongruenceSubgroup("dilation needs a+(0) = I over the localization")
    s = a.s
    best = 0
    for r in a.rows:
        for e in r:
            if e.k == 0:
                continue
            for exp, c in e.num.items():
                l = _term_exponent(c, sum(exp), e.k, s)
                if l is None:
                    raise NotInCongruenceSubgroup("a degree-zero denominator cannot be dilated away")
                best = max(best, l)
    return best


def dilate_pullback(a: LocalizedMatrix, l: int) -> MatrixG:
    """The matrix over A whose localization is a+(s^l)."""
    if l < 0:
        raise PreconditionError("dilation exponent must be nonnegative")
    if not is_level_plus(a):
        raise NotInCongruenceSubgroup("dilation needs a+(0) = I over the localization")
    dilated = a.plus_eval(a.s ** l)
    beta = dilated.pullback()
    if localize_matrix(beta, a.s) != dilated:
        raise AssertionError("pullback does not re-localize to the dilated matrix")
    return beta


def dilate_difference(a: LocalizedMatrix, b, d, a_inv: LocalizedMatrix | None = None) -> MatrixG:
    """Pullback of a+(b + d) a+(d)^-1 to A."""
    if not is_level_plus(a):
        raise NotInCongruenceSubgroup("dilation needs a+(0) = I over the localization")
    if a_inv is None:
        a_inv = a.inverse()
    prod = a.plus_eval(b + d) * a_inv.plus_eval(d)
    beta = prod.pullback()
    if localize_matrix(beta, a.s) != prod:
        raise AssertionError("pullback does not re-localize to the dilated difference")
    return beta


def difference_bound(a: LocalizedMatrix) -> int:
    """An exponent l for which a+(b + d) a+(d)^-1 pulls back whenever b is in (s^l).

    a+(b+d) - a+(d) is divisible by b, and a+(d)^-1 = (a^-1)+(d) has
    denominators at most s^K', so K + K' always suffices.
    """
    return a.common_denominator() + a.inverse().common_denominator()


# ---------------------------------------------------------------------------
# partitions of unity


def _egcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


@dataclass(frozen=True)
class ComaximalData:
    """b_i = c_i s_i^l_i with b_1 + ... + b_r = 1."""

    elements: Tuple
    exponents: Tuple[int, ...]
    multipliers: Tuple
    ring: CoefficientRing = ZZ

    def __post_init__(self):
        r = len(self.elements)
        if not r or len(self.exponents) != r or len(self.multipliers) != r:
            raise StructuralError("comaximal data needs matching nonempty lists")
        if self.ring.reduce(sum(self.combined) - 1) != 0:
            raise NotComaximal("partition of unity does not sum to 1")

    @property
    def combined(self) -> Tuple:
        return tuple(
            self.ring.reduce(c * s ** l)
            for s, l, c in zip(self.elements, self.exponents, self.multipliers)
        )

    def partial_sums(self) -> Tuple:
        """t_i = b_i + ... + b_r for i = 1..r, followed by t_(r+1) = 0."""
        out = [self.ring.zero]
        for b in reversed(self.combined):
            out.append(self.ring.reduce(out[-1] + b))
        return tuple(reversed(out))

    def to_json(self) -> List[dict]:
        return [
            {"s": str(s), "l": l, "c": str(c)}
            for s, l, c in zip(self.elements, self.exponents, self.multipliers)
        ]


def comaximal_powers(s_list: Sequence, l_list: Sequence[int], ring: CoefficientRing = ZZ) -> ComaximalData:
    """Multipliers c_i with sum c_i s_i^l_i = 1 (extended gcd over ZZ)."""
    s_list = [_s_value(s, ring) for s in s_list]
    l_list = [int(l) for l in l_list]
    if len(s_list) != len(l_list) or not s_list:
        raise StructuralError("need one exponent per element")
    if any(l < 0 for l in l_list):
        raise PreconditionError("exponents must be nonnegative")
    powers = [ring.reduce(s ** l) for s, l in zip(s_list, l_list)]
    if ring.is_field:
        mult = [ring.inv(powers[0])] + [ring.zero] * (len(powers) - 1)
        return ComaximalData(tuple(s_list), tuple(l_list), tuple(mult), ring)
    g, mult = powers[0], [1]
    for q in powers[1:]:
        g, x, y = _egcd(g, q)
        mult = [c * x for c in mult] + [y]
    if g < 0:
        g, mult = -g, [-c for c in mult]
    if g != 1:
        raise NotComaximal(f"{s_list} generate the ideal ({g}), not the unit ideal")
    return ComaximalData(tuple(s_list), tuple(l_list), tuple(mult), ring)


# ---------------------------------------------------------------------------
# telescoping patch


@dataclass(frozen=True)
class PatchWitness:
    """a = F_1 F_2 ... F_r, F_i = a+(t_i) a+(t_(i+1))^-1, t_i = b_i + ... + b_r."""

    target: MatrixG
    comaximal: ComaximalData
    b_partials: Tuple
    factors: Tuple[MatrixG, ...]
    certificates: Tuple[dict, ...]
    checked: bool

    def product(self) -> MatrixG:
        out = MatrixG.identity(self.target.n, self.target.like)
        for f in self.factors:
            out = out * f
        return out

    def verify(self) -> bool:
        return self.product() == self.target

    def to_json(self) -> dict:
        factors = []
        for f, cert in zip(self.factors, self.certificates):
            item = {"matrix": f.to_json()}
            if cert:
                item["certificate"] = cert
            factors.append(item)
        return {
            "target": self.target.to_json(),
            "b": self.comaximal.to_json(),
            "factors": factors,
            "checked": self.checked,
        }


def _check_patch_target(a: MatrixG):
    if not is_level_plus(a):
        raise NotInCongruenceSubgroup("patching needs a+(0) = I")
    if not det_is_unit(a):
        raise NotInvertible("patching needs an invertible matrix")


def _telescope(a: MatrixG, cd: ComaximalData):
    a_inv = a.inverse()
    t = cd.partial_sums()
    if t[0] != cd.ring.one:
        raise NotComaximal("partial sums do not start at 1")
    factors = tuple(a.plus_eval(t[i]) * a_inv.plus_eval(t[i + 1]) for i in range(len(cd.elements)))
    return t, factors


def word_exponent(w: ElemWord) -> int:
    """Largest denominator exponent among the arguments of a word over A_s."""
    return max((g.arg.k for g in w.gens), default=0)


def _conjugate_certificate(word: ElemWord, b, d, f_loc: LocalizedMatrix) -> List[dict]:
    """F = prod_k J_k ge(delta_k) J_k^-1 over A_s, with J_k the first k
    generators of the word evaluated at d and delta_k = z_k+(b+d) - z_k+(d)
    pulled back to A."""
    prefix: List[ElemGen] = []
    total = ElemWord.empty(word.case, word.n, word.like)
    items = []
    for g in word.gens:
        z_d = g.arg.plus_eval(d)
        delta = g.arg.plus_eval(b + d) - z_d
        prefix.append(g.with_arg(z_d))
        if delta.is_zero():
            continue
        core = g.with_arg(delta.pullback())
        conj = word._replace(prefix)
        total = total + conj + ElemWord.of([g.with_arg(delta)]) + conj.inverse()
        items.append({"conjugator": conj.to_json(), "generator": core.to_json()})
    if total.evaluate() != f_loc:
        raise AssertionError("conjugate factorization does not reproduce the factor")
    return items


def telescoping_patch(a: MatrixG, cd: ComaximalData, local_words: Sequence[ElemWord] | None = None) -> PatchWitness:
    """Telescoping factorization of a over a partition of unity.

    Each factor F_i is re-localized at s_i and compared with the dilated form
    a_s+(t_i) a_s+(t_(i+1))^-1 computed inside A_(s_i).  When a word for a over
    A_(s_i) is supplied, the factor also gets a conjugate factorization whose
    generator arguments have been pulled back to A.
    """
    _check_patch_target(a)
    if local_words is not None and len(local_words) != len(cd.elements):
        raise StructuralError("need one local word per localizing element")
    t, factors = _telescope(a, cd)
    certs = []
    for i, (s, f) in enumerate(zip(cd.elements, factors)):
        a_s = localize_matrix(a, s)
        f_loc = localize_matrix(f, s)
        dilated = a_s.plus_eval(t[i]) * a_s.inverse().plus_eval(t[i + 1])
        cert = {"s": str(s), "dilated_form_match": f_loc == dilated}
        if not cert["dilated_form_match"]:
            raise AssertionError("re-localized factor disagrees with its dilated form")
        if local_words is not None and local_words[i] is not None:
            w = local_words[i]
            if w.evaluate() != a_s:
                raise BadLocalData(f"local word at {s} does not evaluate to the localized matrix")
            cert["conjugates"] = _conjugate_certificate(w, cd.combined[i], t[i + 1], f_loc)
        certs.append(cert)
    out = PatchWitness(a, cd, t, factors, tuple(certs), False)
    if not out.verify():
        raise AssertionError("telescoping product does not reproduce the target")
    return PatchWitness(a, cd, t, factors, tuple(certs), True)


def patch_with_words(a: MatrixG, local_words: Sequence[ElemWord], exponents: Sequence[int] | None = None) -> PatchWitness:
    """telescoping_patch with exponents chosen so every conjugate core pulls back."""
    s_list = [w.like.s for w in local_words]
    if exponents is None:
        exponents = [max(1, word_exponent(w)) for w in local_words]
    cd = comaximal_powers(s_list, exponents, a.like.ring)
    return telescoping_patch(a, cd, local_words)


# ---------------------------------------------------------------------------
# commutator patch


@dataclass(frozen=True)
class LocalCommutatorData:
    """a_s = [beta_1, gamma_1] ... [beta_t, gamma_t] eps over A_s, all factors level."""

    s: object
    pairs: Tuple[Tuple[LocalizedMatrix, LocalizedMatrix], ...]
    eps: LocalizedMatrix

    def product(self) -> LocalizedMatrix:
        out = MatrixG.identity(self.eps.n, self.eps.like)
        for beta, gamma in self.pairs:
            out = out * commutator(beta, gamma)
        return out * self.eps

    def matrices(self) -> List[LocalizedMatrix]:
        return [m for pair in self.pairs for m in pair] + [self.eps]


def _commutator_expansion(data: LocalCommutatorData, inverses, b, d):
    """Factors of C_1(b+d) ... C_t(b+d) eps+(b+d) eps+(d)^-1 C_t(d)^-1 ... C_1(d)^-1."""
    bd = b + d
    out = []
    inv = dict(inverses)
    for k, (beta, gamma) in enumerate(data.pairs, 1):
        bi, gi = inv[id(beta)], inv[id(gamma)]
        out.append(
            (f"[beta{k}+(b+d), gamma{k}+(b+d)]",
             beta.plus_eval(bd) * gamma.plus_eval(bd) * bi.plus_eval(bd) * gi.plus_eval(bd))
        )
    out.append(("eps+(b+d) eps+(d)^-1", data.eps.plus_eval(bd) * inv[id(data.eps)].plus_eval(d)))
    for k in range(len(data.pairs), 0, -1):
        beta, gamma = data.pairs[k - 1]
        bi, gi = inv[id(beta)], inv[id(gamma)]
        out.append(
            (f"[beta{k}+(d), gamma{k}+(d)]^-1",
             gamma.plus_eval(d) * beta.plus_eval(d) * gi.plus_eval(d) * bi.plus_eval(d))
        )
    return out


def _differences_pull_back(mats, inverses, b, d) -> Optional[List[MatrixG]]:
    inv = dict(inverses)
    out = []
    for m in mats:
        prod = m.plus_eval(b + d) * inv[id(m)].plus_eval(d)
        try:
            out.append(prod.pullback())
        except DenominatorNotCleared:
            return None
    return out


def commutator_patch(
    a: MatrixG,
    local_data: Sequence[LocalCommutatorData],
    exponents: Sequence[int] | None = None,
    max_exponent: int = 64,
) -> PatchWitness:
    """Telescoping patch whose factors are expanded into dilated commutators.

    Without explicit exponents, each l_i starts at 1 and is raised until the
    dilated differences beta+(b+d) beta+(d)^-1 (and likewise for gamma and
    eps) all pull back to A.
    """
    one = a.one_entry()
    if a.det() != one:
        raise PreconditionError("commutator patching needs determinant one")
    _check_patch_target(a)
    if not local_data:
        raise StructuralError("need local data for at least one element")
    ring = a.like.ring
    inverses = []
    for data in local_data:
        a_s = localize_matrix(a, data.s)
        for m in data.matrices():
            if not isinstance(m, LocalizedMatrix) or m.s != a_s.s:
                raise BadLocalData("local factors must be matrices over the same localization")
            if not is_level_plus(m):
                raise BadLocalData("local factors must be congruent to I modulo A_+")
        if data.product() != a_s:
            raise BadLocalData(f"local decomposition at {data.s} does not evaluate to the localized matrix")
        inverses.append([(id(m), m.inverse()) for m in data.matrices()])
    s_list = [data.s for data in local_data]
    fixed = exponents is not None
    ls = list(exponents) if fixed else [1] * len(local_data)
    while True:
        cd = comaximal_powers(s_list, ls, ring)
        t = cd.partial_sums()
        bumped = False
        pulled = []
        for i, data in enumerate(local_data):
            diffs = _differences_pull_back(data.matrices(), inverses[i], cd.combined[i], t[i + 1])
            if diffs is None:
                if fixed:
                    raise DenominatorNotCleared(f"exponent {ls[i]} too small at {data.s}")
                ls[i] += 1
                bumped = True
                if ls[i] > max_exponent:
                    raise DenominatorNotCleared(f"no exponent up to {max_exponent} clears denominators at {data.s}")
            pulled.append(diffs)
        if not bumped:
            break
    t, factors = _telescope(a, cd)
    certs = []
    for i, (data, f) in enumerate(zip(local_data, factors)):
        f_loc = localize_matrix(f, data.s)
        expansion = _commutator_expansion(data, inverses[i], cd.combined[i], t[i + 1])
        prod = MatrixG.identity(a.n, f_loc.like)
        for _, m in expansion:
            prod = prod * m
        if prod != f_loc:
            raise AssertionError("commutator expansion does not reproduce the telescoping factor")
        certs.append({
            "s": str(data.s),
            "expansion": [{"label": lab, "matrix": m.to_json()} for lab, m in expansion],
            "pulled_back_differences": [m.to_json() for m in pulled[i]],
            "expansion_match": True,
        })
    out = PatchWitness(a, cd, t, factors, tuple(certs), False)
    if not out.verify():
        raise AssertionError("telescoping product does not reproduce the target")
    return PatchWitness(a, cd, t, factors, tuple(certs), True)


# ---------------------------------------------------------------------------
# unimodular completion over local and semilocal instances


@dataclass(frozen=True)
class PrimeField:
    p: int

    @property
    def coefficients(self) -> CoefficientRing:
        return GF(self.p)

    def reduce(self, x):
        return Fraction(x) % self.p if isinstance(x, Fraction) else x % self.p

    def is_unit(self, x) -> bool:
        return self.reduce(x) != 0

    def inv(self, x):
        return pow(int(self.reduce(x)), -1, self.p)


@dataclass(frozen=True)
class ResidueRing:
    """ZZ / (p^k): local with maximal ideal (p); elements are ints mod p^k."""

    p: int
    k: int = 1

    @property
    def modulus(self) -> int:
        return self.p ** self.k

    @property
    def coefficients(self) -> CoefficientRing:
        return GF(self.p) if self.k == 1 else ZZ

    def reduce(self, x):
        return int(x) % self.modulus

    def is_unit(self, x) -> bool:
        return self.reduce(x) % self.p != 0

    def inv(self, x):
        return pow(self.reduce(x), -1, self.modulus)


@dataclass(frozen=True)
class LocalIntegers:
    """ZZ localized at the prime ideal (p): fractions with denominator prime to p."""

    p: int

    @property
    def coefficients(self) -> CoefficientRing:
        return QQ

    def reduce(self, x):
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise StructuralError(f"{x} is not in ZZ localized at {self.p}")
        return x

    def is_unit(self, x) -> bool:
        return self.reduce(x).numerator % self.p != 0

    def inv(self, x):
        return 1 / self.reduce(x)


def _instance(instance):
    if isinstance(instance, CoefficientRing):
        if instance.kind != "fp":
            raise PreconditionError("completion needs a field, ZZ/(p^k) or a local ring")
        return PrimeField(instance.p)
    return instance


def row_times_word(v: Sequence, word: ElemWord, instance) -> Tuple:
    """v * word_eval(word) for a row vector, reduced in the instance ring."""
    inst = _instance(instance)
    out = [inst.reduce(x) for x in v]
    for g in word.gens:
        for r, c, sgn in g.positions():
            z = g.arg.constant_value()
            out[c - 1] = inst.reduce(out[c - 1] + sgn * out[r - 1] * z)
    return tuple(out)


def complete_unimodular(v: Sequence, instance) -> ElemWord:
    """An elementary word eps with v * eps = (1, 0, ..., 0).

    In a local ring a unimodular row has a unit coordinate.  Using a unit at
    an index j >= 2 we set v_1 = 1 with one column operation; if only v_1 is a
    unit we first make v_2 = 1.  Then the remaining coordinates are cleared.
    """
    inst = _instance(instance)
    v = [inst.reduce(x) for x in v]
    n = len(v)
    if n < 2:
        raise StructuralError("completion needs a row of length at least 2")
    coeffs = inst.coefficients
    like = GradedPoly.constant(coeffs, 0, 0)
    gens: List[ElemGen] = []
    cur = list(v)

    def op(i, j, lam):
        lam = inst.reduce(lam)
        if lam == 0:
            return
        gens.append(ElemGen.make(GroupCase.LINEAR, n, i, j, like.scalar(lam)))
        cur[j - 1] = inst.reduce(cur[j - 1] + cur[i - 1] * lam)

    units = [j for j in range(n) if inst.is_unit(cur[j])]
    if not units:
        raise NotUnimodular(f"{tuple(v)} has no unit coordinate over {inst}")
    if cur[0] != 1:
        later = [j for j in units if j >= 1]
        if later:
            u = later[0]
        else:
            op(1, 2, (1 - cur[1]) * inst.inv(cur[0]))
            u = 1
        op(u + 1, 1, (1 - cur[0]) * inst.inv(cur[u]))
    for j in range(2, n + 1):
        op(1, j, -cur[j - 1])
    word = ElemWord(GroupCase.LINEAR, n, tuple(gens), like)
    e1 = tuple(inst.reduce(int(i == 0)) for i in range(n))
    if row_times_word(v, word, inst) != e1:
        raise AssertionError("completion word does not send v to e_1")
    return word
