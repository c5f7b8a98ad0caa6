"""Dense square matrices over graded polynomial rings, the standard forms
psi_m / psi~_m, and membership predicates for GL_n, Sp_2m and O_2m.

Entries are ring elements supporting ``+ - *``, ``zero()``/``one()``,
``plus_eval``, ``homogeneous_component``, ``degree`` and ``constant_value``.
:class:`~gradedqs.poly.GradedPoly` is the usual entry type;
:class:`~gradedqs.localization.LocalizedPoly` reuses the same machinery.

Indices in the public API (``sigma``, generators, unit vectors) are 1-based
to match the usual matrix notation; ``rows`` is a plain 0-based tuple.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import List, Sequence, Tuple

from .errors import NotInvertible, ParseError, PreconditionError, StructuralError
from .poly import GradedPoly
from .rings import ZZ, CoefficientRing

Vector = Tuple[GradedPoly, ...]


class GroupCase(enum.Enum):
    LINEAR = "linear"
    SYMPLECTIC = "symplectic"
    ORTHOGONAL = "orthogonal"

    @classmethod
    def parse(cls, text) -> "GroupCase":
        if isinstance(text, GroupCase):
            return text
        try:
            return cls(str(text).lower())
        except ValueError:
            raise ParseError(f"unknown group case {text!r}") from None

    @property
    def min_size(self) -> int:
        return 3 if self is GroupCase.LINEAR else 6

    def check_size(self, n: int, lemma: bool = False):
        if self is not GroupCase.LINEAR and n % 2:
            raise StructuralError(f"{self.value} case needs even size, got {n}")
        if lemma and n < self.min_size:
            raise PreconditionError(f"{self.value} lemma suites need n >= {self.min_size}, got {n}")


def _parent(e):
    return (type(e), e.ring, e.nvars, getattr(e, "s", None))


class MatrixG:
    """Immutable n x n matrix."""

    __slots__ = ("rows", "_hash")

    def __init__(self, rows: Sequence[Sequence]):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if n == 0:
            raise StructuralError("empty matrix")
        if any(len(r) != n for r in rows):
            raise StructuralError("matrix must be square")
        par = _parent(rows[0][0])
        for r in rows:
            for e in r:
                if _parent(e) != par:
                    raise StructuralError("matrix entries live in different rings")
        self.rows = rows
        self._hash = None

    @classmethod
    def _raw(cls, rows):
        obj = cls.__new__(cls)
        obj.rows = rows
        obj._hash = None
        return obj

    def _new(self, rows):
        return type(self)._raw(tuple(tuple(r) for r in rows))

    # -- constructors -----------------------------------------------------------
    @classmethod
    def identity(cls, n: int, like) -> "MatrixG":
        if cls is MatrixG:
            cls = like.matrix_type()
        zero, one = like.zero(), like.one()
        return cls._raw(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def from_ints(cls, rows, ring: CoefficientRing = ZZ, nvars: int = 1) -> "MatrixG":
        return cls([[GradedPoly.constant(ring, nvars, c) for c in r] for r in rows])

    @classmethod
    def parse(cls, text: str, ring: CoefficientRing = ZZ, nvars: int = 1) -> "MatrixG":
        """Rows separated by ``;``, entries by ``,``: ``"1, x; 0, 1"``."""
        rows = [r for r in text.split(";")]
        return cls([[GradedPoly.parse(e, ring, nvars) for e in r.split(",")] for r in rows])

    # -- inspection -------------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entry(self, i: int, j: int):
        """1-based access."""
        return self.rows[i - 1][j - 1]

    @property
    def like(self):
        return self.rows[0][0]

    def zero_entry(self):
        return self.like.zero()

    def one_entry(self):
        return self.like.one()

    def degree(self) -> int:
        return max(e.degree() for r in self.rows for e in r)

    def is_identity(self) -> bool:
        one = self.one_entry()
        return all(
            (e == one) if i == j else e.is_zero()
            for i, r in enumerate(self.rows)
            for j, e in enumerate(r)
        )

    def _check(self, other: "MatrixG"):
        if not isinstance(other, MatrixG) or other.n != self.n:
            raise StructuralError("matrix size mismatch")
        if _parent(self.like) != _parent(other.like):
            raise StructuralError("matrices live over different rings")

    # -- arithmetic ----------------------------------------------------------------
    def __add__(self, other: "MatrixG") -> "MatrixG":
        self._check(other)
        return self._new([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "MatrixG") -> "MatrixG":
        self._check(other)
        return self._new([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self._new([[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if not isinstance(other, MatrixG):
            return self._new([[a * other for a in r] for r in self.rows])
        self._check(other)
        n = self.n
        zero = self.zero_entry()
        brows = other.rows
        out = []
        for r in self.rows:
            acc = [zero] * n
            for k, a in enumerate(r):
                if a.is_zero():
                    continue
                bk = brows[k]
                for j in range(n):
                    b = bk[j]
                    if not b.is_zero():
                        acc[j] = acc[j] + a * b
            out.append(tuple(acc))
        return type(self)._raw(tuple(out))

    def __rmul__(self, other):
        return self._new([[other * a for a in r] for r in self.rows])

    def transpose(self) -> "MatrixG":
        return type(self)._raw(tuple(zip(*self.rows)))

    @property
    def T(self):
        return self.transpose()

    def map(self, fn) -> "MatrixG":
        return self._new([[fn(a) for a in r] for r in self.rows])

    def plus_eval(self, t) -> "MatrixG":
        return self.map(lambda a: a.plus_eval(t))

    def homogeneous_component(self, i: int) -> "MatrixG":
        return self.map(lambda a: a.homogeneous_component(i))

    def apply(self, v: Sequence) -> Vector:
        """Matrix times column vector."""
        if len(v) != self.n:
            raise StructuralError("vector length mismatch")
        zero = self.zero_entry()
        out = []
        for r in self.rows:
            acc = zero
            for a, b in zip(r, v):
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def column(self, j: int) -> Vector:
        """1-based column."""
        return tuple(r[j - 1] for r in self.rows)

    # -- determinant ----------------------------------------------------------------
    def det(self, method: str = "bareiss"):
        if method == "bareiss":
            return _det_bareiss(self.rows)
        if method == "cofactor":
            return _det_cofactor(self.rows)
        if method == "leibniz":
            return _det_leibniz(self.rows)
        raise ValueError(f"unknown determinant method {method!r}")

    def minor(self, i: int, j: int) -> "MatrixG":
        """Delete 0-based row i and column j."""
        return type(self)._raw(
            tuple(
                tuple(e for c, e in enumerate(r) if c != j)
                for k, r in enumerate(self.rows)
                if k != i
            )
        )

    def adjugate(self) -> "MatrixG":
        n = self.n
        if n == 1:
            return self._new([[self.one_entry()]])
        cof = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                d = self.minor(i, j).det()
                cof[j][i] = d if (i + j) % 2 == 0 else -d
        return self._new(cof)

    def inverse(self) -> "MatrixG":
        return _graded_inverse(self)

    # -- comparison & output ----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, MatrixG):
            return NotImplemented
        return type(self) is type(other) and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def __str__(self):
        return "[" + "; ".join(", ".join(str(e) for e in r) for r in self.rows) + "]"

    def __repr__(self):
        return f"MatrixG({self})"

    def to_json(self) -> dict:
        return {"n": self.n, "entries": [[e.to_json() for e in r] for r in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> "MatrixG":
        try:
            entries = data["entries"]
            m = cls([[GradedPoly.from_json(e) for e in r] for r in entries])
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed matrix JSON: {exc}") from exc
        if "n" in data and int(data["n"]) != m.n:
            raise ParseError("matrix JSON size field disagrees with entries")
        return m


# ---------------------------------------------------------------------------
# determinants


def _det_bareiss(rows):
    n = len(rows)
    like = rows[0][0]
    m = [list(r) for r in rows]
    sign = 1
    prev = like.one()
    for k in range(n - 1):
        candidates = [i for i in range(k, n) if not m[i][k].is_zero()]
        if not candidates:
            return like.zero()
        # constant pivots keep the exact divisions cheap
        piv = min(candidates, key=lambda i: (not m[i][k].is_constant(), m[i][k].nterms, i))
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        pk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            for j in range(k + 1, n):
                num = pk * m[i][j]
                if not mik.is_zero():
                    num = num - mik * m[k][j]
                m[i][j] = num.exact_div(prev)
        prev = pk
    return m[n - 1][n - 1] if sign == 1 else -m[n - 1][n - 1]


def _det_cofactor(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n > 6:
        raise ValueError("cofactor expansion is only meant for small matrices")
    total = rows[0][0].zero()
    for j, a in enumerate(rows[0]):
        if a.is_zero():
            continue
        sub = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * _det_cofactor(sub)
        total = total + term if j % 2 == 0 else total - term
    return total


def _perm_sign(p):
    sign, seen = 1, set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _det_leibniz(rows):
    n = len(rows)
    total = rows[0][0].zero()
    for p in permutations(range(n)):
        term = rows[0][0].one()
        for i in range(n):
            term = term * rows[i][p[i]]
            if term.is_zero():
                break
        if not term.is_zero():
            total = total + term if _perm_sign(p) == 1 else total - term
    return total


# ---------------------------------------------------------------------------
# inverse: invert the degree-zero block over the scalars, then solve for the
# homogeneous pieces of the inverse degree by degree.


def _scalar_matrix_inverse(mat: List[List], ring: CoefficientRing):
    n = len(mat)
    if ring.kind == "fp":
        p = ring.p
        a = [[x % p for x in r] + [int(i == j) for j in range(n)] for i, r in enumerate(mat)]
        for c in range(n):
            piv = next((r for r in range(c, n) if a[r][c]), None)
            if piv is None:
                raise NotInvertible("degree-zero part is singular")
            a[c], a[piv] = a[piv], a[c]
            inv = pow(a[c][c], -1, p)
            a[c] = [x * inv % p for x in a[c]]
            for r in range(n):
                if r != c and a[r][c]:
                    f = a[r][c]
                    a[r] = [(x - f * y) % p for x, y in zip(a[r], a[c])]
        return [r[n:] for r in a]
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(mat)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            raise NotInvertible("degree-zero part is singular")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [r[n:] for r in a]


def _graded_inverse(m: MatrixG) -> MatrixG:
    n = m.n
    like = m.like
    zero = like.zero()
    delta = max(m.degree(), 0)
    parts = [[[e.homogeneous_component(d) for e in r] for r in m.rows] for d in range(delta + 1)]
    scalars = [[e.constant_value() for e in r] for r in parts[0]]
    c_inv = _scalar_matrix_inverse(scalars, like.ring)
    try:
        c_ent = [[like.scalar(x) for x in r] for r in c_inv]
    except (StructuralError, ArithmeticError) as exc:
        raise NotInvertible(f"degree-zero part is not invertible over the coefficients: {exc}") from exc

    def mul(a, b):
        out = []
        for r in a:
            acc = [zero] * n
            for k, x in enumerate(r):
                if x.is_zero():
                    continue
                for j, y in enumerate(b[k]):
                    if not y.is_zero():
                        acc[j] = acc[j] + x * y
            out.append(acc)
        return out

    def is_zero(a):
        return all(x.is_zero() for r in a for x in r)

    pieces = [c_ent]
    bound = (n - 1) * delta
    zero_run = 0
    d = 0
    while delta and zero_run < delta:
        d += 1
        acc = [[zero] * n for _ in range(n)]
        for j in range(1, min(d, delta) + 1):
            if is_zero(parts[j]) or is_zero(pieces[d - j]):
                continue
            prod = mul(parts[j], pieces[d - j])
            acc = [[a + b for a, b in zip(r, s)] for r, s in zip(acc, prod)]
        piece = [[-x for x in r] for r in mul(c_ent, acc)]
        if is_zero(piece):
            zero_run += 1
        else:
            if d > bound:
                raise NotInvertible("determinant is not a unit (inverse would be a power series)")
            zero_run = 0
        pieces.append(piece)
    total = [[zero] * n for _ in range(n)]
    for piece in pieces:
        total = [[a + b for a, b in zip(r, s)] for r, s in zip(total, piece)]
    return m._new(total)


# ---------------------------------------------------------------------------
# forms


def sigma(i: int, n: int | None = None) -> int:
    """The pairing 2k-1 <-> 2k on 1-based indices."""
    if i < 1 or (n is not None and i > n):
        raise StructuralError(f"index {i} out of range 1..{n}")
    return i + 1 if i % 2 else i - 1


@dataclass(frozen=True)
class FormMatrix:
    m: int
    kind: str  # "psi" or "psi_tilde"
    matrix: MatrixG


_PSI1 = {"psi": ((0, 1), (-1, 0)), "psi_tilde": ((0, 1), (1, 0))}


def form(m: int, kind: str = "psi", ring: CoefficientRing = ZZ, nvars: int = 0) -> FormMatrix:
    """psi_m (alternating) or psi~_m (symmetric), as the orthogonal sum of m
    hyperbolic 2x2 blocks."""
    kind = {"psitilde": "psi_tilde", "psi~": "psi_tilde"}.get(kind.lower(), kind.lower())
    if kind not in _PSI1:
        raise StructuralError(f"unknown form kind {kind!r}")
    if m < 1:
        raise StructuralError("form size m must be >= 1")
    block = _PSI1[kind]
    n = 2 * m
    rows = [[0] * n for _ in range(n)]
    for k in range(m):
        for a in range(2):
            for b in range(2):
                rows[2 * k + a][2 * k + b] = block[a][b]
    return FormMatrix(m, kind, MatrixG.from_ints(rows, ring, nvars))


def form_for(case: GroupCase, n: int, like) -> MatrixG | None:
    case = GroupCase.parse(case)
    if case is GroupCase.LINEAR:
        return None
    case.check_size(n)
    kind = "psi" if case is GroupCase.SYMPLECTIC else "psi_tilde"
    f = form(n // 2, kind, like.ring, like.nvars).matrix
    if isinstance(like, GradedPoly):
        return f
    return like.matrix_type()._raw(tuple(tuple(like.from_graded(e) for e in r) for r in f.rows))


def unit_vector(n: int, i: int, like) -> Vector:
    """e_i (1-based) as a column vector."""
    zero, one = like.zero(), like.one()
    return tuple(one if k == i - 1 else zero for k in range(n))


def _row_times_matrix(v, f: MatrixG):
    # v^t F as a tuple
    return tuple(
        _dot(v, [f.rows[k][j] for k in range(f.n)]) for j in range(f.n)
    )


def _dot(v, w):
    acc = v[0].zero()
    for a, b in zip(v, w):
        if not a.is_zero() and not b.is_zero():
            acc = acc + a * b
    return acc


def inner_product(case: GroupCase, v: Sequence, w: Sequence):
    """<v, w>: v^t w, v^t psi w or v^t psi~ w."""
    case = GroupCase.parse(case)
    if len(v) != len(w):
        raise StructuralError("vector length mismatch")
    if case is GroupCase.LINEAR:
        return _dot(v, w)
    f = form_for(case, len(v), v[0])
    return _dot(_row_times_matrix(v, f), w)


def _outer(v, row):
    return [[a * b for b in row] for a in v]


def m_of(case: GroupCase, v: Sequence, w: Sequence) -> MatrixG:
    """M(v, w) = v w^t, v w~ + w v~ or v w~ - w v~  (u~ = u^t psi)."""
    case = GroupCase.parse(case)
    if len(v) != len(w):
        raise StructuralError("vector length mismatch")
    cls = v[0].matrix_type()
    if case is GroupCase.LINEAR:
        return cls(_outer(v, w))
    f = form_for(case, len(v), v[0])
    first = cls(_outer(v, _row_times_matrix(w, f)))
    second = cls(_outer(w, _row_times_matrix(v, f)))
    return first + second if case is GroupCase.SYMPLECTIC else first - second


# ---------------------------------------------------------------------------
# predicates


def det_is_unit(a: MatrixG) -> bool:
    d = a.det()
    return d.is_unit()


def preserves_form(case: GroupCase, a: MatrixG) -> bool:
    case = GroupCase.parse(case)
    if case is GroupCase.LINEAR:
        return True
    if a.n % 2:
        return False
    f = form_for(case, a.n, a.like)
    return a.T * f * a == f


def is_in_G(case: GroupCase, a: MatrixG) -> bool:
    case = GroupCase.parse(case)
    if case is GroupCase.LINEAR:
        return det_is_unit(a)
    # a^t F a = F forces det(a)^2 = 1 over a domain
    return preserves_form(case, a)


def is_in_S(case: GroupCase, a: MatrixG) -> bool:
    return is_in_G(case, a) and a.det() == a.one_entry()


def is_level_plus(a: MatrixG) -> bool:
    """a+(0) = I, i.e. a is the identity modulo the irrelevant ideal."""
    return a.plus_eval(0).is_identity()


def mat_plus_eval(a: MatrixG, t) -> MatrixG:
    return a.plus_eval(t)


def mat_transpose(a: MatrixG) -> MatrixG:
    return a.transpose()


def mat_arith(a: MatrixG, b: MatrixG, op: str) -> MatrixG:
    if op == "mul":
        return a * b
    if op == "add":
        return a + b
    raise ValueError(f"unknown operation {op!r}")


def det(a: MatrixG):
    return a.det()


def mat_inverse(a: MatrixG) -> MatrixG:
    return a.inverse()


def diagonal(values: Sequence, like) -> MatrixG:
    n = len(values)
    zero = like.zero()
    return like.matrix_type()._raw(
        tuple(tuple(like.scalar(values[i]) if i == j else zero for j in range(n)) for i in range(n))
    )


def block_diag(a: MatrixG, b: MatrixG) -> MatrixG:
    zero = a.zero_entry()
    n, m = a.n, b.n
    rows = [list(r) + [zero] * m for r in a.rows] + [[zero] * n + list(r) for r in b.rows]
    return type(a)(rows)
