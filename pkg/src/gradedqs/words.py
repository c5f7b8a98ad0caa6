"""Words in elementary generators and the constructive factorizations built
from them.

Nothing here decides membership in the elementary subgroup of an arbitrary
matrix.  Every "is elementary" conclusion is carried by an explicit
:class:`ElemWord` or by a :class:`Witness` whose product has been checked
against its target.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from .errors import (
    NotInCongruenceSubgroup,
    OrthogonalityViolation,
    ParseError,
    PreconditionError,
    StructuralError,
)
from .matrices import (
    GroupCase,
    MatrixG,
    inner_product,
    is_in_G,
    is_level_plus,
    m_of,
    sigma,
    unit_vector,
)
from .poly import GradedPoly


@dataclass(frozen=True)
class ElemGen:
    """One elementary generator ge_ij(arg), indices 1-based.

    Build with :meth:`make`, which validates and canonicalizes (i, j) so the
    stored pair always matches one of the defining patterns.
    """

    case: GroupCase
    n: int
    i: int
    j: int
    arg: GradedPoly

    @classmethod
    def make(cls, case, n: int, i: int, j: int, arg) -> "ElemGen":
        case = GroupCase.parse(case)
        case.check_size(n)
        if not (1 <= i <= n and 1 <= j <= n) or i == j:
            raise StructuralError(f"bad generator indices ({i}, {j}) for n={n}")
        if case is GroupCase.LINEAR:
            return cls(case, n, i, j, arg)
        if case is GroupCase.SYMPLECTIC:
            if i == sigma(j) or i < j:
                return cls(case, n, i, j, arg)
            # se_ij(z) with i > j equals se_{s(j) s(i)}(-(-1)^(i+j) z)
            sign = -1 if (i + j) % 2 == 0 else 1
            return cls(case, n, sigma(j), sigma(i), arg if sign == 1 else -arg)
        if i == sigma(j):
            raise StructuralError(f"orthogonal generators need i != sigma(j), got ({i}, {j})")
        if i < j:
            return cls(case, n, i, j, arg)
        # oe_ij(z) with i > j equals oe_{s(j) s(i)}(-z)
        return cls(case, n, sigma(j), sigma(i), -arg)

    def with_arg(self, arg) -> "ElemGen":
        return ElemGen(self.case, self.n, self.i, self.j, arg)

    def inverse(self) -> "ElemGen":
        return self.with_arg(-self.arg)

    def positions(self) -> List[Tuple[int, int, int]]:
        """(row, col, sign) of the off-identity entries, 1-based; value = sign * arg."""
        i, j = self.i, self.j
        if self.case is GroupCase.LINEAR:
            return [(i, j, 1)]
        if self.case is GroupCase.SYMPLECTIC:
            if i == sigma(j):
                return [(i, j, 1)]
            return [(i, j, 1), (sigma(j), sigma(i), 1 if (i + j) % 2 else -1)]
        return [(i, j, 1), (sigma(j), sigma(i), -1)]

    def matrix(self) -> MatrixG:
        rows = [list(r) for r in MatrixG.identity(self.n, self.arg).rows]
        for r, c, sgn in self.positions():
            rows[r - 1][c - 1] = rows[r - 1][c - 1] + (self.arg if sgn == 1 else -self.arg)
        return self.arg.matrix_type()._raw(tuple(tuple(r) for r in rows))

    def __str__(self):
        name = {"linear": "E", "symplectic": "se", "orthogonal": "oe"}[self.case.value]
        return f"{name}{self.i},{self.j}({self.arg})"

    def to_json(self) -> dict:
        return {"i": self.i, "j": self.j, "arg": self.arg.to_json()}


def gen_matrix(g: ElemGen) -> MatrixG:
    return g.matrix()


@dataclass(frozen=True)
class ElemWord:
    case: GroupCase
    n: int
    gens: Tuple[ElemGen, ...] = ()
    like: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        for g in self.gens:
            if g.case is not self.case or g.n != self.n:
                raise StructuralError("word mixes generators of different cases or sizes")
        if self.like is None:
            if not self.gens:
                raise StructuralError("an empty word needs a ring template (like=...)")
            object.__setattr__(self, "like", self.gens[0].arg)

    @classmethod
    def of(cls, gens: Sequence[ElemGen], like=None) -> "ElemWord":
        gens = tuple(gens)
        if not gens:
            raise StructuralError("use ElemWord.empty for the empty word")
        return cls(gens[0].case, gens[0].n, gens, gens[0].arg if like is None else like)

    @classmethod
    def empty(cls, case, n: int, like) -> "ElemWord":
        return cls(GroupCase.parse(case), n, (), like)

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __add__(self, other: "ElemWord") -> "ElemWord":
        if other.case is not self.case or other.n != self.n:
            raise StructuralError("cannot concatenate words of different cases or sizes")
        return ElemWord(self.case, self.n, self.gens + other.gens, self.like)

    def _replace(self, gens) -> "ElemWord":
        return ElemWord(self.case, self.n, tuple(gens), self.like)

    def evaluate(self) -> MatrixG:
        # right-multiplying by I + z e_rc adds z * (column r) to column c
        n = self.n
        cols = [list(c) for c in MatrixG.identity(n, self.like).transpose().rows]
        for g in self.gens:
            if g.arg.is_zero():
                continue
            for r, c, sgn in g.positions():
                z = g.arg if sgn == 1 else -g.arg
                src = cols[r - 1]
                dst = cols[c - 1]
                for k in range(n):
                    if not src[k].is_zero():
                        dst[k] = dst[k] + src[k] * z
        return self.like.matrix_type()._raw(tuple(zip(*cols)))

    def inverse(self) -> "ElemWord":
        return self._replace(g.inverse() for g in reversed(self.gens))

    def conjugate(self, by: "ElemWord") -> "ElemWord":
        """by * self * by^-1 as a word."""
        return by + self + by.inverse()

    def plus_eval(self, t) -> "ElemWord":
        return self._replace(g.with_arg(g.arg.plus_eval(t)) for g in self.gens)

    def map_args(self, fn) -> "ElemWord":
        gens = [g.with_arg(fn(g.arg)) for g in self.gens]
        return ElemWord(self.case, self.n, tuple(gens), gens[0].arg if gens else fn(self.like))

    def __str__(self):
        return " * ".join(str(g) for g in self.gens) or f"I_{self.n}"

    def to_json(self) -> dict:
        return {"case": self.case.value, "n": self.n, "gens": [g.to_json() for g in self.gens]}

    @classmethod
    def from_json(cls, data: dict, like: GradedPoly | None = None) -> "ElemWord":
        try:
            case = GroupCase.parse(data["case"])
            n = int(data["n"])
            gens = [
                ElemGen.make(case, n, int(g["i"]), int(g["j"]), _arg_from_json(g["arg"], like))
                for g in data["gens"]
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed word JSON: {exc}") from exc
        if not gens:
            if like is None:
                raise ParseError("empty word JSON needs ring information")
            return cls.empty(case, n, like)
        return cls(case, n, tuple(gens), gens[0].arg)


def _arg_from_json(arg, like):
    if isinstance(arg, dict):
        return GradedPoly.from_json(arg)
    if isinstance(arg, str) and like is not None:
        return GradedPoly.parse(arg, like.ring, like.nvars)
    raise ParseError(f"cannot read generator argument {arg!r}")


def word_eval(w: ElemWord) -> MatrixG:
    return w.evaluate()


def word_inverse(w: ElemWord) -> ElemWord:
    return w.inverse()


def word_conjugate(w: ElemWord, by: ElemWord) -> ElemWord:
    return w.conjugate(by)


def word_plus_eval(w: ElemWord, t) -> ElemWord:
    return w.plus_eval(t)


# ---------------------------------------------------------------------------
# witnesses


@dataclass(frozen=True)
class Witness:
    """A factorization ``target = factors[0] * factors[1] * ...``."""

    target: MatrixG
    factors: Tuple[Tuple[str, MatrixG], ...]
    checked: bool
    words: Tuple[Tuple[str, ElemWord], ...] = ()
    info: dict = field(default_factory=dict, compare=False)

    def product(self) -> MatrixG:
        out = MatrixG.identity(self.target.n, self.target.like)
        for _, m in self.factors:
            out = out * m
        return out

    def verify(self) -> bool:
        return self.product() == self.target

    def matrices(self) -> List[MatrixG]:
        return [m for _, m in self.factors]

    def to_json(self) -> dict:
        out = {
            "target": self.target.to_json(),
            "factors": [{"label": lab, "matrix": m.to_json()} for lab, m in self.factors],
            "checked": self.checked,
        }
        if self.words:
            out["words"] = [{"label": lab, "word": w.to_json()} for lab, w in self.words]
        return out


def make_witness(target: MatrixG, factors, words=(), info=None) -> Witness:
    """Build a witness and check it; a failing check is a bug, not an input error."""
    factors = tuple((lab, m) for lab, m in factors)
    w = Witness(target, factors, False, tuple(words), dict(info or {}))
    if not w.verify():
        raise AssertionError("witness product does not reproduce its target")
    return Witness(target, factors, True, tuple(words), dict(info or {}))


# ---------------------------------------------------------------------------
# splitting, rearrangement, normalization


def split_word(w: ElemWord) -> ElemWord:
    """ge(a) -> ge(a_0) ge(a_+) for every generator."""
    gens = []
    for g in w.gens:
        a0 = g.arg.plus_eval(0)
        gens.append(g.with_arg(a0))
        gens.append(g.with_arg(g.arg - a0))
    return w._replace(gens)


def rearrange_product(pairs: Sequence[Tuple[MatrixG, MatrixG]]) -> Witness:
    """prod a_i b_i = (prod J_i b_i J_i^-1)(prod a_i) with J_k = a_1 ... a_k."""
    pairs = list(pairs)
    if not pairs:
        raise StructuralError("need at least one pair")
    n, like = pairs[0][0].n, pairs[0][0].like
    target = MatrixG.identity(n, like)
    for a, b in pairs:
        target = target * a * b
    conj, tail = [], []
    j = MatrixG.identity(n, like)
    j_inv = j
    for k, (a, b) in enumerate(pairs, 1):
        j = j * a
        j_inv = a.inverse() * j_inv
        conj.append((f"J{k} b{k} J{k}^-1", j * b * j_inv))
        tail.append((f"a{k}", a))
    return make_witness(target, conj + tail)


@dataclass(frozen=True)
class ConjugatedWord:
    """prod_k eps_k ge(core_k) eps_k^-1 with degree-zero conjugators and cores in A_+."""

    pairs: Tuple[Tuple[ElemWord, ElemGen], ...]
    residual: ElemWord
    n: int
    like: object = field(compare=False, repr=False, default=None)

    def factors(self) -> List[Tuple[str, MatrixG]]:
        out = []
        for k, (eps, core) in enumerate(self.pairs, 1):
            out.append((f"eps{k} {core} eps{k}^-1", eps.evaluate() * core.matrix() * eps.inverse().evaluate()))
        return out

    def as_word(self) -> ElemWord:
        word = ElemWord.empty(self.residual.case, self.n, self.like)
        for eps, core in self.pairs:
            word = word + eps + ElemWord.of([core]) + eps.inverse()
        return word

    def evaluate(self) -> MatrixG:
        return self.as_word().evaluate()


def normalize_mod_plus(w: ElemWord) -> ConjugatedWord:
    """Rewrite a word whose value is congruent to I mod A_+ as a product of
    degree-zero conjugates of generators with arguments in A_+."""
    w.case.check_size(w.n, lemma=True)
    alpha = w.evaluate()
    if not is_level_plus(alpha):
        raise NotInCongruenceSubgroup("word does not evaluate to I modulo A_+")
    prefix: List[ElemGen] = []
    pairs = []
    for g in w.gens:
        a0 = g.arg.plus_eval(0)
        if not a0.is_zero():
            prefix.append(g.with_arg(a0))
        core = g.with_arg(g.arg - a0)
        if core.arg.is_zero():
            continue
        pairs.append((w._replace(prefix), core))
    residual = w._replace(prefix)
    if not residual.evaluate().is_identity():
        raise AssertionError("degree-zero residual is not the identity")
    out = ConjugatedWord(tuple(pairs), residual, w.n, w.like)
    if out.evaluate() != alpha:
        raise AssertionError("conjugated form does not reproduce the word")
    return out


# ---------------------------------------------------------------------------
# transvections I + M(v, w)


def transvection_word(case, w: Sequence, lemma: bool = True) -> ElemWord:
    """A word evaluating to I + M(e_1, w); needs <e_1, w> = 0."""
    case = GroupCase.parse(case)
    w = tuple(w)
    n = len(w)
    case.check_size(n, lemma=lemma)
    like = w[0]
    e1 = unit_vector(n, 1, like)
    if not inner_product(case, e1, w).is_zero():
        raise OrthogonalityViolation("<e_1, w> must vanish")
    target = MatrixG.identity(n, like) + m_of(case, e1, w)
    gens: List[ElemGen] = []
    if case is GroupCase.LINEAR:
        gens = [ElemGen.make(case, n, 1, j, w[j - 1]) for j in range(2, n + 1)]
    else:
        if not is_in_G(case, target):
            raise OrthogonalityViolation(
                "I + M(e_1, w) is not in the group; w must also be isotropic"
            )
        correction = like.zero()
        for k in range(2, n // 2 + 1):
            odd, even = w[2 * k - 2], w[2 * k - 1]
            if case is GroupCase.SYMPLECTIC:
                gens.append(ElemGen.make(case, n, 1, 2 * k, odd))
                gens.append(ElemGen.make(case, n, 1, 2 * k - 1, -even))
            else:
                gens.append(ElemGen.make(case, n, 1, 2 * k, odd))
                gens.append(ElemGen.make(case, n, 1, 2 * k - 1, even))
            correction = correction + odd * even
        if case is GroupCase.SYMPLECTIC:
            # the pairs above leave sum w_{2k-1} w_{2k} in position (1, 2)
            gens.append(ElemGen.make(case, n, 1, 2, w[0] + w[0] - correction))
    gens = [g for g in gens if not g.arg.is_zero()]
    word = ElemWord(case, n, tuple(gens), like)
    if word.evaluate() != target:
        raise AssertionError("transvection word does not evaluate to I + M(e_1, w)")
    return word


def transvection_word_conj(eps: ElemWord, w: Sequence, lemma: bool = True) -> Witness:
    """Witness I + M(v, w) = eps (I + M(e_1, w')) eps^-1 for v = eps e_1."""
    case, n = eps.case, eps.n
    w = tuple(w)
    if len(w) != n:
        raise StructuralError("vector length mismatch")
    g = eps.evaluate()
    g_inv_word = eps.inverse()
    g_inv = g_inv_word.evaluate()
    v = g.column(1)
    if not inner_product(case, v, w).is_zero():
        raise OrthogonalityViolation("<v, w> must vanish")
    if case is GroupCase.LINEAR:
        w_t = g.transpose().apply(w)
    else:
        w_t = g_inv.apply(w)
    core = transvection_word(case, w_t, lemma=lemma)
    target = MatrixG.identity(n, eps.like) + m_of(case, v, w)
    return make_witness(
        target,
        [("eps", g), ("I + M(e1, w')", core.evaluate()), ("eps^-1", g_inv)],
        words=[("eps", eps), ("I + M(e1, w')", core), ("eps^-1", g_inv_word)],
        info={"transported": w_t},
    )


# ---------------------------------------------------------------------------
# commutators


def commutator(a: MatrixG, b: MatrixG) -> MatrixG:
    return a * b * a.inverse() * b.inverse()


def commutator_factor(alpha: MatrixG, beta: MatrixG, alpha0_word: ElemWord, beta0_word: ElemWord) -> Witness:
    """[alpha, beta] = [a, b] * (three elementary tails), a = alpha alpha+(0)^-1."""
    one = alpha.one_entry()
    if alpha.det() != one or beta.det() != one:
        raise PreconditionError("commutator_factor needs determinant-one inputs")
    a0, b0 = alpha.plus_eval(0), beta.plus_eval(0)
    if alpha0_word.evaluate() != a0 or beta0_word.evaluate() != b0:
        raise PreconditionError("supplied words do not evaluate to the degree-zero parts")
    a0_inv = alpha0_word.inverse().evaluate()
    b0_inv = beta0_word.inverse().evaluate()
    a = alpha * a0_inv
    b = beta * b0_inv
    a_inv, b_inv = a.inverse(), b.inverse()
    target = alpha * beta * alpha.inverse() * beta.inverse()
    factors = [
        ("a b a^-1 b^-1", a * b * a_inv * b_inv),
        ("b a b^-1 alpha0 b a^-1 b^-1", b * a * b_inv * a0 * b * a_inv * b_inv),
        ("b a beta0 alpha0^-1 a^-1 b^-1", b * a * b0 * a0_inv * a_inv * b_inv),
        ("b beta0^-1 b^-1", b * b0_inv * b_inv),
    ]
    return make_witness(
        target,
        factors,
        words=[("alpha0", alpha0_word), ("beta0", beta0_word)],
        info={"a": a, "b": b},
    )


def _level_part(m: MatrixG) -> MatrixG:
    return m * m.plus_eval(0).inverse()


def commutator_normal_form(comms: Sequence[Tuple[MatrixG, MatrixG]], eps: ElemWord | None = None) -> Witness:
    """prod [a_k, b_k] * eps = (prod [beta_k, gamma_k]) * residual, where
    beta_k = a_k a_k+(0)^-1, gamma_k = b_k b_k+(0)^-1 and residual+(0) = I."""
    comms = list(comms)
    if not comms:
        raise StructuralError("need at least one commutator")
    n, like = comms[0][0].n, comms[0][0].like
    eps_m = eps.evaluate() if eps is not None else MatrixG.identity(n, like)
    one = like.one()
    alpha = MatrixG.identity(n, like)
    for a, b in comms:
        if a.det() != one or b.det() != one:
            raise PreconditionError("commutator entries must have determinant one")
        alpha = alpha * commutator(a, b)
    alpha = alpha * eps_m
    if not is_level_plus(alpha):
        raise NotInCongruenceSubgroup("assembled product is not I modulo A_+")
    normalized, tails = [], []
    for a, b in comms:
        beta, gamma = _level_part(a), _level_part(b)
        normalized.append((beta, gamma))
        tails.append(commutator(beta, gamma).inverse() * commutator(a, b))
    # prod x_k y_k = (prod x_k) * prod_k (L_k^-1 y_k L_k),  L_k = x_{k+1} ... x_t
    xs = [commutator(beta, gamma) for beta, gamma in normalized]
    factors = [(f"[beta{k}, gamma{k}]", x) for k, x in enumerate(xs, 1)]
    suffix = MatrixG.identity(n, like)
    moved = []
    for k in range(len(xs) - 1, -1, -1):
        moved.append((f"L{k + 1}^-1 tail{k + 1} L{k + 1}", suffix.inverse() * tails[k] * suffix))
        suffix = xs[k] * suffix
    moved.reverse()
    factors += moved
    factors.append(("eps", eps_m))
    residual = MatrixG.identity(n, like)
    for _, m in moved:
        residual = residual * m
    residual = residual * eps_m
    if not is_level_plus(residual):
        raise AssertionError("normal-form residual is not I modulo A_+")
    return make_witness(
        alpha,
        factors,
        info={"pairs": normalized, "residual": residual},
    )
