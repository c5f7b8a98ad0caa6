"""Seeded verification suites, one per lemma-level property.

Each suite draws random inputs from a ``random.Random(seed)``, checks the
property exactly and records every failing trial.  A suite passes iff no
trial failed.  The registry maps suite names to functions so the CLI and the
acceptance tests share the same code path.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from .errors import DenominatorNotCleared, NotUnimodular
from .localization import (
    LocalCommutatorData,
    LocalizedPoly,
    PrimeField,
    ResidueRing,
    complete_unimodular,
    dilate_pullback,
    dilation_exponent,
    localize,
    localize_matrix,
    patch_with_words,
    row_times_word,
    commutator_patch,
)
from .matrices import (
    GroupCase,
    MatrixG,
    form,
    is_in_G,
    is_level_plus,
    preserves_form,
    sigma,
    unit_vector,
)
from .poly import GradedPoly
from .rings import GF, QQ, ZZ, CoefficientRing
from .sampling import (
    SampleBounds,
    generator_indices,
    inject_denominators,
    pick_primes,
    random_coeff,
    random_gen,
    random_level_word,
    random_local_level_word,
    random_matrix,
    random_poly,
    random_word,
)
from .words import (
    ElemGen,
    ElemWord,
    commutator_factor,
    commutator_normal_form,
    normalize_mod_plus,
    rearrange_product,
    transvection_word,
    transvection_word_conj,
)

DEFAULT_SEED = 0


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = DEFAULT_SEED
    trials: Optional[int] = None
    case: Optional[str] = None
    n: Optional[int] = None
    ring: Optional[CoefficientRing] = None
    nvars: Optional[int] = None
    primes: Optional[Tuple[int, ...]] = None
    dilation_exponent: Optional[int] = None
    bounds: SampleBounds = SampleBounds()

    def count(self, default: int) -> int:
        return default if self.trials is None else self.trials

    def configs(self, defaults):
        """(case, n) pairs: the defaults unless the caller pinned case and/or n."""
        if self.case is None and self.n is None:
            return list(defaults)
        if self.case is None:
            return [(c, n) for c, n in defaults if n == self.n] or [(c, self.n) for c, _ in defaults]
        case = GroupCase.parse(self.case)
        sizes = sorted({n for c, n in defaults if GroupCase.parse(c) is case}) or [case.min_size]
        return [(case.value, self.n)] if self.n is not None else [(case.value, n) for n in sizes]


@dataclass
class Report:
    suite: str
    trials: int = 0
    failures: List[dict] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def verdict(self) -> str:
        return "pass" if not self.failures else "fail"

    @property
    def passed(self) -> bool:
        return not self.failures

    def run(self, label, check: Callable[[], Optional[Tuple[str, str]]]):
        """Run one trial; ``check`` returns None or (expected, got)."""
        self.trials += 1
        try:
            bad = check()
        except Exception as exc:  # a crash is a failed trial, not a crashed suite
            bad = ("no exception", f"{type(exc).__name__}: {exc}")
        if bad is not None:
            expected, got = bad
            self.failures.append({"input": str(label), "expected": str(expected), "got": str(got)})

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "suite": self.suite,
            "trials": self.trials,
            "failures": self.failures,
            "verdict": self.verdict,
        }
        if timing:
            out["elapsed"] = round(self.elapsed, 4)
        return out


def _expect(cond: bool, expected: str, got) -> Optional[Tuple[str, str]]:
    return None if cond else (expected, got)


def _first_failure(*checks):
    for c in checks:
        if c is not None:
            return c
    return None


# ---------------------------------------------------------------------------
# suites


SPLIT_CONFIGS = [
    ("linear", 3), ("linear", 4), ("linear", 5),
    ("symplectic", 6), ("symplectic", 8),
    ("orthogonal", 6), ("orthogonal", 8),
]


def suite_splitting(cfg: SuiteConfig, rep: Report):
    rng = random.Random(cfg.seed)
    ring, nvars = cfg.ring or ZZ, cfg.nvars if cfg.nvars is not None else 2
    configs = cfg.configs(SPLIT_CONFIGS)
    for _ in range(cfg.count(200)):
        case, n = rng.choice(configs)
        i, j = _indices(rng, case, n)
        x = random_poly(rng, ring, nvars, cfg.bounds)
        y = random_poly(rng, ring, nvars, cfg.bounds)

        def check(case=case, n=n, i=i, j=j, x=x, y=y):
            lhs = ElemGen.make(case, n, i, j, x + y).matrix()
            rhs = ElemGen.make(case, n, i, j, x).matrix() * ElemGen.make(case, n, i, j, y).matrix()
            return _expect(lhs == rhs, lhs, rhs)

        rep.run((case, n, i, j, str(x), str(y)), check)


def _indices(rng, case, n):
    while True:
        i, j = rng.randint(1, n), rng.randint(1, n)
        if i != j and not (case == "orthogonal" and i == sigma(j)):
            return i, j


def suite_swan_weibel(cfg: SuiteConfig, rep: Report):
    rng = random.Random(cfg.seed)
    rings = [cfg.ring] if cfg.ring else [ZZ, QQ, GF(7)]
    nvars = cfg.nvars if cfg.nvars is not None else 2
    for ring in rings:
        for _ in range(cfg.count(100)):
            b = random_poly(rng, ring, nvars, cfg.bounds)
            c = random_poly(rng, ring, nvars, cfg.bounds)
            s = random_coeff(rng, ring)
            t = random_coeff(rng, ring)
            ma = random_matrix(rng, 4, ring, nvars, cfg.bounds) if rng.random() < 0.25 else None
            mb = random_matrix(rng, 4, ring, nvars, cfg.bounds) if ma is not None else None

            def check(ring=ring, b=b, c=c, s=s, t=t, ma=ma, mb=mb):
                bs = b.plus_eval(s)
                oracle = b.swan_weibel_extend().specialize(nvars, t)
                checks = [
                    _expect(bs.plus_eval(t) == b.plus_eval(ring.reduce(s * t)), "(b+(s))+(t) = b+(st)", bs.plus_eval(t)),
                    _expect(b.plus_eval(0) == b.homogeneous_component(0), "b+(0) = b_0", b.plus_eval(0)),
                    _expect(b.plus_eval(1) == b, "b+(1) = b", b.plus_eval(1)),
                    _expect(b.plus_eval(t) == oracle, "epsilon(b) at X = t", oracle),
                    _expect((b + c).plus_eval(t) == b.plus_eval(t) + c.plus_eval(t), "additive", (b + c).plus_eval(t)),
                    _expect((b * c).plus_eval(t) == b.plus_eval(t) * c.plus_eval(t), "multiplicative", (b * c).plus_eval(t)),
                    _expect(b.one().plus_eval(t) == b.one(), "unital", b.one().plus_eval(t)),
                ]
                if ma is not None:
                    lhs = (ma * mb).plus_eval(t)
                    checks.append(_expect(lhs == ma.plus_eval(t) * mb.plus_eval(t), "(AB)+(t) = A+(t) B+(t)", lhs))
                return _first_failure(*checks)

            rep.run((ring.spec, str(b), str(c), s, t), check)


def suite_forms(cfg: SuiteConfig, rep: Report):
    rng = random.Random(cfg.seed)
    ring, nvars = cfg.ring or ZZ, cfg.nvars if cfg.nvars is not None else 2
    for m in range(1, 5):
        def check_form(m=m):
            psi = form(m, "psi", ring, nvars).matrix
            psit = form(m, "psi_tilde", ring, nvars).matrix
            eye = MatrixG.identity(2 * m, psi.like)
            return _first_failure(
                _expect(psi.T == -psi, "psi^T = -psi", psi.T),
                _expect(psit.T == psit, "psi~^T = psi~", psit.T),
                _expect(psi * psi == -eye, "psi^2 = -I", psi * psi),
                _expect(psit * psit == eye, "psi~^2 = I", psit * psit),
            )

        rep.run(("form", m), check_form)
    families = [("linear", n) for n in range(2, 6)]
    families += [("symplectic", n) for n in (2, 4, 6, 8)]
    families += [("orthogonal", n) for n in (4, 6, 8)]
    if cfg.case is not None or cfg.n is not None:
        families = cfg.configs(families)
    for _ in range(cfg.count(1)):
        for case, n in families:
            for i, j in generator_indices(case, n):
                z = random_poly(rng, ring, nvars, cfg.bounds)

                def check(case=case, n=n, i=i, j=j, z=z):
                    g = ElemGen.make(case, n, i, j, z).matrix()
                    d = g.det()
                    return _first_failure(
                        _expect(is_in_G(case, g), "generator in G", g),
                        _expect(d == d.one(), "det = 1", d),
                    )

                rep.run((case, n, i, j, str(z)), check)


LEMMA_CONFIGS = [("linear", 3), ("symplectic", 6), ("orthogonal", 6)]


def suite_normalization(cfg: SuiteConfig, rep: Report):
    rng = random.Random(cfg.seed)
    ring, nvars = cfg.ring or ZZ, cfg.nvars if cfg.nvars is not None else 2
    for case, n in cfg.configs(LEMMA_CONFIGS):
        for _ in range(cfg.count(50)):
            w = random_level_word(rng, case, n, ring, nvars, 8, cfg.bounds)

            def check(w=w):
                alpha = w.evaluate()
                cw = normalize_mod_plus(w)
                prod = MatrixG.identity(n, w.like)
                for _, m in cw.factors():
                    prod = prod * m
                cores_plus = all(core.arg.plus_eval(0).is_zero() for _, core in cw.pairs)
                eps_const = all(g.arg.is_constant() for eps, _ in cw.pairs for g in eps.gens)
                return _first_failure(
                    _expect(prod == alpha, "factors multiply to the word", prod),
                    _expect(cores_plus, "cores in A_+", [str(c) for _, c in cw.pairs]),
                    _expect(eps_const, "degree-zero conjugators", "non-constant conjugator"),
                    _expect(cw.residual.evaluate().is_identity(), "residual = I", cw.residual.evaluate()),
                )

            rep.run((case, n, str(w)), check)


def suite_rearrangement(cfg: SuiteConfig, rep: Report):
    rng = random.Random(cfg.seed)
    ring, nvars = cfg.ring or ZZ, cfg.nvars if cfg.nvars is not None else 1
    configs = cfg.configs([("linear", 2), ("linear", 3), ("linear", 4), ("symplectic", 4), ("symplectic", 6)])
    for _ in range(cfg.count(100)):
        case, n = rng.choice(configs)
        r = rng.randint(1, 4)
        words = [
            (random_word(rng, case, n, ring, nvars, rng.randint(1, 2), cfg.bounds),
             random_word(rng, case, n, ring, nvars, rng.randint(1, 2), cfg.bounds))
            for _ in range(r)
        ]

        def check(words=words, n=n):
            pairs = [(a.evaluate(), b.evaluate()) for a, b in words]
            wit = rearrange_product(pairs)
            direct = MatrixG.identity(n, words[0][0].like)
            for a, b in words:
                direct = direct * (a + b).evaluate()
            tail_ok = [m for _, m in wit.factors[len(pairs):]] == [a for a, _ in pairs]
            return _first_failure(
                _expect(wit.checked and wit.product() == direct, "product = prod a_i b_i", wit.product()),
                _expect(tail_ok, "trailing factors are a_1 ... a_r", "mismatch"),
            )

        rep.run((case, n, r, [(str(a), str(b)) for a, b in words]), check)


def _primes(cfg: SuiteConfig) -> Tuple[int, ...]:
    return tuple(cfg.primes) if cfg.primes else (2, 3, 5)


def _brute_dilation_exponent(a, cap: int = 64) -> int:
    for l in range(cap + 1):
        if all(e.k == 0 for r in a.plus_eval(a.s ** l).rows for e in r):
            return l
    raise AssertionError("no exponent found below the cap")


def suite_dilation(cfg: SuiteConfig, rep: Report):
    rng = random.Random(cfg.seed)
    nvars = cfg.nvars if cfg.nvars is not None else 2
    configs = cfg.configs(LEMMA_CONFIGS)
    pool = _primes(cfg)
    for t in range(cfg.count(50)):
        case, n = configs[t % len(configs)]
        s = rng.choice(pool)
        w = random_local_level_word(rng, case, n, s, nvars, ZZ, bounds=cfg.bounds)

        def check(case=case, w=w, s=s):
            a = w.evaluate()
            l = dilation_exponent(a)
            oracle = _brute_dilation_exponent(a)
            use = l if cfg.dilation_exponent is None else max(l, cfg.dilation_exponent)
            beta = dilate_pullback(a, use)
            checks = [
                _expect(l == oracle, f"minimal exponent {oracle}", l),
                _expect(localize_matrix(beta, s) == a.plus_eval(s ** use), "round trip", beta),
                _expect(is_level_plus(beta), "pullback is level", beta),
            ]
            if l > 0:
                try:
                    dilate_pullback(a, l - 1)
                    checks.append(("l - 1 fails", "l - 1 cleared every denominator"))
                except DenominatorNotCleared:
                    pass
            if case != "linear":
                checks.append(_expect(preserves_form(case, a), "source preserves the form", a))
                checks.append(_expect(is_in_G(case, beta), "pullback in G", beta))
            return _first_failure(*checks)

        rep.run((case, n, s, str(w)), check)


def suite_telescoping(cfg: SuiteConfig, rep: Report):
    rng = random.Random(cfg.seed)
    nvars = cfg.nvars if cfg.nvars is not None else 1
    configs = cfg.configs(LEMMA_CONFIGS)
    pool = _primes(cfg)
    for t in range(cfg.count(30)):
        case, n = configs[t % len(configs)]
        r = 2 + t % 2 if len(pool) >= 3 else min(2, len(pool))
        primes = pick_primes(rng, pool, r)
        w = random_level_word(rng, case, n, ZZ, nvars, 6, cfg.bounds)
        local = [inject_denominators(rng, w, s) for s in primes]

        def check(case=case, n=n, w=w, local=local):
            a = w.evaluate()
            exps = None
            if cfg.dilation_exponent is not None:
                exps = [cfg.dilation_exponent] * len(local)
            pw = patch_with_words(a, local, exps)
            prod = MatrixG.identity(n, a.like)
            for f in pw.factors:
                prod = prod * f
            certs_ok = all(c["dilated_form_match"] and "conjugates" in c for c in pw.certificates)
            return _first_failure(
                _expect(pw.checked and prod == a, "prod F_i = a", prod),
                _expect(certs_ok, "every factor re-localizes to its dilated form", pw.certificates),
                _expect(all(is_in_G(case, f) and is_level_plus(f) for f in pw.factors), "factors level and in G", "factor outside"),
                _expect(sum(pw.comaximal.combined) == 1, "sum b_i = 1", pw.comaximal.combined),
            )

        rep.run((case, n, primes, str(w)), check)


def _transvection_oracle(case: str, v, w) -> MatrixG:
    """I + M(v, w) expanded entry by entry from the hyperbolic pairing."""
    n = len(v)
    like = v[0]
    rows = [[like.one() if i == j else like.zero() for j in range(n)] for i in range(n)]

    def tilde(u):
        # u^t F: for psi the pair (a, b) maps to (-b, a); for psi~ to (b, a)
        out = [None] * n
        for k in range(0, n, 2):
            a, b = u[k], u[k + 1]
            out[k] = -b if case == "symplectic" else b
            out[k + 1] = a
        return out

    if case == "linear":
        for i in range(n):
            for j in range(n):
                rows[i][j] = rows[i][j] + v[i] * w[j]
        return MatrixG(rows)
    wt, vt = tilde(w), tilde(v)
    sign = 1 if case == "symplectic" else -1
    for i in range(n):
        for j in range(n):
            extra = v[i] * wt[j]
            other = w[i] * vt[j]
            rows[i][j] = rows[i][j] + extra + (other if sign == 1 else -other)
    return MatrixG(rows)


def _admissible_w(rng, case, n, ring, nvars, bounds):
    rp = lambda: random_poly(rng, ring, nvars, bounds)
    w = [rp() for _ in range(n)]
    zero = w[0].zero()
    if case == "linear":
        w[0] = zero
        return tuple(w)
    w[1] = zero
    if case == "orthogonal":
        # w3 w4 + w5 w6 + ... = 0: pair up (uv, rt, ut, -vr) and zero the rest
        u, v_, r, t = rp(), rp(), rp(), rp()
        rest = [u * v_, r * t, u * t, -(v_ * r)] + [zero] * (n - 6)
        w[2:] = rest[: n - 2]
    return tuple(w)


def suite_transvection(cfg: SuiteConfig, rep: Report):
    rng = random.Random(cfg.seed)
    ring, nvars = cfg.ring or ZZ, cfg.nvars if cfg.nvars is not None else 2
    configs = cfg.configs([("linear", 3), ("linear", 4), ("linear", 5), ("symplectic", 6), ("orthogonal", 6)])
    for t in range(cfg.count(100)):
        case, n = configs[t % len(configs)]
        w = _admissible_w(rng, case, n, ring, nvars, cfg.bounds)
        g = ElemWord.of([random_gen(rng, case, n, random_poly(rng, ring, nvars, cfg.bounds))])
        w0 = _admissible_w(rng, case, n, ring, nvars, cfg.bounds)

        def check(case=case, n=n, w=w, g=g, w0=w0):
            like = w[0]
            e1 = unit_vector(n, 1, like)
            word = transvection_word(case, w)
            oracle = _transvection_oracle(case, e1, w)
            # transport an admissible w0 so that <g e_1, w> = 0
            gm = g.evaluate()
            if case == "linear":
                wc = gm.inverse().T.apply(w0)
            else:
                wc = gm.apply(w0)
            wit = transvection_word_conj(g, wc)
            oracle_v = _transvection_oracle(case, gm.column(1), wc)
            return _first_failure(
                _expect(word.evaluate() == oracle, oracle, word.evaluate()),
                _expect(wit.checked and wit.target == oracle_v and wit.verify(), oracle_v, wit.product()),
            )

        rep.run((case, n, [str(x) for x in w], str(g)), check)


def _comm_word(a: ElemWord, b: ElemWord) -> ElemWord:
    return a + b + a.inverse() + b.inverse()


def suite_commutator(cfg: SuiteConfig, rep: Report):
    rng = random.Random(cfg.seed)
    ring, nvars = ZZ, cfg.nvars if cfg.nvars is not None else 1
    configs = cfg.configs([("linear", 3), ("symplectic", 6)])
    pool = _primes(cfg)
    for t in range(cfg.count(30)):
        case, n = configs[t % len(configs)]
        wa = random_word(rng, case, n, ring, nvars, rng.randint(1, 2), cfg.bounds)
        wb = random_word(rng, case, n, ring, nvars, rng.randint(1, 2), cfg.bounds)
        pairs = [
            (random_word(rng, case, n, ring, nvars, 1, cfg.bounds),
             random_word(rng, case, n, ring, nvars, 1, cfg.bounds))
            for _ in range(2)
        ]
        primes = pick_primes(rng, pool, 2)

        def check(case=case, n=n, wa=wa, wb=wb, pairs=pairs, primes=primes):
            # four-factor identity for [alpha, beta]
            wit = commutator_factor(wa.evaluate(), wb.evaluate(), wa.plus_eval(0), wb.plus_eval(0))
            direct = _comm_word(wa, wb).evaluate()
            # normal form prod [a_k, b_k] eps with eps the inverse degree-zero part
            full = ElemWord.empty(case, n, wa.like)
            for a, b in pairs:
                full = full + _comm_word(a, b)
            eps = full.plus_eval(0).inverse()
            nf = commutator_normal_form([(a.evaluate(), b.evaluate()) for a, b in pairs], eps)
            residual = nf.info["residual"]
            alpha = nf.target
            # commutator patch on the normalized data, localized at two primes
            local = []
            for s in primes:
                lp = [(localize_matrix(b_, s), localize_matrix(g_, s)) for b_, g_ in nf.info["pairs"]]
                local.append(LocalCommutatorData(s, tuple(lp), localize_matrix(residual, s)))
            pw = commutator_patch(alpha, local)
            prod = MatrixG.identity(n, alpha.like)
            for f in pw.factors:
                prod = prod * f
            return _first_failure(
                _expect(wit.checked and wit.target == direct and wit.verify(), direct, wit.product()),
                _expect(nf.checked and nf.verify(), "normal form reproduces the product", nf.product()),
                _expect(is_level_plus(residual), "eps+(0) = I", residual.plus_eval(0)),
                _expect(all(is_level_plus(b_) and is_level_plus(g_) for b_, g_ in nf.info["pairs"]), "level pairs", "non-level pair"),
                _expect(pw.checked and prod == alpha, "prod F_i = alpha", prod),
                _expect(all(c["expansion_match"] for c in pw.certificates), "expansions match", "mismatch"),
            )

        rep.run((case, n, str(wa), str(wb), [(str(a), str(b)) for a, b in pairs], primes), check)
        if case == "linear":
            _denominator_commutator_trial(rng, rep, n, nvars, pool, cfg.bounds)


def _denominator_commutator_trial(rng, rep, n, nvars, pool, bounds):
    """[E_ij(p), E_jk(q)] = E_ik(pq), localized as [E_ij(p/s^m), E_jk(s^m q)]."""
    i, j, k = rng.sample(range(1, n + 1), 3)
    p = random_poly(rng, ZZ, nvars, bounds, min_degree=1, nonzero=True)
    q = random_poly(rng, ZZ, nvars, bounds, min_degree=1, nonzero=True)
    primes = pick_primes(rng, pool, 2)
    m = rng.randint(1, 2)

    def check():
        gen = lambda a, b, z: ElemGen.make("linear", n, a, b, z).matrix()
        alpha = gen(i, j, p) * gen(j, k, q) * gen(i, j, -p) * gen(j, k, -q)
        local = []
        for s in primes:
            beta = gen(i, j, LocalizedPoly(s, p, m))
            gamma = gen(j, k, localize(q * s ** m, s))
            local.append(LocalCommutatorData(s, ((beta, gamma),), MatrixG.identity(n, localize(p, s))))
        pw = commutator_patch(alpha, local)
        return _first_failure(
            _expect(alpha == gen(i, k, p * q), "E_ik(pq)", alpha),
            _expect(pw.checked and pw.verify(), "checked patch", pw.product()),
        )

    rep.run(("denominators", i, j, k, str(p), str(q), primes, m), check)


def _elimination_oracle(v, p) -> bool:
    """Gaussian elimination over GF(p): a single row is unimodular iff it has a pivot."""
    return any(x % p for x in v)


def suite_completion(cfg: SuiteConfig, rep: Report):
    if cfg.ring is not None and cfg.ring.kind == "fp":
        fields = [cfg.ring.p]
    else:
        fields = [3, 5]
    sizes = [cfg.n] if cfg.n is not None else [2, 3]
    for p in fields:
        inst = PrimeField(p)
        for n in sizes:
            for v in itertools.product(range(p), repeat=n):
                rep.run(("fp", p, v), lambda v=v, p=p, n=n, inst=inst: _completion_check(v, p, n, inst))
    if cfg.ring is None:
        # a non-field local instance: ZZ/(9)
        inst = ResidueRing(3, 2)
        for v in itertools.product(range(9), repeat=2):
            rep.run(("mod 9", v), lambda v=v, inst=inst: _completion_check(v, 3, 2, inst))


def _completion_check(v, p, n, inst):
    unimodular = _elimination_oracle(v, p)
    try:
        word = complete_unimodular(v, inst)
    except NotUnimodular:
        return _expect(not unimodular, "a completion", "NotUnimodular")
    if not unimodular:
        return ("NotUnimodular", str(word))
    e1 = tuple(int(i == 0) for i in range(n))
    image = row_times_word(v, word, inst)
    checks = [_expect(image == e1, e1, image)]
    if isinstance(inst, PrimeField):
        m = word.evaluate()
        row = tuple(sum(v[k] * m.rows[k][j].constant_value() for k in range(n)) % p for j in range(n))
        d = m.det()
        checks.append(_expect(row == e1, e1, row))
        checks.append(_expect(d == d.one(), "det 1", d))
    checks.append(_expect(all(g.case is GroupCase.LINEAR for g in word.gens), "elementary generators", word))
    return _first_failure(*checks)


def suite_determinant(cfg: SuiteConfig, rep: Report):
    rng = random.Random(cfg.seed)
    ring, nvars = cfg.ring or ZZ, cfg.nvars if cfg.nvars is not None else 2
    configs = cfg.configs([("linear", 3), ("linear", 4), ("linear", 5), ("symplectic", 6), ("orthogonal", 6)])
    for _ in range(cfg.count(100)):
        case, n = rng.choice(configs)
        w = random_word(rng, case, n, ring, nvars, rng.randint(1, 6), cfg.bounds)

        def check(w=w, n=n):
            alpha = w.evaluate()
            checks = []
            d = alpha.det()
            checks.append(_expect(d == d.one(), "det alpha = 1", d))
            if n <= 5:
                dc = alpha.det("cofactor")
                checks.append(_expect(dc == d, "cofactor agrees", dc))
            for t in (0, 1, 2, -1):
                dt = alpha.plus_eval(t).det()
                checks.append(_expect(dt == dt.one(), f"det alpha+({t}) = 1", dt))
            return _first_failure(*checks)

        rep.run((case, n, str(w)), check)


@dataclass(frozen=True)
class SuiteSpec:
    name: str
    run: Callable[[SuiteConfig, Report], None]
    time_limit: float
    summary: str


SUITES: Dict[str, SuiteSpec] = {
    s.name: s
    for s in [
        SuiteSpec("splitting", suite_splitting, 5, "ge(x + y) = ge(x) ge(y)"),
        SuiteSpec("swan-weibel", suite_swan_weibel, 5, "laws of b -> b+(t)"),
        SuiteSpec("forms", suite_forms, 5, "forms and generators lie in G with det 1"),
        SuiteSpec("normalization", suite_normalization, 30, "level words as degree-zero conjugates of A_+ generators"),
        SuiteSpec("rearrangement", suite_rearrangement, 10, "prod a_i b_i = (prod J_i b_i J_i^-1)(prod a_i)"),
        SuiteSpec("dilation", suite_dilation, 30, "minimal dilation exponent and pullback"),
        SuiteSpec("telescoping", suite_telescoping, 60, "telescoping patch over a partition of unity"),
        SuiteSpec("transvection", suite_transvection, 30, "words for I + M(v, w)"),
        SuiteSpec("commutator", suite_commutator, 60, "commutator factorization, normal form and patch"),
        SuiteSpec("completion", suite_completion, 30, "unimodular rows over local instances"),
        SuiteSpec("determinant", suite_determinant, 5, "det alpha+(t) = 1 for det-one alpha"),
    ]
}


def run_suite(name: str, cfg: SuiteConfig | None = None) -> Report:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    cfg = cfg or SuiteConfig()
    rep = Report(name)
    start = time.perf_counter()
    SUITES[name].run(cfg, rep)
    rep.elapsed = time.perf_counter() - start
    return rep
