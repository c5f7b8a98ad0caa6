import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CASE_SIZES, gens, polys, words
from gradedqs.errors import (
    NotInvertible,
    NotInCongruenceSubgroup,
    OrthogonalityViolation,
    PreconditionError,
    StructuralError,
)
from gradedqs.matrices import GroupCase, MatrixG, diagonal, inner_product, is_in_G, is_level_plus, m_of, sigma, unit_vector
from gradedqs.poly import poly
from gradedqs.rings import QQ, ZZ
from gradedqs.sampling import random_level_word
from gradedqs.words import (
    ElemGen,
    ElemWord,
    commutator,
    commutator_factor,
    commutator_normal_form,
    gen_matrix,
    normalize_mod_plus,
    rearrange_product,
    split_word,
    transvection_word,
    transvection_word_conj,
    word_conjugate,
    word_eval,
    word_inverse,
    word_plus_eval,
)

LIN, SP, ORTH = GroupCase.LINEAR, GroupCase.SYMPLECTIC, GroupCase.ORTHOGONAL


def P(text, ring=ZZ, nvars=2):
    return poly(text, ring, nvars)


def G(case, n, i, j, arg):
    return ElemGen.make(case, n, i, j, arg)


def W(*gs):
    return ElemWord.of(list(gs))


def unit_matrix(n, i, j, c, like):
    rows = [[like.zero() for _ in range(n)] for _ in range(n)]
    rows[i - 1][j - 1] = c
    return MatrixG(rows)


class TestGenerators:
    def test_linear(self):
        x = P("x")
        assert gen_matrix(G(LIN, 3, 1, 2, x)) == MatrixG.identity(3, x) + unit_matrix(3, 1, 2, x, x)

    def test_symplectic_long_root(self):
        z = P("x + y")
        assert gen_matrix(G(SP, 4, 1, 2, z)) == MatrixG.identity(4, z) + unit_matrix(4, 1, 2, z, z)

    def test_orthogonal(self):
        z = P("x")
        expect = MatrixG.identity(6, z) + unit_matrix(6, 1, 3, z, z) - unit_matrix(6, 4, 2, z, z)
        assert gen_matrix(G(ORTH, 6, 1, 3, z)) == expect

    def test_invalid_patterns(self):
        x = P("x")
        with pytest.raises(StructuralError):
            G(LIN, 3, 2, 2, x)
        with pytest.raises(StructuralError):
            G(ORTH, 6, 1, 2, x)
        with pytest.raises(StructuralError):
            G(LIN, 3, 1, 4, x)

    @pytest.mark.parametrize("case,n", [(LIN, 2), (LIN, 5), (SP, 2), (SP, 8), (ORTH, 4), (ORTH, 8)])
    def test_every_generator_is_in_group(self, case, n):
        z = P("1 + x*y")
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i == j or (case is ORTH and i == sigma(j)):
                    continue
                m = gen_matrix(G(case, n, i, j, z))
                assert is_in_G(case, m) and m.det() == 1

    @given(st.sampled_from(CASE_SIZES).flatmap(lambda cn: st.tuples(st.just(cn), gens(*cn))), polys(ZZ, 2, 2, 3))
    def test_additive_in_argument(self, data, y):
        _, g = data
        assert gen_matrix(g.with_arg(g.arg + y)) == gen_matrix(g) * gen_matrix(g.with_arg(y))

    def test_canonical_form_for_swapped_indices(self):
        x = P("x")
        # a stored symplectic generator always has i < j unless it is a long root
        g = G(SP, 4, 3, 1, x)
        assert (g.i, g.j) == (2, 4)
        # the printed formula read verbatim at (3, 1): I + x e31 - (-1)^4 x e24
        expect = MatrixG.identity(4, x) + unit_matrix(4, 3, 1, x, x) - unit_matrix(4, 2, 4, x, x)
        assert gen_matrix(g) == expect and is_in_G(SP, expect)


class TestWordAlgebra:
    def test_empty_word(self):
        like = P("0")
        assert ElemWord.empty(LIN, 3, like).evaluate() == MatrixG.identity(3, like)

    def test_inverse_example(self):
        x = P("x")
        w = word_inverse(W(G(LIN, 3, 1, 2, x)))
        assert w.gens == (G(LIN, 3, 1, 2, -x),)

    def test_conjugate_example(self):
        one, y = P("1"), P("y")
        c = W(G(LIN, 3, 1, 2, one))
        w = word_conjugate(W(G(LIN, 3, 1, 3, y)), c)
        expect = gen_matrix(G(LIN, 3, 1, 2, one)) * gen_matrix(G(LIN, 3, 1, 3, y)) * gen_matrix(G(LIN, 3, 1, 2, -one))
        assert word_eval(w) == expect

    @given(words(), words(LIN, 3))
    def test_inverse_and_conjugate(self, w, c):
        assert word_eval(word_inverse(w)) * word_eval(w) == MatrixG.identity(w.n, w.like)
        if c.n == w.n and c.case is w.case:
            assert word_eval(word_conjugate(w, c)) == word_eval(c) * word_eval(w) * word_eval(c).inverse()

    def test_mixed_words_rejected(self):
        x = P("x")
        with pytest.raises(StructuralError):
            W(G(LIN, 3, 1, 2, x)) + W(G(LIN, 4, 1, 2, x))

    def test_plus_eval_examples(self):
        w = W(G(LIN, 3, 1, 2, P("2 + x", ZZ, 1)), G(LIN, 3, 2, 3, P("x^2", ZZ, 1)))
        assert word_plus_eval(w, 1) == w
        assert word_plus_eval(w, 3).gens == (
            G(LIN, 3, 1, 2, P("2 + 3*x", ZZ, 1)),
            G(LIN, 3, 2, 3, P("9*x^2", ZZ, 1)),
        )
        zero = word_plus_eval(W(G(LIN, 3, 1, 2, P("x", ZZ, 1))), 0)
        assert zero.evaluate().is_identity()

    @given(words(), st.integers(-4, 4))
    def test_plus_eval_commutes_with_evaluation(self, w, t):
        assert word_eval(word_plus_eval(w, t)) == word_eval(w).plus_eval(t)

    @given(words())
    def test_json_round_trip(self, w):
        assert ElemWord.from_json(w.to_json(), w.like) == w


class TestSplitting:
    def test_examples(self):
        x = P("x")
        assert split_word(W(G(LIN, 3, 1, 2, x))).gens == (G(LIN, 3, 1, 2, x.zero()), G(LIN, 3, 1, 2, x))
        assert split_word(W(G(LIN, 3, 1, 2, P("2 + x")))).gens == (G(LIN, 3, 1, 2, P("2")), G(LIN, 3, 1, 2, x))
        w = W(G(SP, 6, 1, 3, P("1 + x*y")))
        s = split_word(w)
        assert s.gens == (G(SP, 6, 1, 3, P("1")), G(SP, 6, 1, 3, P("x*y")))
        assert s.evaluate() == w.evaluate()

    @given(words())
    def test_sound(self, w):
        s = split_word(w)
        assert s.evaluate() == w.evaluate()
        assert all(g.arg.is_constant() for g in s.gens[0::2])
        assert all(g.arg.plus_eval(0).is_zero() for g in s.gens[1::2])


class TestRearrangement:
    def test_single_pair(self):
        a = gen_matrix(G(LIN, 3, 1, 2, P("x")))
        b = gen_matrix(G(LIN, 3, 2, 3, P("y")))
        wit = rearrange_product([(a, b)])
        assert [m for _, m in wit.factors] == [a * b * a.inverse(), a]
        assert wit.checked and wit.product() == a * b

    def test_trivial_b(self):
        x = P("x")
        a1, a2 = gen_matrix(G(LIN, 3, 1, 2, x)), gen_matrix(G(LIN, 3, 3, 1, x))
        eye = MatrixG.identity(3, x)
        wit = rearrange_product([(a1, eye), (a2, eye)])
        assert all(m == eye for _, m in wit.factors[:2])
        assert wit.product() == a1 * a2

    def test_non_elementary_inputs(self):
        # a pure group identity: diagonal and form matrices work too
        q = P("x", QQ)
        d = diagonal([2, QQ.coerce(1) / 2, 1], q)
        e = gen_matrix(G(LIN, 3, 1, 3, q))
        wit = rearrange_product([(d, e), (e, d), (d, d)])
        assert wit.checked and len(wit.factors) == 6

    def test_rejects_singular(self):
        x = P("x")
        sing = MatrixG([[x, x.zero()], [x.zero(), x.one()]])
        with pytest.raises(NotInvertible):
            rearrange_product([(sing, MatrixG.identity(2, x))])

    @given(st.lists(st.tuples(words(LIN, 3, 3), words(LIN, 3, 3)), min_size=1, max_size=4))
    def test_random_pairs(self, pairs):
        mats = [(a.evaluate(), b.evaluate()) for a, b in pairs]
        wit = rearrange_product(mats)
        assert wit.verify() and len(wit.factors) == 2 * len(mats)


class TestNormalization:
    def test_no_degree_zero_parts(self):
        x = P("x")
        cw = normalize_mod_plus(W(G(LIN, 3, 1, 2, x)))
        assert len(cw.pairs) == 1
        eps, core = cw.pairs[0]
        assert eps.evaluate().is_identity() and core == G(LIN, 3, 1, 2, x)
        assert cw.evaluate() == gen_matrix(core)

    def test_conjugated_core(self):
        w = W(G(LIN, 3, 1, 2, P("2")), G(LIN, 3, 1, 3, P("x")), G(LIN, 3, 1, 2, P("-2")))
        cw = normalize_mod_plus(w)
        assert len(cw.pairs) == 1
        eps, core = cw.pairs[0]
        assert eps.evaluate() == gen_matrix(G(LIN, 3, 1, 2, P("2")))
        assert core == G(LIN, 3, 1, 3, P("x"))
        assert cw.residual.evaluate().is_identity()
        assert cw.evaluate() == w.evaluate()

    def test_symplectic_example(self):
        w = W(G(SP, 6, 1, 3, P("1 + x*y")), G(SP, 6, 1, 3, P("-1")))
        cw = normalize_mod_plus(w)
        assert len(cw.pairs) == 1
        eps, core = cw.pairs[0]
        assert eps.gens == (G(SP, 6, 1, 3, P("1")),)
        assert core == G(SP, 6, 1, 3, P("x*y"))
        assert cw.evaluate() == w.evaluate()

    def test_not_level(self):
        with pytest.raises(NotInCongruenceSubgroup):
            normalize_mod_plus(W(G(LIN, 3, 1, 2, P("1 + x"))))

    def test_size_below_minimum(self):
        with pytest.raises(PreconditionError):
            normalize_mod_plus(W(G(LIN, 2, 1, 2, P("x"))))

    @pytest.mark.parametrize("case,n", [(LIN, 3), (LIN, 4), (SP, 6), (ORTH, 6)])
    def test_random_level_words(self, case, n):
        rng = random.Random(11)
        for _ in range(15):
            w = random_level_word(rng, case, n, ZZ, 2)
            assert is_level_plus(w.evaluate())
            cw = normalize_mod_plus(w)
            assert cw.evaluate() == w.evaluate()
            assert cw.residual.evaluate().is_identity()
            for eps, core in cw.pairs:
                assert core.arg.plus_eval(0).is_zero() and not core.arg.is_zero()
                assert all(g.arg.is_constant() for g in eps.gens)


def _oracle_transvection(case, w):
    like = w[0]
    return MatrixG.identity(len(w), like) + m_of(case, unit_vector(len(w), 1, like), w)


class TestTransvections:
    def test_linear_example(self):
        a, b = P("x"), P("y + 1")
        w = (a.zero(), a, b)
        word = transvection_word(LIN, w)
        assert word.gens == (G(LIN, 3, 1, 2, a), G(LIN, 3, 1, 3, b))
        assert word.evaluate() == _oracle_transvection(LIN, w)

    def test_zero_vector(self):
        z = P("0")
        assert len(transvection_word(LIN, (z, z, z))) == 0
        assert len(transvection_word(SP, (z,) * 6)) == 0

    def test_symplectic_example(self):
        x = P("x")
        w = tuple(x if k == 3 else x.zero() for k in range(1, 7))
        word = transvection_word(SP, w)
        m = word.evaluate()
        assert m == _oracle_transvection(SP, w) and is_in_G(SP, m)

    def test_not_orthogonal(self):
        one = P("1")
        with pytest.raises(OrthogonalityViolation):
            transvection_word(LIN, (one, one.zero(), one.zero()))

    def test_orthogonal_non_isotropic(self):
        one = P("1")
        z = one.zero()
        # <e1, w> = w_2 = 0, but <w, w> = 2 w_3 w_4 != 0
        with pytest.raises(OrthogonalityViolation):
            transvection_word(ORTH, (z, z, one, one, z, z))

    @given(st.lists(polys(ZZ, 2, 2, 3), min_size=6, max_size=6))
    def test_symplectic_oracle(self, w):
        w[1] = w[1].zero()
        word = transvection_word(SP, w)
        assert word.evaluate() == _oracle_transvection(SP, w)

    @given(st.lists(polys(ZZ, 2, 2, 3), min_size=6, max_size=6))
    def test_orthogonal_oracle(self, w):
        # isotropic: w_2 = 0 and w_3 w_4 + w_5 w_6 = 0 via w_4 = -w_5 c, w_6 = w_3 c
        c = w[0]
        w[1] = c.zero()
        w[3] = -w[4] * c
        w[5] = w[2] * c
        word = transvection_word(ORTH, w)
        assert word.evaluate() == _oracle_transvection(ORTH, w)

    def test_conj_empty_eps(self):
        x = P("x")
        w = (x.zero(), x, x * x)
        wit = transvection_word_conj(ElemWord.empty(LIN, 3, x), w)
        assert wit.checked and wit.product() == transvection_word(LIN, w).evaluate()

    def test_conj_linear(self):
        x = P("x")
        eps = W(G(LIN, 3, 2, 1, P("1")))
        v = eps.evaluate().column(1)
        # v = (1, 1, 0), so w = (a, -a, b) is orthogonal
        w = (x, -x, P("y"))
        assert inner_product(LIN, v, w).is_zero()
        wit = transvection_word_conj(eps, w)
        assert len(wit.factors) == 3 and wit.verify()
        assert wit.target == MatrixG.identity(3, x) + m_of(LIN, v, w)

    def test_conj_symplectic(self):
        x = P("x")
        eps = W(G(SP, 6, 1, 4, P("1 + y")))
        v = eps.evaluate().column(1)
        w = [x.zero()] * 6
        w[4] = x
        w = tuple(w)
        assert inner_product(SP, v, w).is_zero()
        wit = transvection_word_conj(eps, w)
        assert wit.verify() and is_in_G(SP, wit.target)

    def test_conj_rejects_non_orthogonal(self):
        one = P("1")
        eps = W(G(LIN, 3, 2, 1, one))
        with pytest.raises(OrthogonalityViolation):
            transvection_word_conj(eps, (one, one.zero(), one.zero()))

    @given(words(LIN, 3, 3), st.lists(polys(ZZ, 2, 2, 2), min_size=2, max_size=2))
    def test_normality_through_witness(self, eps, tail):
        g = eps.evaluate()
        v = g.column(1)
        # choose w orthogonal to v via w = (v_2 a, -v_1 a, 0) + cross terms with v_3
        a, b = tail
        w = (v[1] * a + v[2] * b, -v[0] * a, -v[0] * b)
        wit = transvection_word_conj(eps, w)
        assert wit.verify()
        e = wit.target
        assert is_in_G(LIN, e) and e.det() == 1


class TestNormality:
    @pytest.mark.parametrize("case,n", CASE_SIZES)
    def test_conjugates_stay_in_group(self, case, n):
        rng = random.Random(5)
        from gradedqs.sampling import random_word

        for _ in range(10):
            g = random_word(rng, case, n, ZZ, 2, length=3).evaluate()
            e = random_word(rng, case, n, ZZ, 2, length=3).evaluate()
            c = g * e * g.inverse()
            assert is_in_G(case, c) and c.det() == 1

    def test_diagonal_units(self):
        q = P("x", QQ)
        g = diagonal([2, QQ.coerce(1) / 2, 3], q)
        e = gen_matrix(G(LIN, 3, 1, 3, q))
        c = g * e * g.inverse()
        assert c == gen_matrix(G(LIN, 3, 1, 3, q * (QQ.coerce(2) / 3)))


class TestCommutators:
    def test_level_inputs_have_trivial_tails(self):
        a = gen_matrix(G(LIN, 3, 1, 2, P("x")))
        b = gen_matrix(G(LIN, 3, 2, 3, P("y")))
        empty = ElemWord.empty(LIN, 3, a.like)
        wit = commutator_factor(a, b, empty, empty)
        assert wit.verify()
        assert wit.factors[0][1] == commutator(a, b)
        assert all(m.is_identity() for _, m in wit.factors[1:])

    def test_rational_example(self):
        q = lambda t: poly(t, QQ, 1)
        alpha = gen_matrix(G(LIN, 3, 1, 2, q("2 + x")))
        beta = gen_matrix(G(LIN, 3, 2, 3, q("x")))
        a0 = W(G(LIN, 3, 1, 2, q("2")))
        b0 = ElemWord.empty(LIN, 3, q("0"))
        wit = commutator_factor(alpha, beta, a0, b0)
        assert len(wit.factors) == 4 and wit.verify()
        assert wit.info["a"] == gen_matrix(G(LIN, 3, 1, 2, q("x")))

    def test_symplectic_random(self):
        rng = random.Random(3)
        from gradedqs.sampling import random_word

        for _ in range(3):
            wa = random_word(rng, SP, 6, ZZ, 1, length=3)
            wb = random_word(rng, SP, 6, ZZ, 1, length=3)
            wit = commutator_factor(wa.evaluate(), wb.evaluate(), word_plus_eval(wa, 0), word_plus_eval(wb, 0))
            assert wit.verify()

    def test_bad_degree_zero_word(self):
        alpha = gen_matrix(G(LIN, 3, 1, 2, P("2 + x")))
        empty = ElemWord.empty(LIN, 3, alpha.like)
        with pytest.raises(PreconditionError):
            commutator_factor(alpha, alpha, empty, empty)

    def test_non_unit_det(self):
        d = diagonal([2, 1, 1], P("x", QQ))
        empty = ElemWord.empty(LIN, 3, d.like)
        with pytest.raises(PreconditionError):
            commutator_factor(d, d, empty, empty)

    def test_normal_form_level_pair(self):
        a = gen_matrix(G(LIN, 3, 1, 2, P("x")))
        b = gen_matrix(G(LIN, 3, 2, 3, P("y")))
        wit = commutator_normal_form([(a, b)])
        assert wit.info["pairs"] == [(a, b)]
        assert wit.info["residual"].is_identity() and wit.verify()

    def test_normal_form_example(self):
        a = gen_matrix(G(LIN, 3, 1, 2, P("1 + x")))
        b = gen_matrix(G(LIN, 3, 2, 3, P("x")))
        wit = commutator_normal_form([(a, b)])
        assert wit.verify()
        (beta, gamma), = wit.info["pairs"]
        assert beta.plus_eval(0).is_identity() and gamma.plus_eval(0).is_identity()
        assert wit.info["residual"].plus_eval(0).is_identity()

    @given(st.lists(st.tuples(words(LIN, 3, 3), words(LIN, 3, 3)), min_size=2, max_size=2))
    def test_normal_form_random(self, pairs):
        mats = [(a.evaluate(), b.evaluate()) for a, b in pairs]
        alpha = MatrixG.identity(3, pairs[0][0].like)
        for a, b in mats:
            alpha = alpha * commutator(a, b)
        # make the product level by appending the inverse of its degree-zero part as eps
        eps = ElemWord.empty(LIN, 3, alpha.like)
        for a, b in pairs:
            eps = eps + word_plus_eval(a, 0) + word_plus_eval(b, 0) + word_plus_eval(a, 0).inverse() + word_plus_eval(b, 0).inverse()
        eps = eps.inverse()
        wit = commutator_normal_form(mats, eps)
        assert wit.verify()
        assert wit.info["residual"].plus_eval(0).is_identity()

    def test_normal_form_not_level(self):
        a = gen_matrix(G(LIN, 3, 1, 2, P("1")))
        b = gen_matrix(G(LIN, 3, 2, 3, P("1")))
        with pytest.raises(NotInCongruenceSubgroup):
            commutator_normal_form([(a, b)])
