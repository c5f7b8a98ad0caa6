import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CASE_SIZES, polys, words
from gradedqs.errors import NotInvertible, StructuralError
from gradedqs.matrices import (
    GroupCase,
    MatrixG,
    det,
    diagonal,
    form,
    inner_product,
    is_in_G,
    is_in_S,
    is_level_plus,
    m_of,
    mat_arith,
    mat_inverse,
    mat_plus_eval,
    mat_transpose,
    sigma,
    unit_vector,
)
from gradedqs.poly import poly
from gradedqs.rings import QQ, ZZ
from gradedqs.words import ElemGen

LIN, SP, ORTH = GroupCase.LINEAR, GroupCase.SYMPLECTIC, GroupCase.ORTHOGONAL


def M(text, ring=ZZ, nvars=1):
    return MatrixG.parse(text, ring, nvars)


def E(i, j, arg, n=3, case=LIN):
    return ElemGen.make(case, n, i, j, arg).matrix()


def x_(ring=ZZ, nvars=1):
    return poly("x", ring, nvars)


@st.composite
def square(draw, n=None, ring=ZZ, nvars=1):
    n = n or draw(st.integers(1, 4))
    return MatrixG([[draw(polys(ring, nvars, max_degree=2, max_terms=2)) for _ in range(n)] for _ in range(n)])


class TestArithmetic:
    def test_identity_is_neutral(self):
        a = M("1 + x, x; 2, x^2")
        assert mat_arith(MatrixG.identity(2, a.like), a, "mul") == a

    def test_elementary_splitting_as_matrices(self):
        x, y = poly("x", ZZ, 2), poly("y", ZZ, 2)
        assert mat_arith(E(1, 2, x), E(1, 2, y), "mul") == E(1, 2, x + y)

    @given(square(4), square(4))
    def test_transpose_of_product(self, a, b):
        assert mat_transpose(a * b) == mat_transpose(b) * mat_transpose(a)

    def test_size_mismatch(self):
        with pytest.raises(StructuralError):
            M("1, 0; 0, 1") * M("1")
        with pytest.raises(StructuralError):
            MatrixG([[poly("1"), poly("1", QQ)], [poly("0"), poly("1")]])


class TestDeterminant:
    def test_examples(self):
        assert det(MatrixG.identity(4, x_())) == 1
        assert det(E(1, 3, poly("x^2"))) == 1
        assert det(form(2, "psi").matrix) == 1

    @given(square())
    def test_methods_agree(self, a):
        b = a.det("bareiss")
        assert b == a.det("cofactor") == a.det("leibniz")

    @given(square(3), square(3))
    def test_multiplicative(self, a, b):
        assert (a * b).det() == a.det() * b.det()

    @given(square(), st.integers(-3, 3))
    def test_commutes_with_plus(self, a, t):
        assert a.plus_eval(t).det() == a.det().plus_eval(t)


class TestInverse:
    def test_examples(self):
        x = x_()
        assert mat_inverse(E(1, 2, x)) == E(1, 2, -x)
        eye = MatrixG.identity(3, x)
        assert mat_inverse(eye) == eye
        for m in range(1, 4):
            psi = form(m, "psi").matrix
            assert mat_inverse(psi) == -psi

    def test_non_unit_determinant(self):
        with pytest.raises(NotInvertible):
            mat_inverse(M("2, 0; 0, 1"))
        with pytest.raises(NotInvertible):
            mat_inverse(M("1 + x, 0; 0, 1"))

    def test_rational_degree_zero_block(self):
        a = M("2, x; 0, 1/2", QQ)
        assert a * a.inverse() == MatrixG.identity(2, a.like)

    @given(words())
    def test_word_inverse_matches(self, w):
        a = w.evaluate()
        assert a * a.inverse() == MatrixG.identity(w.n, w.like)
        assert a.inverse() == w.inverse().evaluate()

    @given(words(), st.integers(-2, 2))
    def test_adjugate_oracle(self, w, t):
        a = w.evaluate().plus_eval(t)
        # det = 1, so the inverse is the adjugate
        assert a.inverse() == a.adjugate()


class TestForms:
    def test_sigma(self):
        assert sigma(1) == 2 and sigma(4) == 3
        assert all(sigma(sigma(i)) == i for i in range(1, 13))
        with pytest.raises(StructuralError):
            sigma(0)

    def test_printed_blocks(self):
        assert form(1, "psi").matrix == MatrixG.from_ints([[0, 1], [-1, 0]], ZZ, 0)
        assert form(1, "psi_tilde").matrix == MatrixG.from_ints([[0, 1], [1, 0]], ZZ, 0)
        with pytest.raises(StructuralError):
            form(0)

    def test_two_blocks(self):
        f = form(2, "psi").matrix
        assert f == MatrixG.from_ints([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], ZZ, 0)

    @pytest.mark.parametrize("m", range(1, 7))
    def test_symmetry_and_invertibility(self, m):
        psi, psit = form(m, "psi").matrix, form(m, "psi_tilde").matrix
        eye = MatrixG.identity(2 * m, psi.like)
        assert psi.T == -psi and psit.T == psit
        assert psi * psi == -eye and psit * psit == eye
        assert {str(e) for r in psi.rows for e in r} <= {"-1", "0", "1"}
        assert all(sum(1 for e in r if not e.is_zero()) == 1 for r in psit.rows)

    def test_inner_products(self):
        one = poly("1", ZZ, 0)
        e = lambda i, n: unit_vector(n, i, one)
        assert inner_product(LIN, e(1, 3), e(1, 3)) == 1
        assert inner_product(SP, e(1, 4), e(2, 4)) == 1
        assert inner_product(SP, e(2, 4), e(1, 4)) == -1
        assert inner_product(ORTH, e(1, 4), e(1, 4)) == 0

    def test_m_of_examples(self):
        one = poly("1", ZZ, 1)
        e1, e2 = unit_vector(3, 1, one), unit_vector(3, 2, one)
        expect = MatrixG.identity(3, one) * 0 + E(1, 2, one) - MatrixG.identity(3, one)
        assert m_of(LIN, e1, e2) == expect

    @given(st.lists(polys(ZZ, 2, 2, 2), min_size=6, max_size=6), st.lists(polys(ZZ, 2, 2, 2), min_size=6, max_size=6))
    def test_m_of_symmetries(self, v, w):
        assert m_of(SP, v, w) == m_of(SP, w, v)
        assert m_of(ORTH, v, v) == m_of(ORTH, v, v) * 0
        # bilinearity in the first slot
        vv = [a + a for a in v]
        assert m_of(LIN, vv, w) == m_of(LIN, v, w) + m_of(LIN, v, w)

    @given(st.sampled_from([SP, ORTH]), st.lists(polys(ZZ, 2, 2, 2), min_size=4, max_size=4))
    def test_transvection_fixes_form(self, case, tail):
        # v = e1 and w with w_2 = 0 (so <e1, w> = 0); orthogonal also needs <w, w> = 0
        like = tail[0]
        w = [tail[0], like.zero(), tail[1], tail[2], tail[3], like.zero()]
        if case is ORTH:
            w[5] = like.zero()
            w[3] = like.zero()
        e1 = unit_vector(6, 1, like)
        assert inner_product(case, e1, w).is_zero()
        assert is_in_G(case, MatrixG.identity(6, like) + m_of(case, e1, w))


class TestPredicates:
    def test_identity(self):
        eye = MatrixG.identity(6, x_())
        for case in GroupCase:
            assert is_in_G(case, eye) and is_in_S(case, eye)
        assert is_level_plus(eye)

    def test_symplectic_generator(self):
        assert is_in_G(SP, E(1, 2, x_(), 4, SP))

    def test_diagonal(self):
        d = diagonal([2, 1, 1], poly("1", QQ, 1))
        assert is_in_G(LIN, d) and not is_in_S(LIN, d)

    @given(st.sampled_from(CASE_SIZES[2:]).flatmap(lambda cn: st.tuples(words(*cn), words(*cn))))
    def test_closed_under_product_and_inverse(self, pair):
        wa, wb = pair
        a, b = wa.evaluate(), wb.evaluate()
        assert is_in_G(wa.case, a * b)
        assert is_in_G(wa.case, a.inverse())

    def test_plus_eval_examples(self):
        a = E(1, 2, poly("2 + x"))
        assert mat_plus_eval(a, 1) == a
        assert mat_plus_eval(E(1, 2, x_()), 0).is_identity()
        assert mat_plus_eval(a, 3) == E(1, 2, poly("2 + 3*x"))

    @given(square(3), square(3), st.integers(-3, 3))
    def test_plus_eval_multiplicative(self, a, b, t):
        assert (a * b).plus_eval(t) == a.plus_eval(t) * b.plus_eval(t)

    @given(words(), st.integers(-3, 3))
    def test_unit_det_survives_plus(self, w, t):
        a = w.evaluate()
        assert a.plus_eval(t).det() == a.det() == a.plus_eval(0).det()


class TestJson:
    @given(square())
    def test_round_trip(self, a):
        assert MatrixG.from_json(a.to_json()) == a

    def test_literal(self):
        a = M("1, x; 0, 1")
        assert a.n == 2 and a.entry(1, 2) == x_()
