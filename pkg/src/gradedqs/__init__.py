"""Exact graded-ring machinery for elementary subgroups of GL_n, Sp_2m and O_2m:
Swan-Weibel evaluation, elementary words, dilation and Local-Global patching."""

from .errors import (
    BadLocalData,
    DenominatorNotCleared,
    GradedQSError,
    NotComaximal,
    NotInCongruenceSubgroup,
    NotInvertible,
    NotUnimodular,
    OrthogonalityViolation,
    ParseError,
    PreconditionError,
    StructuralError,
)
from .localization import (
    ComaximalData,
    LocalCommutatorData,
    LocalIntegers,
    LocalizedMatrix,
    LocalizedPoly,
    PatchWitness,
    PrimeField,
    ResidueRing,
    comaximal_powers,
    commutator_patch,
    complete_unimodular,
    dilate_difference,
    dilate_pullback,
    dilation_exponent,
    injectivity_check,
    loc_arith,
    localize,
    localize_matrix,
    localize_word,
    patch_with_words,
    telescoping_patch,
)
from .matrices import (
    GroupCase,
    MatrixG,
    det,
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
from .poly import GradedPoly, grade_decompose, homogeneous_component, plus_eval, poly, ring_arith, swan_weibel_extend
from .rings import GF, QQ, ZZ, CoefficientRing
from .words import (
    ElemGen,
    ElemWord,
    Witness,
    commutator,
    commutator_factor,
    commutator_normal_form,
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

__version__ = "0.1.0"
