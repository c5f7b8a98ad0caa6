import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gradedqs.matrices import GroupCase, sigma
from gradedqs.poly import GradedPoly
from gradedqs.rings import GF, QQ, ZZ
from gradedqs.words import ElemGen, ElemWord

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.large_base_example],
)
settings.register_profile(
    "thorough",
    max_examples=400,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.large_base_example],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

RINGS = [ZZ, QQ, GF(2), GF(5), GF(7)]


def exponents(nvars, max_degree=3):
    return st.lists(st.integers(0, max_degree), min_size=nvars, max_size=nvars).filter(
        lambda e: sum(e) <= max_degree
    ).map(tuple)


@st.composite
def polys(draw, ring=ZZ, nvars=2, max_degree=3, max_terms=4, plus_only=False):
    terms = draw(
        st.dictionaries(
            exponents(nvars, max_degree).filter(lambda e: sum(e) > 0 or not plus_only),
            st.integers(-9, 9),
            max_size=max_terms,
        )
    )
    return GradedPoly(ring, nvars, terms)


@st.composite
def ring_and_polys(draw, count=2, nvars=2):
    ring = draw(st.sampled_from(RINGS))
    return (ring,) + tuple(draw(polys(ring, nvars)) for _ in range(count))


def scalars(ring):
    return st.integers(-6, 6).map(ring.coerce)


CASE_SIZES = [
    (GroupCase.LINEAR, 3),
    (GroupCase.LINEAR, 4),
    (GroupCase.SYMPLECTIC, 4),
    (GroupCase.SYMPLECTIC, 6),
    (GroupCase.ORTHOGONAL, 6),
]


@st.composite
def gens(draw, case, n, nvars=2, plus_only=False):
    pairs = [
        (i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j and not (case is GroupCase.ORTHOGONAL and i == sigma(j))
    ]
    i, j = draw(st.sampled_from(pairs))
    return ElemGen.make(case, n, i, j, draw(polys(ZZ, nvars, max_degree=2, max_terms=3, plus_only=plus_only)))


@st.composite
def words(draw, case=None, n=None, max_len=4, nvars=2):
    if case is None:
        case, n = draw(st.sampled_from(CASE_SIZES))
    gs = draw(st.lists(gens(case, n, nvars), min_size=0, max_size=max_len))
    like = GradedPoly.constant(ZZ, nvars, 0)
    return ElemWord(case, n, tuple(gs), like)


def pytest_terminal_summary(terminalreporter):
    import sys

    test_acceptance = sys.modules.get("test_acceptance")
    if test_acceptance is None or not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(test_acceptance.RESULTS):
        name, ok, slowest, limit = test_acceptance.RESULTS[number]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number} {name}: {verdict} (slowest seed {slowest:.2f}s, limit {limit}s)")
