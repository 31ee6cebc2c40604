"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from looptransform.torus import TrigPoly

coefficient = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


def lattice_points(dim, bound=4):
    return st.tuples(*[st.integers(-bound, bound)] * dim)


@st.composite
def trig_polys(draw, dim=None, bound=4, max_terms=6):
    if dim is None:
        dim = draw(st.integers(1, 3))
    coeffs = draw(st.dictionaries(lattice_points(dim, bound), coefficient, max_size=max_terms))
    return TrigPoly(dim, coeffs)


@st.composite
def poly_pairs(draw, bound=4):
    dim = draw(st.integers(1, 3))
    return draw(trig_polys(dim, bound)), draw(trig_polys(dim, bound))


def integer_vectors(n, bound=50):
    return st.lists(st.integers(-bound, bound), min_size=n, max_size=n).map(tuple)
