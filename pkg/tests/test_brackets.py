import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diracmech.brackets import poisson_bracket, poisson_bracket_field
from diracmech.errors import ChartMismatchError
from diracmech.fields import coordinate_field, field_product
from diracmech.models import KlauderModel
from diracmech.phase import ChartSpec

from conftest import fd_poisson_bracket, random_polynomial

CHART = ChartSpec(labels=("q1", "q2", "p1", "p2"), name="flat")
Q1, Q2, P1, P2 = (coordinate_field(CHART, l) for l in CHART.labels)


def test_canonical_pair_is_one():
    x = CHART.point([0.3, -1.2, 4.0, 0.9])
    assert poisson_bracket(Q1, P1, x) == 1.0
    assert poisson_bracket(Q1, P2, x) == 0.0
    assert poisson_bracket(Q1, Q2, x) == 0.0
    assert poisson_bracket(P1, P2, x) == 0.0


def test_gauge_with_constraint_bracket_value():
    # chi = r p_r - k against the radial constraint: p_r^2 + p_phi^2/r^2 + alpha^2 r^2
    model = KlauderModel(alpha=1.0, k=1.0)
    x = model.polar_chart.point([1.0, 0.0, 1.0, 0.0])
    assert poisson_bracket(model.gauge_condition, model.constraint, x) == pytest.approx(2.0, abs=1e-12)
    # and the same value from the value-only finite-difference oracle
    assert fd_poisson_bracket(model.gauge_condition, model.constraint, x.coords) == \
        pytest.approx(2.0, abs=1e-7)


def test_self_bracket_vanishes(rng):
    f = random_polynomial(CHART, rng)
    x = CHART.point(rng.uniform(-3, 3, 4))
    assert poisson_bracket(f, f, x) == 0.0


def test_chart_mismatch_raises():
    other = ChartSpec(labels=("a", "b"), name="other")
    with pytest.raises(ChartMismatchError):
        poisson_bracket(Q1, coordinate_field(other, "a"), CHART.point([0, 0, 0, 0]))


coordinate = st.floats(min_value=-5, max_value=5, allow_nan=False)


@given(st.lists(coordinate, min_size=4, max_size=4))
@settings(max_examples=40, deadline=None)
def test_canonical_relations_everywhere(coords):
    x = CHART.point(coords)
    for i, q in enumerate((Q1, Q2)):
        for j, p in enumerate((P1, P2)):
            assert poisson_bracket(q, p, x) == (1.0 if i == j else 0.0)


def test_antisymmetry_property(rng):
    for _ in range(100):
        a = random_polynomial(CHART, rng, name="a")
        b = random_polynomial(CHART, rng, name="b")
        x = CHART.point(rng.uniform(-5, 5, 4))
        assert abs(poisson_bracket(a, b, x) + poisson_bracket(b, a, x)) < 1e-12


def test_leibniz_property(rng):
    for _ in range(100):
        a = random_polynomial(CHART, rng, name="a")
        b = random_polynomial(CHART, rng, name="b")
        c = random_polynomial(CHART, rng, name="c")
        x = CHART.point(rng.uniform(-3, 3, 4))
        left = poisson_bracket(field_product(a, b), c, x)
        right = a.value(x) * poisson_bracket(b, c, x) + b.value(x) * poisson_bracket(a, c, x)
        assert abs(left - right) <= 1e-10 * max(1.0, abs(left), abs(right))


def test_jacobi_identity_via_finite_differences(rng):
    # nested brackets differentiated numerically from bracket values
    for _ in range(100):
        a = random_polynomial(CHART, rng, degree=2, terms=4, name="a")
        b = random_polynomial(CHART, rng, degree=2, terms=4, name="b")
        c = random_polynomial(CHART, rng, degree=2, terms=4, name="c")
        x = CHART.point(rng.uniform(-2, 2, 4))
        cyclic = (poisson_bracket(a, poisson_bracket_field(b, c), x)
                  + poisson_bracket(b, poisson_bracket_field(c, a), x)
                  + poisson_bracket(c, poisson_bracket_field(a, b), x))
        assert abs(cyclic) < 1e-8


def test_bracket_matches_fd_oracle_for_model_fields(rng):
    model = KlauderModel(alpha=1.3, k=0.4)
    for x in model.sample_points(rng, 20):
        exact = poisson_bracket(model.gauge_condition, model.constraint, x)
        probe = fd_poisson_bracket(model.gauge_condition, model.constraint, x.coords)
        assert exact == pytest.approx(probe, rel=1e-6, abs=1e-6)
