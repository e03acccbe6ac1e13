import math

import numpy as np
import pytest

from diracmech.brackets import poisson_bracket
from diracmech.constraints import (ConstraintSet, classify, constraint_matrix,
                                   dirac_bracket, faddeev_popov_determinant,
                                   observable_check, pair_jacobian_check,
                                   reduced_bracket_check)
from diracmech.errors import DegeneracyError, UsageError
from diracmech.fields import coordinate_field, polynomial_field
from diracmech.models import KlauderModel
from diracmech.phase import ChartSpec

from conftest import fd_poisson_bracket, random_polynomial

FLAT = ChartSpec(labels=("q1", "q2", "p1", "p2"), name="flat")


@pytest.fixture
def model():
    return KlauderModel(alpha=1.0, k=1.0)


@pytest.fixture
def polar_coords(model):
    chart = model.polar_chart
    return {l: coordinate_field(chart, l) for l in chart.labels}


# -- constraint matrix ---------------------------------------------------------

def test_matrix_for_gauge_constraint_pair(model):
    x = model.polar_chart.point([1.0, 0.0, 1.0, 0.0])
    m = constraint_matrix(model.constraint_set, x)
    assert np.allclose(m, [[0.0, 2.0], [-2.0, 0.0]], atol=1e-12)
    # cross-check the entry against the value-only finite-difference oracle
    fd = fd_poisson_bracket(model.gauge_condition, model.constraint, x.coords)
    assert m[0, 1] == pytest.approx(fd, abs=1e-7)


def test_matrix_single_constraint():
    cs = ConstraintSet(FLAT, (coordinate_field(FLAT, "q1"),), ("q1",))
    m = constraint_matrix(cs, FLAT.point([0.0, 1.0, 2.0, 3.0]))
    assert m.shape == (1, 1) and m[0, 0] == 0.0


def test_matrix_canonical_pair():
    cs = ConstraintSet(FLAT, (coordinate_field(FLAT, "q1"), coordinate_field(FLAT, "p1")),
                       ("q1", "p1"))
    m = constraint_matrix(cs, FLAT.point([0.0, 0.0, 0.0, 0.0]))
    assert np.array_equal(m, [[0.0, 1.0], [-1.0, 0.0]])


def test_matrix_antisymmetry_random(model, rng):
    for x in model.sample_points(rng, 25):
        m = constraint_matrix(model.constraint_set, x)
        assert np.max(np.abs(m + m.T)) < 1e-12


# -- classification -------------------------------------------------------------

def test_classify_second_class_pair(model, rng):
    samples = model.sample_surface(rng, 20)
    result = classify(model.constraint_set, samples, tol=1e-8)
    assert result.kind == "second_class"
    assert result.rank == 2
    # |det M| = ({chi, C})^2 = (2 alpha^2 r*^2)^2 at every sample
    dets = []
    for x in samples:
        r_star = x["r"]
        dets.append((2.0 * model.alpha ** 2 * r_star ** 2) ** 2)
    assert result.det_M == pytest.approx(min(dets), rel=1e-9)


def test_classify_constraint_alone_first_class(model, rng):
    alone = ConstraintSet(model.polar_chart, (model.constraint,), ("C",))
    samples = model.sample_surface(rng, 10)
    result = classify(alone, samples, tol=1e-8)
    assert result.kind == "first_class"
    assert any("odd" in note for note in result.notes)


def test_classify_two_positions_first_class(rng):
    cs = ConstraintSet(FLAT, (coordinate_field(FLAT, "q1"), coordinate_field(FLAT, "q2")),
                       ("q1", "q2"))
    samples = [FLAT.point([0.0, 0.0, *rng.uniform(-3, 3, 2)]) for _ in range(5)]
    assert classify(cs, samples, tol=1e-8).kind == "first_class"


def test_classify_rejects_off_surface_sample(model):
    off = model.polar_chart.point([2.0, 0.0, 3.0, 1.0])
    with pytest.raises(UsageError, match="chi|C"):
        classify(model.constraint_set, [off], tol=1e-8)


def test_classify_mixed(rng):
    # (q1, p1, q2): canonical pair plus a commuting extra -> mixed, rank 2
    cs = ConstraintSet(FLAT, (coordinate_field(FLAT, "q1"), coordinate_field(FLAT, "p1"),
                              coordinate_field(FLAT, "q2")), ("q1", "p1", "q2"))
    samples = [FLAT.point([0.0, 0.0, 0.0, rng.uniform(-3, 3)]) for _ in range(5)]
    result = classify(cs, samples, tol=1e-8)
    assert result.kind == "mixed_or_degenerate"
    assert result.rank == 2


# -- dirac bracket --------------------------------------------------------------

def test_dirac_radial_pair_vanishes(model, polar_coords, rng):
    for x in model.sample_surface(rng, 10):
        assert abs(dirac_bracket(polar_coords["r"], polar_coords["p_r"],
                                 model.constraint_set, x)) < 1e-12


def test_dirac_angle_pair_stays_canonical(model, polar_coords, rng):
    for x in model.sample_points(rng, 10):
        assert dirac_bracket(polar_coords["phi"], polar_coords["p_phi"],
                             model.constraint_set, x) == pytest.approx(1.0, abs=1e-12)


def test_dirac_r_phi_closed_form(polar_coords):
    # at (r=sqrt2, p_r=0, p_phi=2), alpha=1, k=0: -p_phi/(r (p^2 + r^2)) = -1/(2 sqrt2)
    model = KlauderModel(alpha=1.0, k=0.0)
    x = model.polar_chart.point([math.sqrt(2.0), 0.0, 0.0, 2.0])
    value = dirac_bracket(polar_coords["r"], polar_coords["phi"], model.constraint_set, x)
    assert value == pytest.approx(-2.0 / (math.sqrt(2.0) * 4.0), abs=1e-12)
    assert value == pytest.approx(model.dirac_oracle(("r", "phi"), x), abs=1e-12)


def test_dirac_reduces_to_poisson_on_empty_set(rng):
    empty = ConstraintSet(FLAT, (), ())
    for _ in range(25):
        a, b = random_polynomial(FLAT, rng, name="a"), random_polynomial(FLAT, rng, name="b")
        x = FLAT.point(rng.uniform(-4, 4, 4))
        assert abs(dirac_bracket(a, b, empty, x) - poisson_bracket(a, b, x)) < 1e-12


def test_dirac_antisymmetry(model, rng):
    for _ in range(30):
        a = random_polynomial(model.polar_chart, rng, name="a")
        b = random_polynomial(model.polar_chart, rng, name="b")
        x = model.sample_points(rng, 1)[0]
        assert abs(dirac_bracket(a, b, model.constraint_set, x)
                   + dirac_bracket(b, a, model.constraint_set, x)) < 1e-10


def test_dirac_degenerate_set_raises():
    # a pair of commuting constraints has a singular pairing matrix
    cs = ConstraintSet(FLAT, (coordinate_field(FLAT, "q1"), coordinate_field(FLAT, "q2")),
                       ("q1", "q2"))
    a, b = coordinate_field(FLAT, "p1"), coordinate_field(FLAT, "q1")
    with pytest.raises(DegeneracyError, match="Second Class"):
        dirac_bracket(a, b, cs, FLAT.point([0.0, 0.0, 1.0, 1.0]))


# -- observables -----------------------------------------------------------------

def test_observables_commute_with_constraints(model, polar_coords, rng):
    samples = model.sample_points(rng, 100)
    assert observable_check(polar_coords["r"], model.constraint_set, samples).max_abs < 1e-9
    assert observable_check(model.gauge_condition, model.constraint_set,
                            samples).max_abs < 1e-9
    any_poly = random_polynomial(model.polar_chart, rng, degree=3, name="obs")
    assert observable_check(any_poly, model.constraint_set, samples).max_abs < 1e-9


# -- reduced-bracket theorem -------------------------------------------------------

def test_reduced_bracket_angle_pair(model, polar_coords):
    param = model.surface_parametrization
    zred = param.reduced_chart.point([0.7, 2.0])
    report = reduced_bracket_check(polar_coords["phi"], polar_coords["p_phi"],
                                   model.constraint_set, param, zred)
    assert report.dirac_value == pytest.approx(1.0, abs=1e-12)
    assert report.reduced_pb_value == pytest.approx(1.0, abs=1e-12)
    assert report.abs_diff < 1e-12


def test_reduced_bracket_radial_pair(model, polar_coords):
    # r and p_r both embed as functions of p_phi alone: reduced bracket vanishes
    param = model.surface_parametrization
    zred = param.reduced_chart.point([1.2, -3.0])
    report = reduced_bracket_check(polar_coords["r"], polar_coords["p_r"],
                                   model.constraint_set, param, zred)
    assert abs(report.dirac_value) < 1e-10
    assert abs(report.reduced_pb_value) < 1e-10


def test_reduced_bracket_phi_r_closed_form(model, polar_coords):
    param = model.surface_parametrization
    p_phi = 2.0
    zred = param.reduced_chart.point([0.0, p_phi])
    report = reduced_bracket_check(polar_coords["phi"], polar_coords["r"],
                                   model.constraint_set, param, zred)
    r_star = model.reduced_point(p_phi)[0]
    expected = r_star * p_phi / (2.0 * (p_phi ** 2 + model.k_at(0.0) ** 2))
    assert report.dirac_value == pytest.approx(expected, abs=1e-10)
    assert report.abs_diff < 1e-10


def test_reduced_bracket_rejects_off_surface_embedding(model, polar_coords):
    from diracmech.constraints import SurfaceParametrization

    broken = SurfaceParametrization(
        reduced_chart=model.reduced_chart,
        embed=lambda z: [2.0, z[0], 0.0, z[1]])  # not on the surface
    zred = model.reduced_chart.point([0.0, 1.0])
    with pytest.raises(UsageError, match="surface"):
        reduced_bracket_check(polar_coords["phi"], polar_coords["p_phi"],
                              model.constraint_set, broken, zred)


def test_reduced_bracket_random_fields(model, rng):
    param = model.surface_parametrization
    for _ in range(10):
        a = random_polynomial(model.polar_chart, rng, name="a")
        b = random_polynomial(model.polar_chart, rng, name="b")
        zred = param.reduced_chart.point([rng.uniform(0, 2 * np.pi), rng.uniform(-5, 5)])
        assert reduced_bracket_check(a, b, model.constraint_set, param, zred).abs_diff < 1e-8


# -- canonical-measure weight -------------------------------------------------------

def test_fp_determinant_values(model):
    x = model.polar_chart.point([1.0, 0.0, 1.0, 0.0])
    assert faddeev_popov_determinant([model.gauge_condition], [model.constraint], x) \
        == pytest.approx(2.0, abs=1e-12)
    # canonical pair as gauge/constraint
    q1, p1 = coordinate_field(FLAT, "q1"), coordinate_field(FLAT, "p1")
    assert faddeev_popov_determinant([q1], [p1], FLAT.point([0, 0, 0, 0])) == 1.0
    # on the surface with k=1, p_phi=0: r* = 1, weight 2 alpha^2 r*^2 = 2
    x_surf = model.embed_reduced(0.0, 0.0)
    assert faddeev_popov_determinant([model.gauge_condition], [model.constraint], x_surf) \
        == pytest.approx(2.0, abs=1e-12)


def test_fp_determinant_count_mismatch(model):
    with pytest.raises(UsageError, match="equally many"):
        faddeev_popov_determinant([model.gauge_condition], [],
                                  model.polar_chart.point([1.0, 0.0, 0.0, 0.0]))


def test_pair_jacobian_matches_bracket(model, rng):
    x = model.polar_chart.point([1.0, 0.0, 1.0, 0.0])
    report = pair_jacobian_check(model.gauge_condition, model.constraint, x, ("r", "p_r"))
    assert report.jacobian_det == pytest.approx(2.0, abs=1e-12)
    assert report.bracket_value == pytest.approx(2.0, abs=1e-12)

    x2 = model.polar_chart.point([2.0, 0.0, 0.0, 3.0])
    report2 = pair_jacobian_check(model.gauge_condition, model.constraint, x2, ("r", "p_r"))
    assert report2.jacobian_det == pytest.approx(6.25, abs=1e-12)  # p^2 + r^2 = 9/4 + 4

    for x3 in model.sample_points(rng, 20):
        assert pair_jacobian_check(model.gauge_condition, model.constraint, x3,
                                   ("r", "p_r")).abs_diff < 1e-9


# -- constraint set validation --------------------------------------------------------

def test_constraint_set_validation(model):
    with pytest.raises(UsageError):
        ConstraintSet(FLAT, (coordinate_field(FLAT, "q1"),), ("a", "b"))
    too_many = tuple(coordinate_field(FLAT, l) for l in FLAT.labels)
    with pytest.raises(UsageError):
        ConstraintSet(FLAT, too_many + (polynomial_field(FLAT, [(1.0, (2, 0, 0, 0))]),),
                      tuple("c" + str(i) for i in range(5)))
    assert not ConstraintSet(model.polar_chart, (model.constraint,), ("C",)).even_count
