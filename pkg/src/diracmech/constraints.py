"""Constraint sets, classification, and the Dirac bracket.

For constraints Phi_1..Phi_M the pairing matrix is M_IJ = {Phi_I, Phi_J}.
When it is invertible on the constraint surface the set is Second Class and

    {A,B}_D = {A,B} - {A,Phi_I} (M^-1)^IJ {Phi_J,B}

defines the Dirac bracket, under which every function commutes with every
constraint. When the pairing matrix vanishes on the surface the set is First
Class (its elements generate gauge transformations instead of fixing a
reduced phase space). Everything in between is reported as mixed/degenerate
with a rank estimate.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.linalg

from .brackets import bracket_of_gradients, poisson_bracket
from .errors import DegeneracyError, UsageError
from .fields import ScalarField, pullback_field
from .phase import ChartSpec, PhaseSpacePoint, require_same_chart

# |det M| <= DEGENERACY_RTOL * max(1, prod of row norms) counts as singular
DEGENERACY_RTOL = 1e-10

ON_SURFACE_TOL = 1e-9


@dataclass(frozen=True)
class TimeRamp:
    """Additive explicit-time part of a constraint: Phi(z,t) = Phi(z) + offset(t)."""

    offset: Callable[[float], float]
    rate: Callable[[float], float]


@dataclass(frozen=True)
class ConstraintSet:
    """Ordered constraints and auxiliary conditions, lumped together."""

    chart: ChartSpec
    fields: tuple[ScalarField, ...]
    names: tuple[str, ...]
    time_ramps: Optional[tuple[Optional[TimeRamp], ...]] = dfield(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "fields", tuple(self.fields))
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) != len(self.fields):
            raise UsageError("one name per constraint field")
        if self.fields:
            require_same_chart(self, *self.fields)
        if len(self.fields) > self.chart.dim:
            raise UsageError(
                f"{len(self.fields)} constraints exceed the chart dimension {self.chart.dim}"
            )
        if self.time_ramps is not None and len(self.time_ramps) != len(self.fields):
            raise UsageError("one time ramp (or None) per constraint field")

    def __len__(self) -> int:
        return len(self.fields)

    @property
    def even_count(self) -> bool:
        return len(self.fields) % 2 == 0

    @property
    def time_dependent(self) -> bool:
        return self.time_ramps is not None and any(r is not None for r in self.time_ramps)

    def values_at(self, coords, t: float = 0.0) -> np.ndarray:
        vals = np.array([f.value_at(coords) for f in self.fields])
        if self.time_ramps is not None:
            for i, ramp in enumerate(self.time_ramps):
                if ramp is not None:
                    vals[i] += ramp.offset(t)
        return vals

    def rates_at(self, t: float) -> np.ndarray:
        rates = np.zeros(len(self.fields))
        if self.time_ramps is not None:
            for i, ramp in enumerate(self.time_ramps):
                if ramp is not None:
                    rates[i] = ramp.rate(t)
        return rates

    def gradient_rows(self, coords) -> np.ndarray:
        if not self.fields:
            return np.zeros((0, self.chart.dim))
        return np.stack([f.gradient_at(coords) for f in self.fields])

    def residuals(self, coords, t: float = 0.0) -> dict[str, float]:
        vals = self.values_at(coords, t)
        return {name: abs(float(v)) for name, v in zip(self.names, vals)}


def pairing_matrix_of_rows(rows: np.ndarray, n_pairs: int) -> np.ndarray:
    """M_IJ = {Phi_I, Phi_J} from stacked gradient rows; antisymmetric by construction."""
    gq, gp = rows[:, :n_pairs], rows[:, n_pairs:]
    a = gq @ gp.T
    return a - a.T


def constraint_matrix(cs: ConstraintSet, x: PhaseSpacePoint) -> np.ndarray:
    require_same_chart(cs, x)
    return pairing_matrix_of_rows(cs.gradient_rows(x.coords), cs.chart.n_pairs)


def degeneracy_scale(m: np.ndarray) -> float:
    if m.shape[0] == 0:
        return 1.0
    return float(max(1.0, np.prod(np.linalg.norm(m, axis=1))))


def pairing_det(m: np.ndarray) -> float:
    if m.shape[0] == 0:
        return 1.0
    if m.shape[0] == 2:
        return float(m[0, 1] * m[0, 1])
    return float(np.linalg.det(m))


def _solve_pairing(m: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    # closed 2x2 form; pivoted LU beyond that
    if m.shape[0] == 2:
        delta = m[0, 1]
        return np.array([-rhs[1] / delta, rhs[0] / delta])
    return scipy.linalg.lu_solve(scipy.linalg.lu_factor(m), rhs)


def _require_invertible(m: np.ndarray, coords=None) -> float:
    det = pairing_det(m)
    if abs(det) <= DEGENERACY_RTOL * degeneracy_scale(m):
        raise DegeneracyError(
            f"constraint pairing matrix is singular (det={det:.3e}); "
            "system is not Second Class here",
            det=det, coords=None if coords is None else np.array(coords),
        )
    return det


@dataclass(frozen=True)
class ClassificationResult:
    kind: str  # second_class | first_class | mixed_or_degenerate
    det_M: float
    rank: int
    tolerance_used: float
    sample_points: tuple[PhaseSpacePoint, ...]
    notes: tuple[str, ...] = ()


def _require_on_surface(cs: ConstraintSet, x: PhaseSpacePoint, tol: float = ON_SURFACE_TOL):
    res = cs.residuals(x.coords)
    for name, value in res.items():
        if value >= tol:
            raise UsageError(f"sample violates constraint {name!r}: |{name}| = {value:.3e}")


def classify(cs: ConstraintSet, samples: Sequence[PhaseSpacePoint], tol: float) -> ClassificationResult:
    """Classify a constraint set on on-surface samples.

    second_class: |det M| > tol * (product of row norms) at every sample;
    first_class: max |M_IJ| < tol at every sample;
    otherwise mixed_or_degenerate, with the rank from a pivoted QR.
    """
    if tol <= 0:
        raise UsageError("classification tolerance must be positive")
    if not samples:
        raise UsageError("classification needs at least one sample")
    notes = []
    if not cs.even_count:
        notes.append(f"odd constraint count M={len(cs)}: cannot be Second Class")

    all_second, all_first = True, True
    min_abs_det = np.inf
    min_rank = len(cs)
    for x in samples:
        require_same_chart(cs, x)
        _require_on_surface(cs, x)
        m = constraint_matrix(cs, x)
        det = pairing_det(m)
        min_abs_det = min(min_abs_det, abs(det))
        scale = np.prod(np.linalg.norm(m, axis=1)) if len(cs) else 1.0
        if not (abs(det) > tol * max(scale, np.finfo(float).tiny)):
            all_second = False
        if not (np.max(np.abs(m)) < tol if len(cs) else True):
            all_first = False
        if not (all_second or all_first):
            _, r, _ = scipy.linalg.qr(m, pivoting=True)
            diag = np.abs(np.diag(r))
            cutoff = tol * max(diag[0], 1.0) if diag.size else 0.0
            min_rank = min(min_rank, int(np.sum(diag > cutoff)))

    if all_second and cs.even_count and len(cs) > 0:
        kind, rank = "second_class", len(cs)
    elif all_first:
        kind, rank = "first_class", 0
    else:
        kind, rank = "mixed_or_degenerate", min_rank
    return ClassificationResult(kind=kind, det_M=float(min_abs_det), rank=rank,
                                tolerance_used=tol, sample_points=tuple(samples),
                                notes=tuple(notes))


def dirac_bracket(a: ScalarField, b: ScalarField, cs: Optional[ConstraintSet],
                  x: PhaseSpacePoint) -> float:
    """{a,b}_D at x; with an empty constraint set this is the Poisson bracket."""
    if cs is None or len(cs) == 0:
        return poisson_bracket(a, b, x)
    chart = require_same_chart(a, b, cs, x)
    n = chart.n_pairs
    ga = a.gradient(x)
    gb = b.gradient(x)
    rows = cs.gradient_rows(x.coords)
    m = pairing_matrix_of_rows(rows, n)
    _require_invertible(m, x.coords)
    pb = bracket_of_gradients(ga, gb, n)
    # v_a[I] = {a, Phi_I}; v_b[J] = {Phi_J, b}
    v_a = rows[:, n:] @ ga[:n] - rows[:, :n] @ ga[n:]
    v_b = rows[:, :n] @ gb[n:] - rows[:, n:] @ gb[:n]
    return float(pb - v_a @ _solve_pairing(m, v_b))


@dataclass(frozen=True)
class ObservableReport:
    max_abs: float
    per_constraint: dict[str, float]


def observable_check(a: ScalarField, cs: ConstraintSet,
                     samples: Sequence[PhaseSpacePoint]) -> ObservableReport:
    """Max |{a, Phi_I}_D| over samples; ~0 is the Second Class observable identity."""
    worst = {name: 0.0 for name in cs.names}
    for x in samples:
        for name, phi in zip(cs.names, cs.fields):
            worst[name] = max(worst[name], abs(dirac_bracket(a, phi, cs, x)))
    return ObservableReport(max_abs=max(worst.values()), per_constraint=worst)


@dataclass(frozen=True)
class SurfaceParametrization:
    """Embedding of a reduced chart onto the constraint surface.

    ``embed`` maps reduced coordinates to full-chart coordinates, must land on
    the surface (checked to 1e-9), and must be dual-capable so pullbacks can
    be differentiated exactly.
    """

    reduced_chart: ChartSpec
    embed: Callable = dfield(compare=False)

    def embed_point(self, full_chart: ChartSpec, reduced_point: PhaseSpacePoint) -> PhaseSpacePoint:
        require_same_chart(self, reduced_point)
        coords = np.array([float(v) for v in self.embed(np.asarray(reduced_point.coords))])
        return PhaseSpacePoint(full_chart, coords)

    @property
    def chart(self) -> ChartSpec:
        return self.reduced_chart


@dataclass(frozen=True)
class ReducedBracketReport:
    dirac_value: float
    reduced_pb_value: float
    abs_diff: float


def reduced_bracket_check(a: ScalarField, b: ScalarField, cs: ConstraintSet,
                          param: SurfaceParametrization,
                          reduced_point: PhaseSpacePoint) -> ReducedBracketReport:
    """Dirac bracket vs. Poisson bracket of the pullbacks in reduced variables.

    For Second Class systems the two agree (Maskawa-Nakajima): canonical
    coordinates adapted to the surface turn the Dirac bracket into the plain
    Poisson bracket of the reduced chart.
    """
    x = param.embed_point(cs.chart, reduced_point)
    bad = [n for n, v in cs.residuals(x.coords).items() if v >= ON_SURFACE_TOL]
    if bad:
        raise UsageError(f"embedding leaves the constraint surface: {', '.join(bad)}")
    dirac_value = dirac_bracket(a, b, cs, x)
    a_red = pullback_field(a, param.embed, param.reduced_chart)
    b_red = pullback_field(b, param.embed, param.reduced_chart)
    reduced_value = poisson_bracket(a_red, b_red, reduced_point)
    return ReducedBracketReport(dirac_value=dirac_value, reduced_pb_value=reduced_value,
                                abs_diff=abs(dirac_value - reduced_value))


def faddeev_popov_determinant(gauge_conditions: Sequence[ScalarField],
                              constraints: Sequence[ScalarField],
                              x: PhaseSpacePoint) -> float:
    """det of the K x K matrix {chi_i, C_j}; the canonical-measure weight."""
    if len(gauge_conditions) != len(constraints):
        raise UsageError(
            f"need equally many gauge conditions and constraints, "
            f"got {len(gauge_conditions)} and {len(constraints)}"
        )
    k = len(constraints)
    m = np.empty((k, k))
    for i, chi in enumerate(gauge_conditions):
        for j, c in enumerate(constraints):
            m[i, j] = poisson_bracket(chi, c, x)
    return float(np.linalg.det(m)) if k > 1 else float(m[0, 0])


@dataclass(frozen=True)
class JacobianReport:
    jacobian_det: float
    bracket_value: float
    abs_diff: float


def pair_jacobian_check(gauge: ScalarField, constraint: ScalarField, x: PhaseSpacePoint,
                        pair_labels: tuple[str, str]) -> JacobianReport:
    """det d(chi,C)/d(labels) vs {chi,C}; equal when both fields ignore the other pair.

    This is the change-of-variables identity behind the canonical measure: the
    density of (chi, C) against the eliminated pair equals the mutual bracket.
    """
    chart = require_same_chart(gauge, constraint, x)
    i1, i2 = chart.index(pair_labels[0]), chart.index(pair_labels[1])
    g_chi = gauge.gradient(x)
    g_c = constraint.gradient(x)
    jac = g_chi[i1] * g_c[i2] - g_chi[i2] * g_c[i1]
    bracket = poisson_bracket(gauge, constraint, x)
    return JacobianReport(jacobian_det=float(jac), bracket_value=bracket,
                          abs_diff=abs(float(jac) - bracket))
