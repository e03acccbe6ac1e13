"""Differentiable scalar fields on phase space.

A field wraps a pure function of the coordinates. Gradients come from one of
three routes: a registered closed form, exact forward-mode differentiation
(dual numbers; the default), or central finite differences with step
h = cbrt(machine eps) * max(1, |x_i|). Evaluation and gradients are pure:
the same coordinates always produce bitwise-identical results.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from typing import Callable, Optional, Sequence

import numpy as np

from . import duals
from .errors import NumericDomainError, UsageError
from .phase import ChartSpec, PhaseSpacePoint, require_same_chart

_CBRT_EPS = float(np.finfo(float).eps) ** (1.0 / 3.0)


def fd_steps(coords: np.ndarray, step: Optional[float] = None) -> np.ndarray:
    """Per-coordinate central-difference steps (optimal for 2nd-order schemes)."""
    if step is not None:
        return np.full(len(coords), float(step))
    return _CBRT_EPS * np.maximum(1.0, np.abs(coords))


def central_difference_gradient(func, coords, step: Optional[float] = None) -> np.ndarray:
    coords = np.asarray(coords, dtype=float)
    h = fd_steps(coords, step)
    grad = np.empty_like(coords)
    for i in range(len(coords)):
        up = np.array(coords)
        dn = np.array(coords)
        up[i] += h[i]
        dn[i] -= h[i]
        grad[i] = (float(func(up)) - float(func(dn))) / (up[i] - dn[i])
    return grad


@dataclass(frozen=True)
class ScalarField:
    """Real-valued function of the phase-space coordinates.

    ``func`` receives either a float array (evaluation) or a list of dual
    numbers (exact differentiation), so it must be written with the helpers
    in :mod:`diracmech.duals` for anything beyond arithmetic. Fields with a
    black-box ``func`` should register a closed-form ``grad`` or set
    ``fd_step`` to opt into numerical gradients.
    """

    name: str
    chart: ChartSpec
    func: Callable = dfield(compare=False)
    grad: Optional[Callable] = dfield(default=None, compare=False)
    fd_step: Optional[float] = None  # set -> numerical gradients with this step (None = auto)
    numerical: bool = False

    @property
    def gradient_kind(self) -> str:
        if self.numerical:
            return f"numerical(step={self.fd_step if self.fd_step is not None else 'auto'})"
        return "exact"

    # raw-coordinate fast path, used by the integrators -------------------
    def value_at(self, coords) -> float:
        return float(self.func(np.asarray(coords, dtype=float)))

    def gradient_at(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=float)
        if self.numerical:
            return central_difference_gradient(self.func, coords, self.fd_step)
        if self.grad is not None:
            return np.asarray(self.grad(coords), dtype=float)
        return duals.gradient(self.func, coords)

    # validated point API --------------------------------------------------
    def value(self, x: PhaseSpacePoint) -> float:
        require_same_chart(self, x)
        return self.value_at(x.coords)

    def gradient(self, x: PhaseSpacePoint) -> np.ndarray:
        require_same_chart(self, x)
        g = self.gradient_at(x.coords)
        if not np.all(np.isfinite(g)):
            bad = self.chart.labels[int(np.argmin(np.isfinite(g)))]
            raise NumericDomainError(
                f"gradient of {self.name!r} is non-finite in coordinate {bad!r}"
            )
        return g

    def __repr__(self):
        return f"ScalarField({self.name!r} on {self.chart.name!r}, {self.gradient_kind})"


def function_field(chart, name, func, grad=None, fd_step=None, numerical=False) -> ScalarField:
    return ScalarField(name=name, chart=chart, func=func, grad=grad,
                       fd_step=fd_step, numerical=numerical)


def coordinate_field(chart: ChartSpec, label: str) -> ScalarField:
    """The coordinate function z -> z_label, with exact unit gradient."""
    i = chart.index(label)
    basis = np.zeros(chart.dim)
    basis[i] = 1.0
    basis.setflags(write=False)
    return ScalarField(name=label, chart=chart,
                       func=lambda z, i=i: z[i],
                       grad=lambda z, b=basis: b)


def constant_field(chart: ChartSpec, value: float, name: Optional[str] = None) -> ScalarField:
    value = float(value)
    zero = np.zeros(chart.dim)
    zero.setflags(write=False)
    return ScalarField(name=name or f"const({value:g})", chart=chart,
                       func=lambda z, v=value: v,
                       grad=lambda z, g=zero: g)


def polynomial_field(chart: ChartSpec, terms: Sequence[tuple[float, Sequence[int]]],
                     name: str = "poly") -> ScalarField:
    """Multivariate polynomial sum_k c_k * prod_i z_i^e_ki with exact gradient."""
    cleaned = []
    for coeff, powers in terms:
        powers = tuple(int(p) for p in powers)
        if len(powers) != chart.dim:
            raise UsageError(f"term exponents need length {chart.dim}, got {len(powers)}")
        if any(p < 0 for p in powers):
            raise UsageError("polynomial exponents must be non-negative")
        cleaned.append((float(coeff), powers))
    cleaned = tuple(cleaned)

    def func(z, terms=cleaned):
        total = 0.0
        for coeff, powers in terms:
            term = coeff
            for i, p in enumerate(powers):
                for _ in range(p):
                    term = term * z[i]
            total = total + term
        return total

    def grad(z, terms=cleaned, dim=chart.dim):
        g = np.zeros(dim)
        for coeff, powers in terms:
            for j, pj in enumerate(powers):
                if pj == 0:
                    continue
                term = coeff * pj
                for i, p in enumerate(powers):
                    e = p - 1 if i == j else p
                    if e:
                        term *= z[i] ** e
                g[j] += term
        return g

    return ScalarField(name=name, chart=chart, func=func, grad=grad)


def field_product(a: ScalarField, b: ScalarField, name: Optional[str] = None) -> ScalarField:
    chart = require_same_chart(a, b)
    numerical = a.numerical or b.numerical
    grad = None
    if not numerical and a.grad is not None and b.grad is not None:
        def grad(z, a=a, b=b):
            return a.func(z) * b.grad(z) + b.func(z) * a.grad(z)
    return ScalarField(name=name or f"({a.name})*({b.name})", chart=chart,
                       func=lambda z, a=a, b=b: a.func(z) * b.func(z),
                       grad=grad, numerical=numerical,
                       fd_step=a.fd_step if a.numerical else b.fd_step)


def field_sum(a: ScalarField, b: ScalarField, name: Optional[str] = None) -> ScalarField:
    chart = require_same_chart(a, b)
    numerical = a.numerical or b.numerical
    grad = None
    if not numerical and a.grad is not None and b.grad is not None:
        def grad(z, a=a, b=b):
            return a.grad(z) + b.grad(z)
    return ScalarField(name=name or f"({a.name})+({b.name})", chart=chart,
                       func=lambda z, a=a, b=b: a.func(z) + b.func(z),
                       grad=grad, numerical=numerical,
                       fd_step=a.fd_step if a.numerical else b.fd_step)


def pullback_field(field: ScalarField, embed: Callable, reduced_chart: ChartSpec,
                   name: Optional[str] = None) -> ScalarField:
    """Composition field o embed as a field on the reduced chart.

    ``embed`` maps reduced coordinates to full-chart coordinates and must be
    dual-capable so the chain rule flows through forward differentiation.
    """
    return ScalarField(name=name or f"{field.name}|surface", chart=reduced_chart,
                       func=lambda z, f=field, e=embed: f.func(e(z)))


@dataclass(frozen=True)
class GradientCheck:
    """Result of comparing a field's gradient against central differences."""

    max_rel_err: float
    worst_label: str
    analytic: np.ndarray
    numeric: np.ndarray


def gradient_consistency_check(f: ScalarField, x: PhaseSpacePoint) -> GradientCheck:
    """Max relative discrepancy between f.gradient and a finite-difference probe."""
    require_same_chart(f, x)
    analytic = f.gradient_at(x.coords)
    numeric = central_difference_gradient(f.func, x.coords)
    denom = np.maximum(1.0, np.maximum(np.abs(analytic), np.abs(numeric)))
    rel = np.abs(analytic - numeric) / denom
    worst = int(np.argmax(rel))
    return GradientCheck(max_rel_err=float(rel[worst]),
                         worst_label=f.chart.labels[worst],
                         analytic=analytic, numeric=numeric)
