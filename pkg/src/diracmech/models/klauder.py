"""Planar toy model with an inverted-spring constraint and a radial gauge.

Polar chart (r, phi, p_r, p_phi), r > 0. The constraint and auxiliary
condition are

    C   = (1/2)(p_r^2 + p_phi^2/r^2 - alpha^2 r^2),
    chi = r p_r - k,

a Second Class pair away from the origin: {chi, C} = p_r^2 + p_phi^2/r^2
+ alpha^2 r^2 > 0. Solving both pins the radial pair to

    r* = ((k^2 + p_phi^2)/alpha^2)^(1/4),   p_r* = k/r*,

leaving (phi, p_phi) as the canonical reduced phase space. A physical
Hamiltonian C + U(r) then drives circular orbits: r, p_r, p_phi stay fixed
and phi advances at the constant rate p_phi U'(r*) / (2 alpha^2 r*^3).

The same system in Cartesian coordinates (q1, q2, p1, p2) carries the First
Class generator (1/2)(p.p - alpha^2 q.q), whose orbit is the cosh/sinh map in
:func:`diracmech.dynamics.gauge_orbit_closed_form`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Union

import numpy as np

from .. import duals
from ..constraints import ConstraintSet, SurfaceParametrization, TimeRamp
from ..errors import NumericDomainError, UsageError
from ..fields import ScalarField, function_field
from ..phase import ChartSpec, PhaseSpacePoint

R_MIN = 1e-12  # chart exclusion; the origin is not part of the phase space
R_SAMPLE_FLOOR = 0.05


@dataclass(frozen=True)
class RadialPotential:
    """Polynomial potential U(r) = sum_i coeffs[i] * r^i."""

    coeffs: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @classmethod
    def zero(cls) -> "RadialPotential":
        return cls(())

    @classmethod
    def harmonic(cls, strength: float = 1.0) -> "RadialPotential":
        return cls((0.0, 0.0, 0.5 * strength))

    def __call__(self, r):
        total = 0.0
        for c in reversed(self.coeffs):  # Horner, dual-capable
            total = total * r + c
        return total

    def derivative(self, r):
        total = 0.0
        n = len(self.coeffs)
        for i in range(n - 1, 0, -1):
            total = total * r + i * self.coeffs[i]
        return total


@dataclass(frozen=True)
class KRamp:
    """Affine gauge parameter k(t) = k0 + k1 t."""

    k0: float
    k1: float = 0.0

    def __call__(self, t: float) -> float:
        return self.k0 + self.k1 * t


@dataclass(frozen=True)
class KlauderModel:
    alpha: float = 1.0
    k: Union[float, KRamp] = 1.0
    hbar: float = 1.0
    potential: RadialPotential = RadialPotential.zero()

    def __post_init__(self):
        if self.alpha <= 0:
            raise UsageError("alpha must be positive")
        if self.hbar <= 0:
            raise UsageError("hbar must be positive")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "hbar", float(self.hbar))
        if not isinstance(self.k, KRamp):
            object.__setattr__(self, "k", float(self.k))

    # -- gauge parameter ---------------------------------------------------
    @property
    def time_dependent(self) -> bool:
        return isinstance(self.k, KRamp) and self.k.k1 != 0.0

    def k_at(self, t: float = 0.0) -> float:
        return self.k(t) if isinstance(self.k, KRamp) else self.k

    # -- charts and fields ---------------------------------------------------
    @cached_property
    def polar_chart(self) -> ChartSpec:
        return ChartSpec(labels=("r", "phi", "p_r", "p_phi"), name="polar",
                         domain=lambda z: z[0] > R_MIN,
                         domain_description=f"r > {R_MIN:g}")

    @cached_property
    def cartesian_chart(self) -> ChartSpec:
        return ChartSpec(labels=("q1", "q2", "p1", "p2"), name="cartesian")

    @cached_property
    def constraint(self) -> ScalarField:
        alpha2 = self.alpha ** 2

        def func(z, alpha2=alpha2):
            r, p_r, p_phi = z[0], z[2], z[3]
            return 0.5 * (p_r * p_r + (p_phi * p_phi) / (r * r) - alpha2 * (r * r))

        return function_field(self.polar_chart, "C", func)

    @cached_property
    def gauge_condition(self) -> ScalarField:
        k0 = self.k_at(0.0)
        return function_field(self.polar_chart, "chi",
                              lambda z, k0=k0: z[0] * z[2] - k0)

    @cached_property
    def constraint_set(self) -> ConstraintSet:
        ramps = None
        if self.time_dependent:
            ramp = self.k  # chi(z, t) = r p_r - k0 + (k0 - k(t))
            ramps = (TimeRamp(offset=lambda t, r=ramp: r.k0 - r(t),
                              rate=lambda t, r=ramp: -r.k1), None)
        return ConstraintSet(chart=self.polar_chart,
                             fields=(self.gauge_condition, self.constraint),
                             names=("chi", "C"), time_ramps=ramps)

    def hamiltonian(self, potential: Optional[RadialPotential] = None) -> ScalarField:
        """Physical Hamiltonian C + U(r) = (1/2)alpha^2 r^2 + (U(r) - alpha^2 r^2) on-surface."""
        u = potential if potential is not None else self.potential
        c = self.constraint

        def func(z, c=c, u=u):
            return c.func(z) + u(z[0])

        return function_field(self.polar_chart, "H_phys", func)

    @cached_property
    def cartesian_generator(self) -> ScalarField:
        """First Class generator (1/2)(p.p - alpha^2 q.q) in Cartesian coordinates."""
        alpha2 = self.alpha ** 2

        def func(z, alpha2=alpha2):
            return 0.5 * (z[2] * z[2] + z[3] * z[3] - alpha2 * (z[0] * z[0] + z[1] * z[1]))

        return function_field(self.cartesian_chart, "C_cartesian", func)

    @cached_property
    def cartesian_gauge_condition(self) -> ScalarField:
        k0 = self.k_at(0.0)
        return function_field(self.cartesian_chart, "chi_cartesian",
                              lambda z, k0=k0: z[0] * z[2] + z[1] * z[3] - k0)

    # -- reduced phase space -------------------------------------------------
    def reduced_radius(self, p_phi, t: float = 0.0):
        """r* = ((k^2 + p_phi^2)/alpha^2)^(1/4); dual-capable for embeddings."""
        k = self.k_at(t)
        value = (k * k + p_phi * p_phi) / (self.alpha ** 2)
        if duals.value(value) <= 0.0:
            raise NumericDomainError(
                "reduced radius degenerates at (k, p_phi) = (0, 0); origin excluded")
        return value ** 0.25

    def reduced_point(self, p_phi: float, t: float = 0.0) -> tuple[float, float]:
        """On-surface radial pair (r*, p_r*) for given angular momentum."""
        r_star = float(self.reduced_radius(p_phi, t))
        return r_star, self.k_at(t) / r_star

    def embed_reduced(self, phi: float, p_phi: float, t: float = 0.0) -> PhaseSpacePoint:
        r_star, p_r_star = self.reduced_point(p_phi, t)
        return self.polar_chart.point([r_star, phi, p_r_star, p_phi])

    @cached_property
    def reduced_chart(self) -> ChartSpec:
        if self.k_at(0.0) == 0.0:
            return ChartSpec(labels=("phi", "p_phi"), name="reduced",
                             domain=lambda z: z[1] != 0.0,
                             domain_description="p_phi != 0 (k = 0 excludes the origin)")
        return ChartSpec(labels=("phi", "p_phi"), name="reduced")

    @cached_property
    def surface_parametrization(self) -> SurfaceParametrization:
        def embed(z, model=self):
            phi, p_phi = z[0], z[1]
            r_star = model.reduced_radius(p_phi)
            return [r_star, phi, model.k_at(0.0) / r_star, p_phi]

        return SurfaceParametrization(reduced_chart=self.reduced_chart, embed=embed)

    # -- samplers --------------------------------------------------------------
    def sample_points(self, rng: np.random.Generator, n: int,
                      r_range: tuple[float, float] = (0.1, 5.0),
                      other_range: tuple[float, float] = (-5.0, 5.0)) -> list[PhaseSpacePoint]:
        """Generic off-surface samples; r floored away from the excluded origin."""
        lo = max(r_range[0], R_SAMPLE_FLOOR)
        pts = []
        for _ in range(n):
            r = rng.uniform(lo, r_range[1])
            phi, p_r, p_phi = rng.uniform(*other_range, size=3)
            pts.append(self.polar_chart.point([r, phi, p_r, p_phi]))
        return pts

    def sample_surface(self, rng: np.random.Generator, n: int,
                       p_phi_range: tuple[float, float] = (-5.0, 5.0)) -> list[PhaseSpacePoint]:
        pts = []
        for _ in range(n):
            p_phi = rng.uniform(*p_phi_range)
            if self.k_at(0.0) == 0.0 and abs(p_phi) < 0.1:
                p_phi = 0.1 if p_phi >= 0 else -0.1
            pts.append(self.embed_reduced(rng.uniform(0.0, 2.0 * np.pi), p_phi))
        return pts

    # -- closed-form oracles ---------------------------------------------------
    def dirac_oracle(self, pair: tuple[str, str], x: PhaseSpacePoint) -> float:
        """Closed-form Dirac bracket of two coordinates, off-surface form.

        Denominator D = p_phi^2 + r^2 p_r^2 + alpha^2 r^4:
        {r,p_r} = {r,p_phi} = {p_r,p_phi} = 0, {phi,p_phi} = 1,
        {r,phi} = -r p_phi / D, {phi,p_r} = -p_r p_phi / D.
        """
        a, b = pair
        labels = self.polar_chart.labels
        if a not in labels or b not in labels:
            raise UsageError(f"unknown coordinate pair {pair!r}")
        if a == b:
            return 0.0
        r, p_r, p_phi = x["r"], x["p_r"], x["p_phi"]
        denom = p_phi ** 2 + (r * p_r) ** 2 + (self.alpha * r * r) ** 2
        table = {
            ("r", "p_r"): 0.0,
            ("r", "p_phi"): 0.0,
            ("p_r", "p_phi"): 0.0,
            ("phi", "p_phi"): 1.0,
            ("r", "phi"): -r * p_phi / denom,
            ("phi", "p_r"): -p_r * p_phi / denom,
        }
        if pair in table:
            return table[pair]
        return -table[(b, a)]

    def surface_denominator(self, p_phi: float, t: float = 0.0) -> float:
        """On-surface value of the oracle denominator: 2(k^2 + p_phi^2)."""
        k = self.k_at(t)
        return 2.0 * (k * k + p_phi * p_phi)

    def phi_rate(self, p_phi: float, potential: Optional[RadialPotential] = None) -> float:
        """Angular rate {phi, C + U(r)}_D on-surface: p_phi U'(r*) / (2 alpha^2 r*^3)."""
        u = potential if potential is not None else self.potential
        r_star, _ = self.reduced_point(p_phi)
        return p_phi * float(u.derivative(r_star)) / (2.0 * self.alpha ** 2 * r_star ** 3)

    def circular_orbit(self, phi0: float, p_phi: float, t,
                       potential: Optional[RadialPotential] = None):
        """phi(t) on the circular orbit; r, p_r, p_phi are constants of motion."""
        return phi0 + self.phi_rate(p_phi, potential) * np.asarray(t, dtype=float)
