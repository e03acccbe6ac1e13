"""Free relativistic point particle in d+1 dimensions.

Full chart (x0..xd, p0..pd) with the mass-shell constraint
C = (1/2)(p0^2 - p.p - m^2) and the time gauge chi = x0 - tau. The pair is
Second Class on-shell ({chi, C} = p0 = sqrt(p.p + m^2) on the positive-energy
branch), the spatial pairs stay canonical under the Dirac bracket, and the
emergent Hamiltonian sqrt(p.p + m^2) drives straight-line motion

    x^i(tau) = x^i(0) + p^i tau / sqrt(p.p + m^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .. import duals
from ..constraints import ConstraintSet, dirac_bracket
from ..brackets import poisson_bracket
from ..errors import UsageError
from ..fields import ScalarField, coordinate_field, function_field
from ..phase import ChartSpec, PhaseSpacePoint


@dataclass(frozen=True)
class RelativisticParticle:
    mass: float
    spatial_dim: int = 3

    def __post_init__(self):
        if self.mass <= 0:
            raise UsageError("mass must be positive")
        if self.spatial_dim < 1:
            raise UsageError("need at least one spatial dimension")
        object.__setattr__(self, "mass", float(self.mass))

    @cached_property
    def full_chart(self) -> ChartSpec:
        d = self.spatial_dim
        labels = tuple(f"x{i}" for i in range(d + 1)) + tuple(f"p{i}" for i in range(d + 1))
        return ChartSpec(labels=labels, name="minkowski")

    @cached_property
    def spatial_chart(self) -> ChartSpec:
        d = self.spatial_dim
        labels = tuple(f"x{i}" for i in range(1, d + 1)) + tuple(f"p{i}" for i in range(1, d + 1))
        return ChartSpec(labels=labels, name="spatial")

    @cached_property
    def mass_shell(self) -> ScalarField:
        d, m2 = self.spatial_dim, self.mass ** 2

        def func(z, d=d, m2=m2):
            p0 = z[d + 1]
            total = p0 * p0 - m2
            for i in range(1, d + 1):
                total = total - z[d + 1 + i] * z[d + 1 + i]
            return 0.5 * total

        return function_field(self.full_chart, "C", func)

    def time_gauge(self, tau: float = 0.0) -> ScalarField:
        return function_field(self.full_chart, "chi",
                              lambda z, tau=float(tau): z[0] - tau)

    def constraint_set(self, tau: float = 0.0) -> ConstraintSet:
        return ConstraintSet(chart=self.full_chart,
                             fields=(self.time_gauge(tau), self.mass_shell),
                             names=("chi", "C"))

    def energy(self, p_spatial) -> float:
        p = np.asarray(p_spatial, dtype=float)
        return math.sqrt(float(p @ p) + self.mass ** 2)

    @cached_property
    def physical_hamiltonian(self) -> ScalarField:
        """sqrt(p.p + m^2) on the reduced spatial chart."""
        d, m2 = self.spatial_dim, self.mass ** 2

        def func(z, d=d, m2=m2):
            total = m2
            for i in range(d):
                total = total + z[d + i] * z[d + i]
            return duals.sqrt(total)

        return function_field(self.spatial_chart, "H_phys", func)

    def trajectory(self, x0, p, tau):
        """Closed-form x(tau) = x(0) + p tau / sqrt(p.p + m^2)."""
        x0 = np.asarray(x0, dtype=float)
        p = np.asarray(p, dtype=float)
        if x0.shape != (self.spatial_dim,) or p.shape != (self.spatial_dim,):
            raise UsageError(f"expected {self.spatial_dim}-vectors")
        return x0 + p * (float(tau) / self.energy(p))

    def on_shell_point(self, x_spatial, p_spatial, tau: float = 0.0) -> PhaseSpacePoint:
        """Positive-energy point with x0 = tau, p0 = +sqrt(p.p + m^2)."""
        x = np.asarray(x_spatial, dtype=float)
        p = np.asarray(p_spatial, dtype=float)
        coords = np.concatenate([[float(tau)], x, [self.energy(p)], p])
        return self.full_chart.point(coords)

    def sample_on_shell(self, rng: np.random.Generator, n: int, tau: float = 0.0,
                        spread: float = 5.0) -> list[PhaseSpacePoint]:
        return [self.on_shell_point(rng.uniform(-spread, spread, self.spatial_dim),
                                    rng.uniform(-spread, spread, self.spatial_dim), tau)
                for _ in range(n)]

    def bracket_report(self, samples) -> dict[str, float]:
        """Worst-case deviations of the on-shell bracket structure.

        pairing: {chi, C} vs p0;   xp: {x^i, p_j}_D vs delta_ij;
        xx, pp: spatial Dirac brackets that must vanish.
        """
        chart = self.full_chart
        d = self.spatial_dim
        xs = [coordinate_field(chart, f"x{i}") for i in range(1, d + 1)]
        ps = [coordinate_field(chart, f"p{i}") for i in range(1, d + 1)]
        worst = {"pairing": 0.0, "xp": 0.0, "xx": 0.0, "pp": 0.0}
        for x in samples:
            cs = self.constraint_set(tau=x["x0"])
            vals = cs.values_at(x.coords)
            if np.max(np.abs(vals)) >= 1e-9:
                raise UsageError("sample is off-shell; use on_shell_point")
            p0 = x["p0"]
            worst["pairing"] = max(worst["pairing"],
                                   abs(poisson_bracket(cs.fields[0], cs.fields[1], x) - p0))
            for i in range(d):
                for j in range(d):
                    target = 1.0 if i == j else 0.0
                    worst["xp"] = max(worst["xp"],
                                      abs(dirac_bracket(xs[i], ps[j], cs, x) - target))
                    worst["xx"] = max(worst["xx"], abs(dirac_bracket(xs[i], xs[j], cs, x)))
                    worst["pp"] = max(worst["pp"], abs(dirac_bracket(ps[i], ps[j], cs, x)))
        return worst
