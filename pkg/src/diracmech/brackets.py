"""The canonical Poisson bracket.

{A,B} = sum_i (dA/dq_i dB/dp_i - dB/dq_i dA/dp_i), evaluated from the fields'
gradient maps. The raw helpers operate on gradient vectors so constraint
machinery and integrators can reuse gradients they already hold.
"""

from __future__ import annotations

import numpy as np

from .fields import ScalarField
from .phase import PhaseSpacePoint, require_same_chart


def bracket_of_gradients(ga: np.ndarray, gb: np.ndarray, n_pairs: int) -> float:
    n = n_pairs
    return float(ga[:n] @ gb[n:] - gb[:n] @ ga[n:])


def poisson_bracket(a: ScalarField, b: ScalarField, x: PhaseSpacePoint) -> float:
    chart = require_same_chart(a, b, x)
    ga = a.gradient(x)
    gb = b.gradient(x)
    return bracket_of_gradients(ga, gb, chart.n_pairs)


def poisson_bracket_field(a: ScalarField, b: ScalarField, name=None) -> ScalarField:
    """{a,b} as a derived field with numerical gradients.

    Used for nested brackets (Jacobi probes): the derived field's value is the
    bracket itself and its gradient is taken by finite differences of bracket
    values, independent of any analytic route.
    """
    chart = require_same_chart(a, b)
    n = chart.n_pairs

    def func(z, a=a, b=b, n=n):
        z = np.asarray(z, dtype=float)
        return bracket_of_gradients(a.gradient_at(z), b.gradient_at(z), n)

    return ScalarField(name=name or f"{{{a.name},{b.name}}}", chart=chart,
                       func=func, numerical=True)
