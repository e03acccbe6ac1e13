"""Quantum states on the circle and the reduced spectrum of the planar model.

States are truncated Fourier series psi(phi) = sum_m c_m e^{i m phi} with
m in [-M, M], normalized so sum |c_m|^2 = 1 against the measure dphi/(2 pi).
Angular momentum is diagonal (p_phi -> m hbar), so the reduced Hamiltonian
U(r*(p_phi)) acts by per-mode phases: evolution is a phase multiply, exactly
unitary. Expectation formulas below are cross-checked by quadrature oracles
on a phi grid and by dense mode-space matrix elements.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .errors import NumericDomainError, UsageError
from .models.klauder import KlauderModel

NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CircleState:
    """Fourier coefficients c_m, m = -m_max .. m_max."""

    coeffs: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        if coeffs.ndim != 1 or len(coeffs) % 2 == 0:
            raise UsageError("coefficients must be a 1-D array of odd length (m = -M..M)")
        if not np.all(np.isfinite(coeffs.view(float))):
            raise NumericDomainError("non-finite coefficient")
        if self.hbar <= 0:
            raise UsageError("hbar must be positive")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "hbar", float(self.hbar))

    @property
    def m_max(self) -> int:
        return (len(self.coeffs) - 1) // 2

    @property
    def m_values(self) -> np.ndarray:
        return np.arange(-self.m_max, self.m_max + 1)

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def normalized(self) -> "CircleState":
        n2 = self.norm_squared()
        if n2 == 0.0:
            raise UsageError("cannot normalize the zero state")
        return CircleState(self.coeffs / np.sqrt(n2), self.hbar)

    def values_on_grid(self, phis: np.ndarray) -> np.ndarray:
        """psi(phi) on a grid: sum_m c_m e^{i m phi}."""
        return np.exp(1j * np.outer(phis, self.m_values)) @ self.coeffs

    @classmethod
    def single_mode(cls, m: int, m_max: int, hbar: float = 1.0) -> "CircleState":
        if abs(m) > m_max:
            raise UsageError(f"mode {m} outside window m_max={m_max}")
        c = np.zeros(2 * m_max + 1, dtype=complex)
        c[m + m_max] = 1.0
        return cls(c, hbar)

    @classmethod
    def random(cls, rng: np.random.Generator, m_max: int, hbar: float = 1.0) -> "CircleState":
        c = rng.normal(size=2 * m_max + 1) + 1j * rng.normal(size=2 * m_max + 1)
        return cls(c, hbar).normalized()

    def to_json_dict(self) -> dict:
        return {"hbar": self.hbar, "m_max": self.m_max,
                "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "CircleState":
        coeffs = np.array([complex(re, im) for re, im in data["coeffs"]])
        if len(coeffs) != 2 * int(data["m_max"]) + 1:
            raise UsageError("coeffs length does not match m_max")
        return cls(coeffs, float(data.get("hbar", 1.0)))


@dataclass(frozen=True, eq=False)
class SpectrumTable:
    """Per-mode reduced radius r*_m and energy U_m = U(r*_m).

    r*_m = ((k^2 + (m hbar)^2)/alpha^2)^(1/4); the (k, m) = (0, 0) mode is
    flagged degenerate (radius zero, radial momentum undefined).
    """

    model: KlauderModel
    hbar: float
    m_values: np.ndarray
    r_star: np.ndarray
    u_values: np.ndarray
    degenerate: np.ndarray  # boolean mask

    @classmethod
    def build(cls, model: KlauderModel, m_max: int, t: float = 0.0) -> "SpectrumTable":
        hbar = model.hbar
        m = np.arange(-m_max, m_max + 1)
        k = model.k_at(t)
        r4 = (k * k + (m * hbar) ** 2) / model.alpha ** 2
        r_star = r4 ** 0.25
        u_values = np.array([model.potential(r) for r in r_star])
        return cls(model=model, hbar=hbar, m_values=m, r_star=r_star,
                   u_values=u_values, degenerate=(r4 == 0.0))

    def _match(self, state: CircleState):
        if len(state.coeffs) != len(self.m_values):
            raise UsageError("state window does not match spectrum table")
        if abs(state.hbar - self.hbar) > 0:
            raise UsageError("state and table disagree on hbar")


def _require_normalized(state: CircleState):
    if abs(state.norm_squared() - 1.0) > NORM_TOL:
        raise UsageError("state is not normalized; call normalized() first")


def evolve_static(state: CircleState, table: SpectrumTable, t: float) -> CircleState:
    """c_m -> c_m exp(-i U_m t / hbar); unitary, norm enforced to roundoff."""
    _require_normalized(state)
    table._match(state)
    phases = np.exp(-1j * table.u_values * t / state.hbar)
    return CircleState(state.coeffs * phases, state.hbar).normalized()


def evolve_time_dependent(state: CircleState, model: KlauderModel, t0: float, t1: float,
                          quadrature_steps: int = 2048) -> CircleState:
    """Evolution under a time-dependent gauge parameter k(t).

    Every instantaneous Hamiltonian is a function of angular momentum alone,
    so all of them commute and the time-ordered exponential collapses to
    c_m -> c_m exp(-(i/hbar) int_t0^t1 U_m(t') dt'), with the integral done
    by composite Simpson quadrature on ``quadrature_steps`` subintervals.
    """
    _require_normalized(state)
    steps = int(quadrature_steps)
    if steps < 2:
        raise UsageError("need at least 2 quadrature steps")
    if steps % 2:
        steps += 1
    ts = np.linspace(t0, t1, steps + 1)
    k = np.array([model.k_at(t) for t in ts])
    if not np.all(np.isfinite(k)):
        raise NumericDomainError("k(t) is non-finite on the integration window")
    hbar = state.hbar
    m = state.m_values.astype(float)
    # r*_m(t) for all modes and times; (modes, times). Horner is elementwise.
    r4 = (k[None, :] ** 2 + (m[:, None] * hbar) ** 2) / model.alpha ** 2
    u = np.broadcast_to(np.asarray(model.potential(r4 ** 0.25), dtype=float), r4.shape)
    weights = np.ones(steps + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    h = (t1 - t0) / steps
    integrals = (h / 3.0) * (u @ weights)
    return CircleState(state.coeffs * np.exp(-1j * integrals / hbar), hbar).normalized()


@dataclass(frozen=True)
class ReducedExpectations:
    r_mean: float
    pr_mean: float
    pphi_mean: float


def expect_reduced(state: CircleState, table: SpectrumTable) -> ReducedExpectations:
    """<r>, <p_r>, <p_phi> from the diagonal mode weights; time-independent.

    <r> = sum |c_m|^2 r*_m, <p_r> = sum |c_m|^2 k / r*_m,
    <p_phi> = hbar sum m |c_m|^2.
    """
    _require_normalized(state)
    table._match(state)
    w = np.abs(state.coeffs) ** 2
    if np.any(w[table.degenerate] > 0):
        raise NumericDomainError(
            "state occupies the degenerate (k, m) = (0, 0) mode; <p_r> undefined")
    k = table.model.k_at(0.0)
    ok = ~table.degenerate  # zero-weight degenerate modes contribute nothing
    return ReducedExpectations(
        r_mean=float(w @ table.r_star),
        pr_mean=float(np.sum(w[ok] * (k / table.r_star[ok]))),
        pphi_mean=float(state.hbar * (state.m_values @ w)),
    )


@dataclass(frozen=True)
class PhiExpectation:
    value: float
    imag_residue: float


def expect_phi(state: CircleState, table: SpectrumTable, t: float) -> PhiExpectation:
    """<phi> at time t from the analytic double sum.

    <phi> = pi - i sum_{m != n} c*_m c_n e^{(i/hbar)(U_m - U_n) t} / (n - m);
    the off-diagonal sum is purely imaginary, so the result is real up to
    roundoff, which is reported rather than discarded.
    """
    _require_normalized(state)
    table._match(state)
    d = state.coeffs * np.exp(-1j * table.u_values * t / state.hbar)
    m = state.m_values
    diff = m[None, :] - m[:, None]  # n - m
    inv = np.zeros(diff.shape)
    off_diag = diff != 0
    inv[off_diag] = 1.0 / diff[off_diag]
    total = np.conj(d) @ inv @ d  # sum d*_m d_n / (n - m) over m rows, n cols
    value = np.pi - 1j * total
    return PhiExpectation(value=float(value.real), imag_residue=float(value.imag))


def expect_phi_quadrature(state: CircleState, table: SpectrumTable, t: float,
                          nodes: int = 4096) -> float:
    """Quadrature oracle (1/2pi) int_0^{2pi} phi |psi(phi,t)|^2 dphi (Simpson)."""
    _require_normalized(state)
    table._match(state)
    if nodes % 2:
        nodes += 1
    d = state.coeffs * np.exp(-1j * table.u_values * t / state.hbar)
    evolved = CircleState(d, state.hbar)
    phis = np.linspace(0.0, 2.0 * np.pi, nodes + 1)
    density = np.abs(evolved.values_on_grid(phis)) ** 2
    integrand = phis * density
    weights = np.ones(nodes + 1)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    h = 2.0 * np.pi / nodes
    return float((h / 3.0) * (weights @ integrand) / (2.0 * np.pi))


@dataclass(frozen=True)
class CartesianExpectations:
    xy: complex   # <x + i y>
    pxy: complex  # <p_x + i p_y>


def expect_cartesian(state: CircleState, table: SpectrumTable, t: float) -> CartesianExpectations:
    """Planar expectation values from adjacent-mode coherences.

    With the raising operator ordered to the left of the diagonal factors:
    <x + i y>   = sum_n r*_n c*_{n+1} c_n e^{(i/hbar)(U_{n+1} - U_n) t},
    <p_x+i p_y> = sum_n (k + i n hbar)/r*_n c*_{n+1} c_n e^{...}.
    """
    _require_normalized(state)
    table._match(state)
    d = state.coeffs * np.exp(-1j * table.u_values * t / state.hbar)
    lower, upper = d[:-1], d[1:]          # modes n and n+1
    coherence = np.conj(upper) * lower    # c*_{n+1} c_n with the phases folded in
    r_star = table.r_star[:-1]
    xy = np.sum(r_star * coherence)
    k = table.model.k_at(0.0)
    n_vals = table.m_values[:-1]
    active = coherence != 0
    if np.any(active & (r_star == 0.0)):
        raise NumericDomainError("degenerate r* = 0 mode carries weight; <p> undefined")
    factors = np.zeros_like(coherence)
    safe = r_star > 0
    factors[safe] = (k + 1j * n_vals[safe] * state.hbar) / r_star[safe]
    pxy = np.sum(factors * coherence)
    return CartesianExpectations(xy=complex(xy), pxy=complex(pxy))


def expect_cartesian_matrix_oracle(state: CircleState, table: SpectrumTable,
                                   t: float) -> CartesianExpectations:
    """Same observables contracted against dense mode-space operator matrices."""
    _require_normalized(state)
    table._match(state)
    d = state.coeffs * np.exp(-1j * table.u_values * t / state.hbar)
    size = len(d)
    x_op = np.zeros((size, size), dtype=complex)
    p_op = np.zeros((size, size), dtype=complex)
    k = table.model.k_at(0.0)
    for col in range(size - 1):  # ket mode n, bra mode n+1
        row = col + 1
        x_op[row, col] = table.r_star[col]
        if table.r_star[col] > 0:
            p_op[row, col] = (k + 1j * table.m_values[col] * state.hbar) / table.r_star[col]
        elif abs(d[row] * d[col]) > 0:
            raise NumericDomainError("degenerate r* = 0 mode carries weight; <p> undefined")
    return CartesianExpectations(xy=complex(np.conj(d) @ x_op @ d),
                                 pxy=complex(np.conj(d) @ p_op @ d))
