"""Spin-boson model: a two-level system coupled to discrete bosonic modes.

The model is the excitation-conserving one: a level splitting ``omega0``,
independent modes ``(omega_k, g_k)``, and a coupling that exchanges single
quanta.  The bath starts in a thermal state of inverse temperature ``beta``
(``math.inf`` is a first-class value meaning the vacuum).

Operator convention (load-bearing)
----------------------------------
The ladder operators carry a factor of two relative to the common
half-normalized choice::

    sigma_plus  = sigma_x + i sigma_y = [[0, 2], [0, 0]]
    sigma_minus = sigma_x - i sigma_y = [[0, 0], [2, 0]]

with ``|0>`` the spin-up (excited) basis vector, so ``sigma_plus |1> = 2|0>``
and ``sigma_minus |0> = 2|1>``.  Every numeric prefactor in this module (the
8s, 4s and 16s in the element equations of motion) is tied to this choice;
swapping in half-normalized operators silently rescales all rates by four
and breaks every cross-check against the exact solver.

Rates
-----
Four real time-dependent prefactors drive the reduced dynamics, organized
here as two channels:

* ``absorption``: weighted by mode occupations ``n_k`` (stimulated only,
  vanishes for a vacuum bath);
* ``emission``: weighted by ``n_k + 1`` (spontaneous plus stimulated).

Each channel has a ``decay`` part (cosine kernel, feeds the dissipator) and
a ``shift`` part (sine kernel, feeds the second-order effective
Hamiltonian), plus exact running integrals of both.  All four are closed
per-mode sums, not quadratures, which keeps them fast and bit-reproducible;
the defining integrals survive in the test suite as an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import simpson

from .master_eq import BathStatistics, InteractionDecomposition

__all__ = [
    "SIGMA_Z",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
    "PROJ_UP",
    "PROJ_DOWN",
    "SpinBosonModel",
    "SpectralDiscretization",
    "ohmic_density",
    "flat_density",
    "thermal_occupation",
    "RateChannel",
    "RateFunctions",
    "rate_functions",
    "second_order_hamiltonian",
    "element_ode_matrix",
    "coherence_solution",
    "population_solution",
    "vacuum_rates",
    "vacuum_rhs",
    "markov_rates",
    "interaction_decomposition",
    "bath_statistics",
]

SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 2.0], [0.0, 0.0]], dtype=complex)
SIGMA_MINUS = np.array([[0.0, 0.0], [2.0, 0.0]], dtype=complex)

# sigma_plus @ sigma_minus = 4 |0><0|,  sigma_minus @ sigma_plus = 4 |1><1|
PROJ_UP = SIGMA_PLUS @ SIGMA_MINUS
PROJ_DOWN = SIGMA_MINUS @ SIGMA_PLUS

# Near-resonance guard: below this value of |detuning * t| the closed-form
# kernels switch to their second-order series.  At 1e-3 both branches are
# accurate to better than 5e-10 relative; a smaller radius would expose the
# (1 - cos x)/x^2 kernel to catastrophic cancellation (relative error
# ~4e-4 at x = 1e-6).
_RESONANCE_EPS = 1e-3


def thermal_occupation(omega: float, beta: float) -> float:
    """Mean boson number of a mode at frequency ``omega``, temperature ``1/beta``.

    Closed Bose-Einstein form of the thermal-trace definition;
    ``beta = math.inf`` gives the vacuum value 0.
    """
    if omega <= 0:
        raise ValueError(f"mode frequency must be positive, got {omega}")
    if beta == math.inf:
        return 0.0
    return 1.0 / math.expm1(beta * omega)


@dataclass(frozen=True)
class SpinBosonModel:
    """Two-level splitting, discrete modes ``(omega_k, g_k)``, inverse temperature."""

    omega0: float
    modes: tuple[tuple[float, float], ...]
    beta: float

    def __post_init__(self):
        object.__setattr__(
            self, "modes", tuple((float(w), float(g)) for w, g in self.modes))
        if any(w <= 0 for w, _ in self.modes):
            raise ValueError("mode frequencies must be positive")
        if not (self.beta == math.inf or self.beta > 0):
            raise ValueError(f"beta must be positive or math.inf, got {self.beta}")

    @property
    def vacuum(self) -> bool:
        return self.beta == math.inf

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([w for w, _ in self.modes], dtype=float)

    @property
    def couplings(self) -> np.ndarray:
        return np.array([g for _, g in self.modes], dtype=float)

    def occupations(self) -> np.ndarray:
        return np.array([thermal_occupation(w, self.beta) for w, _ in self.modes])

    def scaled(self, factor: float) -> "SpinBosonModel":
        """Same model with every coupling multiplied by ``factor``."""
        return SpinBosonModel(self.omega0,
                              tuple((w, factor * g) for w, g in self.modes),
                              self.beta)


def ohmic_density(eta: float, omega_c: float) -> Callable[[float], float]:
    """Ohmic spectral density with exponential cutoff: eta * w * exp(-w/omega_c)."""
    def j(omega: float) -> float:
        return eta * omega * math.exp(-omega / omega_c)
    return j


def flat_density(eta: float) -> Callable[[float], float]:
    """Frequency-independent spectral density."""
    def j(omega: float) -> float:
        return eta
    return j


@dataclass(frozen=True)
class SpectralDiscretization:
    """Uniform-grid sampling of a continuous spectral density.

    ``mode_count`` midpoints cover ``[omega_min, omega_max]`` and each mode
    receives the coupling ``g_k = sqrt(J(omega_k) * delta_omega)``, so the
    implied density of states is ``mode_count / (omega_max - omega_min)``.
    """

    spectral_density: Callable[[float], float]
    omega_min: float
    omega_max: float
    mode_count: int

    def __post_init__(self):
        if not 0 <= self.omega_min < self.omega_max:
            raise ValueError(
                f"need 0 <= omega_min < omega_max, got [{self.omega_min}, {self.omega_max}]")
        if self.mode_count < 1:
            raise ValueError("mode_count must be at least 1")

    @property
    def delta_omega(self) -> float:
        return (self.omega_max - self.omega_min) / self.mode_count

    @property
    def density_of_states(self) -> float:
        return self.mode_count / (self.omega_max - self.omega_min)

    def mode_grid(self) -> np.ndarray:
        d = self.delta_omega
        return self.omega_min + d * (np.arange(self.mode_count) + 0.5)

    def modes(self) -> tuple[tuple[float, float], ...]:
        d = self.delta_omega
        out = []
        for w in self.mode_grid():
            j = self.spectral_density(float(w))
            if j < 0:
                raise ValueError(f"spectral density negative at omega = {w}")
            out.append((float(w), math.sqrt(j * d)))
        return tuple(out)

    def build_model(self, omega0: float, beta: float) -> SpinBosonModel:
        return SpinBosonModel(omega0, self.modes(), beta)


# -- rate functions ---------------------------------------------------------

def _kernels(x: np.ndarray):
    """The four dimensionless kernel shapes as functions of x = detuning * t.

    Near x = 0 each switches to its two-term series; with the 1e-6 cutover
    the truncation error is below double rounding.
    """
    small = np.abs(x) < _RESONANCE_EPS
    xs = np.where(small, 1.0, x)
    sin_over = np.where(small, 1.0 - x * x / 6.0, np.sin(xs) / xs)
    one_minus_cos_over = np.where(small, 0.5 * x * (1.0 - x * x / 12.0),
                                  (1.0 - np.cos(xs)) / xs)
    one_minus_cos_over2 = np.where(small, 0.5 * (1.0 - x * x / 12.0),
                                   (1.0 - np.cos(xs)) / (xs * xs))
    t_minus_sin_over2 = np.where(small, x / 6.0 * (1.0 - x * x / 20.0),
                                 (1.0 - np.sin(xs) / xs) / xs)
    return sin_over, one_minus_cos_over, one_minus_cos_over2, t_minus_sin_over2


@dataclass(frozen=True)
class RateChannel:
    """One weighted family of rate kernels summed over modes.

    With detunings ``d_k = omega_k - omega0`` and non-negative weights
    ``w_k`` the channel evaluates, per mode and summed,

        decay(t)          = sum_k w_k sin(d_k t) / d_k
        shift(t)          = sum_k w_k (1 - cos(d_k t)) / d_k
        decay_integral(t) = sum_k w_k (1 - cos(d_k t)) / d_k**2
        shift_integral(t) = sum_k w_k (t - sin(d_k t)/d_k) / d_k

    which are the running time integrals of ``w_k cos(d_k (t - s))`` and
    ``w_k sin(d_k (t - s))`` over s in [0, t], and their integrals again.
    All evaluators accept scalar or array ``t``.
    """

    detunings: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "detunings", np.atleast_1d(np.asarray(self.detunings, float)))
        object.__setattr__(self, "weights", np.atleast_1d(np.asarray(self.weights, float)))
        if self.detunings.shape != self.weights.shape:
            raise ValueError("one weight per detuning required")

    def _eval(self, t, which: int):
        t_arr = np.asarray(t, dtype=float)
        if self.detunings.size == 0:
            out = np.zeros_like(t_arr)
            return float(out) if t_arr.ndim == 0 else out
        x = np.multiply.outer(t_arr, self.detunings)
        kernel = _kernels(x)[which]
        # kernels are scaled by t (decay/shift) or t^2 (the integrals)
        power = 1 if which in (0, 1) else 2
        out = np.sum(self.weights * kernel, axis=-1) * t_arr ** power
        return float(out) if t_arr.ndim == 0 else out

    def decay(self, t):
        return self._eval(t, 0)

    def shift(self, t):
        return self._eval(t, 1)

    def decay_integral(self, t):
        return self._eval(t, 2)

    def shift_integral(self, t):
        return self._eval(t, 3)


@dataclass(frozen=True)
class RateFunctions:
    """Absorption (occupation-weighted) and emission (occupation+1) channels."""

    absorption: RateChannel
    emission: RateChannel

    def total_decay(self, t):
        return self.absorption.decay(t) + self.emission.decay(t)

    def total_shift(self, t):
        return self.absorption.shift(t) + self.emission.shift(t)

    def total_decay_integral(self, t):
        return self.absorption.decay_integral(t) + self.emission.decay_integral(t)

    def total_shift_integral(self, t):
        return self.absorption.shift_integral(t) + self.emission.shift_integral(t)


def rate_functions(model: SpinBosonModel) -> RateFunctions:
    """Closed per-mode rate evaluators for ``model``.

    The emission weights carry the extra ``+1``, so emission minus
    absorption is exactly the occupation-independent vacuum contribution.
    """
    detunings = model.frequencies - model.omega0
    g2 = model.couplings ** 2
    occ = model.occupations()
    return RateFunctions(
        absorption=RateChannel(detunings, g2 * occ),
        emission=RateChannel(detunings, g2 * (occ + 1.0)),
    )


# -- assembled equation of motion -------------------------------------------

def second_order_hamiltonian(rates: RateFunctions, t: float) -> np.ndarray:
    """Shift part of the generator, diagonal in the energy basis.

    absorption.shift * sigma_minus sigma_plus - emission.shift * sigma_plus sigma_minus.
    """
    return (rates.absorption.shift(t) * PROJ_DOWN
            - rates.emission.shift(t) * PROJ_UP)


def element_ode_matrix(rates: RateFunctions, t: float) -> np.ndarray:
    """Coefficient matrix of d/dt (rho00, rho01, rho10, rho11).

    Populations exchange with prefactor 8, coherences decay with prefactor 4
    and pick up a phase from the shift rates; the population block's columns
    sum to zero (probability conservation).
    """
    a = rates.absorption.decay(t)
    e = rates.emission.decay(t)
    s = rates.total_shift(t)
    lam = 4j * s - 4.0 * (a + e)
    return np.array([
        [-8.0 * e, 0.0, 0.0, 8.0 * a],
        [0.0, lam, 0.0, 0.0],
        [0.0, 0.0, np.conj(lam), 0.0],
        [8.0 * e, 0.0, 0.0, -8.0 * a],
    ], dtype=complex)


def coherence_solution(rho01_0: complex, rates: RateFunctions, t):
    """Closed-form upper coherence: initial value times a phase times a decay.

    Uses the exact running integrals; the lower coherence is the complex
    conjugate with the same decay envelope.
    """
    phase = np.exp(4j * rates.total_shift_integral(t))
    envelope = np.exp(-4.0 * rates.total_decay_integral(t))
    return rho01_0 * phase * envelope


def population_solution(rho00_0: float, rates: RateFunctions, t,
                        panels: int = 400):
    """Closed-form spin-up population by variation of parameters.

    With E(t) = exp(-8 int_0^t (absorption.decay + emission.decay)), returns

        rho00(t) = rho00(0) E(t) + E(t) int_0^t 8 absorption.decay(s) / E(s) ds,

    the inner integral on a composite-Simpson grid (default 400 panels),
    arranged as exp(I(s) - I(t)) so large exponents never appear.  The
    spin-down population is one minus the result.
    """
    def single(tv: float) -> float:
        if tv == 0.0:
            return float(rho00_0)
        nodes = np.linspace(0.0, tv, panels + 1)
        running = 8.0 * rates.total_decay_integral(nodes)
        homogeneous = rho00_0 * math.exp(-running[-1])
        integrand = 8.0 * rates.absorption.decay(nodes) * np.exp(running - running[-1])
        return float(homogeneous + simpson(integrand, x=nodes))

    t_arr = np.asarray(t, dtype=float)
    if t_arr.ndim == 0:
        return single(float(t_arr))
    return np.array([single(float(tv)) for tv in t_arr])


def vacuum_rates(model: SpinBosonModel, t):
    """Vacuum-limit pair (decay rate, level shift) = (2, -2) times the emission parts.

    Only defined for a vacuum bath, where the absorption channel vanishes
    identically and the equation of motion collapses to a single-dissipator
    form; finite temperatures are rejected.
    """
    if not model.vacuum:
        raise ValueError("vacuum rates require beta = math.inf")
    rates = rate_functions(model)
    return 2.0 * rates.emission.decay(t), -2.0 * rates.emission.shift(t)


def vacuum_rhs(model: SpinBosonModel, rho: np.ndarray, t: float) -> np.ndarray:
    """Generator assembled in the vacuum single-dissipator form.

    -(i/2) shift [P_up, rho] + decay (sigma_minus rho sigma_plus - {P_up, rho}/2)
    with P_up = sigma_plus sigma_minus.  Equals the generic second-order
    generator for vacuum baths; kept as an independent assembly for
    structural checks.
    """
    decay, shift = vacuum_rates(model, t)
    rho = np.asarray(rho, dtype=complex)
    comm = PROJ_UP @ rho - rho @ PROJ_UP
    anti = PROJ_UP @ rho + rho @ PROJ_UP
    return -0.5j * shift * comm + decay * (SIGMA_MINUS @ rho @ SIGMA_PLUS - 0.5 * anti)


def markov_rates(disc: SpectralDiscretization, model: SpinBosonModel) -> tuple[float, float]:
    """Constant long-time rates from the resonance approximation.

    Extending the memory integral to the infinite past turns the kernel into
    a delta at the system frequency, leaving pi * J(omega0) * n(omega0) for
    the absorption channel and the occupation+1 analogue for emission (the
    density of states times the squared coupling collapses to J).  Requires
    omega0 inside the sampled band; a delta outside it has no support.
    """
    if not disc.omega_min <= model.omega0 <= disc.omega_max:
        raise ValueError(
            f"omega0 = {model.omega0} outside the sampled band "
            f"[{disc.omega_min}, {disc.omega_max}]")
    j0 = disc.spectral_density(model.omega0)
    n0 = thermal_occupation(model.omega0, model.beta)
    return math.pi * j0 * n0, math.pi * j0 * (n0 + 1.0)


# -- bridge to the generic engine -------------------------------------------

def interaction_decomposition(model: SpinBosonModel,
                              coupling_scale: float = 1.0) -> InteractionDecomposition:
    """System operators of the coupling: raising paired with bath lowering
    (term 0) and lowering paired with bath raising (term 1).  In the frame
    co-rotating with the free Hamiltonian both are constant; the bath
    operators carry all time dependence."""
    return InteractionDecomposition(terms=(SIGMA_PLUS, SIGMA_MINUS),
                                    coupling_scale=coupling_scale)


def bath_statistics(model: SpinBosonModel) -> BathStatistics:
    """Thermal bath statistics for the two coupling terms.

    First moments vanish (the thermal state is diagonal in occupation
    number).  The only non-zero correlations are the cross ones:

        C[0,1](t, s) = sum_k g_k^2 (n_k + 1) exp(-i d_k (t - s))
        C[1,0](t, s) = sum_k g_k^2  n_k      exp(+i d_k (t - s))

    with d_k the detunings.  Their exact time integrals are supplied in
    closed form, so the generic engine never quadratures this bath unless
    asked to.
    """
    detunings = model.frequencies - model.omega0
    g2 = model.couplings ** 2
    occ = model.occupations()
    w_emit = g2 * (occ + 1.0)
    w_abs = g2 * occ

    def correlation(j: int, k: int, t: float, s: float) -> complex:
        if (j, k) == (0, 1):
            return complex(np.sum(w_emit * np.exp(-1j * detunings * (t - s))))
        if (j, k) == (1, 0):
            return complex(np.sum(w_abs * np.exp(1j * detunings * (t - s))))
        return 0j

    # fused rate evaluation with a one-slot memo: the RK4 inner loop asks for
    # several integrated correlations at the same time argument back to back;
    # the slot holds one (t, values) tuple so concurrent readers never see a
    # torn update
    memo = [(None, None)]

    def rates_at(t: float):
        cached_t, cached = memo[0]
        if cached_t == t:
            return cached
        x = detunings * t
        small = np.abs(x) < _RESONANCE_EPS
        xs = np.where(small, 1.0, x)
        decay_k = t * np.where(small, 1.0 - x * x / 6.0, np.sin(xs) / xs)
        shift_k = t * np.where(small, 0.5 * x * (1.0 - x * x / 12.0),
                               (1.0 - np.cos(xs)) / xs)
        vals = (w_abs @ decay_k, w_abs @ shift_k, w_emit @ decay_k, w_emit @ shift_k)
        memo[0] = (t, vals)
        return vals

    def integrated(j: int, k: int, t: float) -> complex:
        a_decay, a_shift, e_decay, e_shift = rates_at(t)
        if (j, k) == (0, 1):
            return e_decay - 1j * e_shift
        if (j, k) == (1, 0):
            return a_decay + 1j * a_shift
        return 0j

    def integrated_rev(j: int, k: int, t: float) -> complex:
        a_decay, a_shift, e_decay, e_shift = rates_at(t)
        if (j, k) == (0, 1):
            return e_decay + 1j * e_shift
        if (j, k) == (1, 0):
            return a_decay - 1j * a_shift
        return 0j

    zero = lambda t: 0j
    return BathStatistics(first_moments=(zero, zero),
                          correlation=correlation,
                          integrated_correlation=integrated,
                          integrated_correlation_rev=integrated_rev)
