"""Dense complex linear algebra shared by the dynamics modules.

Everything operates on plain ``numpy`` arrays (``complex128``, square).  The
Hilbert spaces in this package stay small (a two-level system times a
truncated bosonic bath), so dense storage plus eigendecompositions beat any
sparse or iterative machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerances",
    "DEFAULT_TOLS",
    "SubsystemShape",
    "kron",
    "partial_trace",
    "commutator",
    "hermitian_propagator",
    "hermiticity_defect",
    "require_hermitian",
]


@dataclass(frozen=True)
class Tolerances:
    """Validity-check tolerances, centralized so tests can tighten them."""

    hermiticity: float = 1e-10   # max |A - A^dag| for inputs declared Hermitian
    unitarity: float = 1e-9     # max |U U^dag - I| for produced propagators
    trace: float = 1e-12        # residual trace of commutators and the like


DEFAULT_TOLS = Tolerances()


def _as_square(a, name: str = "matrix") -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    return a


def hermiticity_defect(a: np.ndarray) -> float:
    """Max-norm distance of ``a`` from its own conjugate transpose."""
    a = np.asarray(a)
    return float(np.max(np.abs(a - a.conj().T)))


def require_hermitian(a: np.ndarray, tol: float = DEFAULT_TOLS.hermiticity,
                      name: str = "matrix") -> np.ndarray:
    a = _as_square(a, name)
    defect = hermiticity_defect(a)
    if defect > tol:
        raise ValueError(f"{name} is not Hermitian: max |A - A^dag| = {defect:.3e} > {tol:.1e}")
    return a


@dataclass(frozen=True)
class SubsystemShape:
    """Tensor-factor layout of a composite Hilbert space.

    ``factor_dims`` lists the dimension of each factor in kron order and
    ``keep_index`` names the factor that survives a partial trace.
    """

    factor_dims: tuple[int, ...]
    keep_index: int

    def __post_init__(self):
        object.__setattr__(self, "factor_dims", tuple(int(d) for d in self.factor_dims))
        if not self.factor_dims or any(d < 1 for d in self.factor_dims):
            raise ValueError(f"factor dimensions must be positive, got {self.factor_dims}")
        if not 0 <= self.keep_index < len(self.factor_dims):
            raise ValueError(
                f"keep_index {self.keep_index} out of range for {len(self.factor_dims)} factors")

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.factor_dims))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two square matrices."""
    return np.kron(_as_square(a, "a"), _as_square(b, "b"))


def partial_trace(rho: np.ndarray, shape: SubsystemShape) -> np.ndarray:
    """Trace out every tensor factor except ``shape.keep_index``.

    The trace of the input is preserved exactly (the operation is a plain
    index contraction).
    """
    rho = _as_square(rho, "rho")
    if rho.shape[0] != shape.total_dim:
        raise ValueError(
            f"state dimension {rho.shape[0]} does not match factor dims {shape.factor_dims}")
    dims = shape.factor_dims
    n = len(dims)
    reshaped = rho.reshape(dims + dims)
    # einsum sublist form: traced factors share one label between row and
    # column axes, the kept factor gets distinct row/column labels.
    row_labels = list(range(n))
    col_labels = [i if i != shape.keep_index else n + i for i in range(n)]
    out_labels = [shape.keep_index, n + shape.keep_index]
    return np.einsum(reshaped, row_labels + col_labels, out_labels)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a @ b - b @ a`` for equal-dimension square matrices."""
    a = _as_square(a, "a")
    b = _as_square(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def hermitian_propagator(h: np.ndarray, t: float,
                         tol: Tolerances = DEFAULT_TOLS) -> np.ndarray:
    """``exp(-i h t)`` for Hermitian ``h`` via eigendecomposition.

    The eigenbasis route is exactly unitary up to rounding, and reusing it
    across many times is cheap; it rejects inputs that fail the hermiticity
    tolerance rather than silently symmetrizing them.
    """
    h = require_hermitian(h, tol.hermiticity, "propagator generator")
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * float(t))) @ v.conj().T
