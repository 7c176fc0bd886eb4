"""Dense complex matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` and shape
``(n, n)``; :func:`as_matrix` validates and converts. All routines are
pure and never mutate their arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConvergenceError,
    DimensionMismatchError,
    NonFiniteEntryError,
    NotPositiveDefiniteError,
    SingularMatrixError,
)

#: inverses are refused above this 2-norm condition number
MAX_CONDITION = 1e12


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds.

    ``eq_tol`` decides when two matrices are the same group element
    (Frobenius distance); ``residual_tol`` bounds the residual of every
    verified identity.
    """

    eq_tol: float = 1e-8
    residual_tol: float = 1e-9

    def __post_init__(self):
        for name in ("eq_tol", "residual_tol"):
            value = getattr(self, name)
            if not (0.0 <= value < 1e-4):
                raise ValueError(f"{name} must lie in [0, 1e-4), got {value!r}")


DEFAULT_TOL = Tolerance()


def as_matrix(a) -> np.ndarray:
    """Validate ``a`` as a square, finite, complex matrix and return a copy."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionMismatchError(f"expected a nonempty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteEntryError("matrix has NaN or infinite entries")
    m.setflags(write=False)
    return m


def identity(n: int) -> np.ndarray:
    if n < 1:
        raise DimensionMismatchError(f"dimension must be positive, got {n}")
    return as_matrix(np.eye(n))


def _same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape} vs {b.shape}")


def mat_mul(a, b) -> np.ndarray:
    a, b = np.asarray(a), np.asarray(b)
    _same_dim(a, b)
    return a @ b


def frobenius_distance(a, b) -> float:
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))


def condition_number(a) -> float:
    s = np.linalg.svd(np.asarray(a), compute_uv=False)
    if s[-1] == 0.0:
        return float("inf")
    return float(s[0] / s[-1])


def mat_inverse(a, residual_tol: float = 1e-9) -> np.ndarray:
    """Inverse via an LU solve against the identity.

    Raises :class:`SingularMatrixError` when the condition number exceeds
    :data:`MAX_CONDITION` or the residual ``||a b - I||_F`` exceeds
    ``residual_tol`` (scaled by the condition number).
    """
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    cond = condition_number(a)
    if not cond < MAX_CONDITION:
        raise SingularMatrixError(f"matrix is singular or ill-conditioned (cond={cond:.3g})")
    try:
        b = np.linalg.solve(a, np.eye(n))
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(str(exc)) from exc
    residual = frobenius_distance(a @ b, np.eye(n))
    if residual > max(residual_tol, 1e-15 * n * cond):
        raise SingularMatrixError(f"inverse residual {residual:.3g} too large")
    return b


def eigenvalues(a) -> np.ndarray:
    """Eigenvalues with multiplicity (Hessenberg QR via LAPACK ``geev``).

    LAPACK caps its QR sweeps at a fixed multiple of ``n``; exhausting the cap
    surfaces as :class:`ConvergenceError`.
    """
    try:
        return np.linalg.eigvals(np.asarray(a, dtype=np.complex128))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration did not converge: {exc}") from exc


def is_hermitian(p, tol: float) -> bool:
    p = np.asarray(p)
    return frobenius_distance(p, p.conj().T) <= tol * max(1.0, float(np.linalg.norm(p)))


def cholesky(p, residual_tol: float = 1e-9) -> np.ndarray:
    """Upper-triangular ``c`` with ``c^H c = p`` for Hermitian positive definite ``p``."""
    p = np.asarray(p, dtype=np.complex128)
    if not is_hermitian(p, residual_tol):
        raise NotPositiveDefiniteError("matrix is not Hermitian")
    try:
        lower = np.linalg.cholesky(p)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(f"matrix is not positive definite: {exc}") from exc
    return lower.conj().T


def spectral_norm(a) -> float:
    """Largest singular value."""
    a = np.asarray(a, dtype=np.complex128)
    try:
        s = np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge: {exc}") from exc
    return float(s[0])


def spectral_norms(stack) -> np.ndarray:
    """Largest singular value of every matrix in a ``(k, n, n)`` stack."""
    stack = np.asarray(stack, dtype=np.complex128)
    if stack.shape[0] == 0:
        return np.zeros(0)
    if stack.shape[-1] == 1:
        return np.abs(stack[:, 0, 0])
    try:
        return np.linalg.svd(stack, compute_uv=False)[:, 0]
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge: {exc}") from exc
