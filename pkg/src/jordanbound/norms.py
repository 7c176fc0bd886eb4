"""G-invariant norms and their operator norms.

Two constructions are provided:

* :class:`HermitianFormContext` averages the standard inner product,
  ``P = sum_h h^H h``. With ``P = c^H c`` the vector norm is ``||c v||_2`` and
  the operator norm of ``a`` is exactly ``spectral_norm(c a c^-1)``.
* :class:`SummedNormContext` averages the Euclidean norm itself,
  ``N(v) = sum_h ||h v||_2``. Its operator norm has no closed form and is
  reported as an interval.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

from .errors import DimensionMismatchError
from .groups import FiniteMatrixGroup
from .linalg import cholesky, condition_number, mat_inverse, spectral_norm, spectral_norms

COND_WARN = 1e6


class Interval(NamedTuple):
    lower: float
    upper: float

    @property
    def gap(self) -> float:
        return self.upper / self.lower - 1.0 if self.lower > 0 else float("inf")


@dataclass(frozen=True, eq=False)
class HermitianFormContext:
    gram: np.ndarray
    factor: np.ndarray
    factor_inverse: np.ndarray
    warnings: tuple[str, ...] = ()

    kind = "hermitian"

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    def norm(self, v) -> float:
        return float(np.linalg.norm(self.factor @ np.asarray(v, dtype=np.complex128)))

    def transform(self, a) -> np.ndarray:
        """``c a c^-1``, or a stack of them."""
        return self.factor @ np.asarray(a, dtype=np.complex128) @ self.factor_inverse

    def op_norm(self, a) -> float:
        a = _checked(a, self.dim)
        return spectral_norm(self.transform(a))

    def op_norms(self, stack) -> np.ndarray:
        return spectral_norms(self.transform(stack))


@dataclass(eq=False)
class SummedNormContext:
    """``N(v) = sum_h ||h v||_2`` with an ascent-based operator-norm estimator.

    ``op_norm`` returns an :class:`Interval`. The lower end is the best ratio
    ``N(a v) / N(v)`` found by normalized gradient ascent from ``starts``
    random vectors, so it never exceeds the true value. The upper end uses
    ``N(a v) = sum_h ||(h a h^-1) h v|| <= max_h ||h a h^-1||_2 N(v)``.
    """

    group: FiniteMatrixGroup
    starts: int = 512
    steps: int = 200
    seed: int = 0
    _inverses: np.ndarray | None = field(default=None, repr=False)
    _stacked: np.ndarray | None = field(default=None, repr=False)

    kind = "summed"

    @property
    def dim(self) -> int:
        return self.group.dim

    @property
    def inverses(self) -> np.ndarray:
        if self._inverses is None:
            self._inverses = np.linalg.inv(self.group.elements)
        return self._inverses

    def norm(self, v) -> float:
        return float(self.norms(np.asarray(v, dtype=np.complex128).reshape(-1, 1))[0])

    @property
    def stacked(self) -> np.ndarray:
        """All elements stacked vertically into a ``(|G| n, n)`` array."""
        if self._stacked is None:
            self._stacked = np.ascontiguousarray(self.group.elements.reshape(-1, self.dim))
        return self._stacked

    def norms(self, vs: np.ndarray) -> np.ndarray:
        """``N`` of every column of an ``(n, k)`` array."""
        hv = (self.stacked @ vs).reshape(self.group.order, self.dim, -1)
        return np.linalg.norm(hv, axis=1).sum(axis=0)

    def _grad(self, vs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        # gradient of N at each column: sum_h h^H (h v) / ||h v||
        hv = (self.stacked @ vs).reshape(self.group.order, self.dim, -1)
        r = np.linalg.norm(hv, axis=1, keepdims=True)
        total = r.sum(axis=0)[0]
        r = np.where(r == 0.0, 1.0, r)
        grad = self.stacked.conj().T @ (hv / r).reshape(-1, vs.shape[1])
        return total, grad

    def upper_bound(self, a) -> float:
        conjugates = self.group.elements @ a @ self.inverses
        return float(np.max(spectral_norms(conjugates)))

    def lower_bound(self, a) -> float:
        a = _checked(a, self.dim)
        n = self.dim
        rng = np.random.default_rng(self.seed)
        v = rng.standard_normal((n, self.starts)) + 1j * rng.standard_normal((n, self.starts))
        v /= self.norms(v)
        step = np.full(self.starts, 0.5)

        def ratio_and_grad(v):
            nv, gv = self._grad(v)
            nav, gav = self._grad(a @ v)
            ratio = nav / nv
            grad = ratio * ((a.conj().T @ gav) / nav - gv / nv)
            return ratio, grad

        ratio, grad = ratio_and_grad(v)
        best = float(np.max(ratio))
        for _ in range(self.steps):
            gnorm = np.linalg.norm(grad, axis=0)
            gnorm = np.where(gnorm == 0.0, 1.0, gnorm)
            trial = v + step * grad / gnorm
            trial /= self.norms(trial)
            t_ratio, t_grad = ratio_and_grad(trial)
            better = t_ratio >= ratio
            v = np.where(better, trial, v)
            ratio = np.where(better, t_ratio, ratio)
            grad = np.where(better, t_grad, grad)
            step = np.where(better, step * 1.5, step * 0.5)
            best = max(best, float(np.max(ratio)))
        return best

    def op_norm(self, a) -> Interval:
        a = _checked(a, self.dim)
        lower = self.lower_bound(a)
        upper = max(self.upper_bound(a), lower)
        return Interval(lower, upper)


NormContext = Union[HermitianFormContext, SummedNormContext]


def _checked(a, n: int) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.shape != (n, n):
        raise DimensionMismatchError(f"expected {n}x{n}, got {a.shape}")
    return a


def build_hermitian_form(g: FiniteMatrixGroup) -> HermitianFormContext:
    h = g.elements
    gram = np.einsum("kji,kjl->il", h.conj(), h)
    gram = (gram + gram.conj().T) / 2
    c = cholesky(gram)
    notes = []
    cond = condition_number(c)
    if cond > COND_WARN:
        msg = f"invariant form factor has condition number {cond:.3g}; 1e-9 tolerances may be unachievable"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)
        notes.append(msg)
    return HermitianFormContext(gram=gram, factor=c, factor_inverse=mat_inverse(c, residual_tol=1e-6),
                                warnings=tuple(notes))


def build_summed_norm(g: FiniteMatrixGroup, starts: int = 512, steps: int = 200,
                      seed: int = 0) -> SummedNormContext:
    return SummedNormContext(group=g, starts=starts, steps=steps, seed=seed)


def op_norm(ctx: NormContext, a):
    return ctx.op_norm(a)


def verify_isometry(ctx: NormContext, g: FiniteMatrixGroup, samples: int = 100, seed: int = 0) -> float:
    """Largest relative isometry defect of the group elements under ``ctx``."""
    if isinstance(ctx, HermitianFormContext):
        p = ctx.gram
        h = g.elements
        moved = np.einsum("kji,jl,klm->kim", h.conj(), p, h)
        return float(np.max(np.linalg.norm(moved - p, axis=(1, 2))) / np.linalg.norm(p))
    rng = np.random.default_rng(seed)
    n = g.dim
    v = rng.standard_normal((n, samples)) + 1j * rng.standard_normal((n, samples))
    v /= np.linalg.norm(v, axis=0)
    base = ctx.norms(v)
    worst = 0.0
    for h in g.elements:
        worst = max(worst, float(np.max(np.abs(ctx.norms(h @ v) - base) / base)))
    return worst
