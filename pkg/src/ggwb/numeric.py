"""Float evaluation helpers for sample-point rank/positivity certificates."""

from __future__ import annotations

import numpy as np

from .errors import ExprError
from .symexpr import ScalarExpr, evaluate, _POLE


def value_at(e: ScalarExpr, point: dict) -> complex:
    v = evaluate(e, point)
    if v is _POLE:
        raise ExprError(f"pole hit while evaluating at {point}")
    if isinstance(v, complex):
        return v
    return complex(v)


def grid_at(grid, point: dict) -> np.ndarray:
    return np.array([[value_at(e, point) for e in row] for row in grid], dtype=complex)


def rank_at(grid, point: dict, tol: float = 1e-9) -> int:
    m = grid_at(grid, point)
    sv = np.linalg.svd(m, compute_uv=False)
    scale = sv[0] if sv.size and sv[0] > 1 else 1.0
    return int((sv > tol * scale).sum())


def kernel_basis_at(grid, point: dict, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (columns) of the numeric kernel."""
    m = grid_at(grid, point)
    _, sv, vh = np.linalg.svd(m)
    scale = sv[0] if sv.size and sv[0] > 1 else 1.0
    null_mask = np.concatenate([sv, np.zeros(m.shape[1] - sv.size)]) <= tol * scale
    return vh[null_mask].conj().T


def symmetric_eigenvalues_at(gram, point: dict, tol: float = 1e-9) -> np.ndarray:
    m = grid_at(gram, point)
    if np.abs(m.imag).max() > tol or np.abs(m - m.T).max() > tol:
        raise ExprError("expected a real symmetric Gram matrix")
    return np.linalg.eigvalsh(m.real)
