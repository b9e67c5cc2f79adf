"""Truncated Hankel and Toeplitz matrices and the shared numerical primitives.

A Hankel section has entries phi_hat(m+n), a Toeplitz section phi_hat(m-n);
both are built on the analytic section of order N.  Rank decisions go
through a singular-value gap rule: without a factor-100 gap around the cut
the operation refuses instead of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import AmbiguousRank, InsufficientCoefficients, NoConvergence
from .fourier import Symbol, generator_symbol

# Full SVD is used up to this dimension; beyond it a power iteration
# computes the norm (desk-scale correctness beats asymptotic speed).
FULL_SVD_LIMIT = 1024

GAP_FACTOR = 100.0
RANK_TOL_FACTOR = 1e-8


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex matrix tagged with its spaces and truncation order."""

    entries: np.ndarray
    domain: str
    codomain: str
    order: int
    structure: Optional[str] = None  # "hankel" | "toeplitz" | None

    @property
    def shape(self):
        return self.entries.shape


def _entries(m) -> np.ndarray:
    return m.entries if isinstance(m, OperatorMatrix) else np.asarray(m, dtype=complex)


def analytic_tag(n: int) -> str:
    return f"H2(order={n})"


def hankel_matrix(phi: Symbol, n: int) -> OperatorMatrix:
    """Section with entry(m, k) = phi_hat(m + k); depends only on P_+ phi."""
    try:
        c = np.array([phi.coefficient(k) for k in range(2 * n + 1)])
    except InsufficientCoefficients:
        raise InsufficientCoefficients(
            f"hankel section of order {n} needs coefficients 0..{2 * n}"
        )
    idx = np.arange(n + 1)
    return OperatorMatrix(
        entries=c[idx[:, None] + idx[None, :]],
        domain=analytic_tag(n),
        codomain=analytic_tag(n),
        order=n,
        structure="hankel",
    )


def toeplitz_matrix(phi: Symbol, n: int) -> OperatorMatrix:
    """Section with entry(m, k) = phi_hat(m - k)."""
    try:
        c = np.array([phi.coefficient(k) for k in range(-n, n + 1)])
    except InsufficientCoefficients:
        raise InsufficientCoefficients(
            f"toeplitz section of order {n} needs coefficients -{n}..{n}"
        )
    idx = np.arange(n + 1)
    return OperatorMatrix(
        entries=c[idx[:, None] - idx[None, :] + n],
        domain=analytic_tag(n),
        codomain=analytic_tag(n),
        order=n,
        structure="toeplitz",
    )


def hilbert_generator() -> Symbol:
    """The Hilbert Hankel coefficients k -> 1/(k+1), exposed only as a generator."""
    return generator_symbol(
        lambda k: 1.0 / (k + 1), k_min=0, coeff_bound=1.0, name="hilbert"
    )


def hilbert_hankel(n: int) -> OperatorMatrix:
    """Entries 1/(m + k + 1): real symmetric positive definite."""
    if n < 0:
        raise ValueError("order must be >= 0")
    idx = np.arange(n + 1, dtype=float)
    return OperatorMatrix(
        entries=(1.0 / (idx[:, None] + idx[None, :] + 1.0)).astype(complex),
        domain=analytic_tag(n),
        codomain=analytic_tag(n),
        order=n,
        structure="hankel",
    )


def shift_matrix(n: int) -> np.ndarray:
    """Section of multiplication by z: entry (k+1, k) = 1."""
    s = np.zeros((n + 1, n + 1), dtype=complex)
    rows = np.arange(1, n + 1)
    s[rows, rows - 1] = 1.0
    return s


def operator_norm(m) -> float:
    """Largest singular value; power iteration above the full-SVD limit."""
    a = _entries(m)
    if a.size == 0:
        return 0.0
    if max(a.shape) <= FULL_SVD_LIMIT + 1:
        return float(np.linalg.svd(a, compute_uv=False)[0])
    return _power_norm(a)


def _power_norm(a, max_iter=10_000, rel_tol=1e-12):
    rng = np.random.default_rng(0)
    v = rng.standard_normal(a.shape[1]) + 1j * rng.standard_normal(a.shape[1])
    v /= np.linalg.norm(v)
    last = 0.0
    for _ in range(max_iter):
        w = a.conj().T @ (a @ v)
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return 0.0
        v = w / norm_w
        estimate = math.sqrt(norm_w)
        if abs(estimate - last) <= rel_tol * max(estimate, 1e-300):
            return float(estimate)
        last = estimate
    raise NoConvergence("power iteration hit its cap; conditioning is pathological")


@dataclass(frozen=True)
class RankGapReport:
    """Where the singular values straddle the rank cut."""

    dim: int
    cut: float
    sv_below: float  # largest singular value counted into the kernel (0 if none)
    sv_above: float  # smallest singular value kept out of it (inf if none)
    gap: float


def null_space(m, rank_tol=None):
    """Orthonormal basis of the numerical kernel plus a gap report.

    ``rank_tol`` is the absolute singular-value cut (default
    RANK_TOL_FACTOR * largest singular value).  Raises AmbiguousRank when
    the values around the cut are separated by less than GAP_FACTOR.
    """
    a = _entries(m)
    n_cols = a.shape[1]
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    s_full = np.concatenate([s, np.zeros(n_cols - s.size)])
    s_max = float(s_full[0]) if s_full.size else 0.0
    cut = float(rank_tol) if rank_tol is not None else RANK_TOL_FACTOR * s_max
    if cut <= 0.0:
        cut = RANK_TOL_FACTOR * max(s_max, 1.0)
    below = s_full[s_full <= cut]
    above = s_full[s_full > cut]
    dim = below.size
    sv_below = float(below.max()) if dim else 0.0
    sv_above = float(above.min()) if above.size else math.inf
    if dim == 0:
        gap = sv_above / cut
    elif not above.size or sv_below == 0.0:
        gap = math.inf
    else:
        gap = sv_above / sv_below
    report = RankGapReport(dim=dim, cut=cut, sv_below=sv_below, sv_above=sv_above, gap=gap)
    if gap < GAP_FACTOR:
        raise AmbiguousRank(
            f"no factor-{GAP_FACTOR:.0f} gap around cut {cut:.3e}: "
            f"sv_below={sv_below:.3e}, sv_above={sv_above:.3e}"
        )
    basis = vh[n_cols - dim :, :].conj().T if dim else np.zeros((n_cols, 0), dtype=complex)
    return basis, report


def matrix_to_jsonable(m: OperatorMatrix) -> dict:
    """Row-major [re, im] serialization for report embedding."""
    a = m.entries
    return {
        "domain": m.domain,
        "codomain": m.codomain,
        "order": m.order,
        "structure": m.structure,
        "shape": list(a.shape),
        "entries": [[float(v.real), float(v.imag)] for v in a.reshape(-1)],
    }


def singular_values_csv(m) -> str:
    """CSV export of the singular-value list, largest first."""
    s = np.linalg.svd(_entries(m), compute_uv=False)
    lines = ["index,singular_value"]
    lines += [f"{i},{v:.17g}" for i, v in enumerate(s)]
    return "\n".join(lines) + "\n"


def hankel_intertwine_residual(phi: Symbol, n: int) -> float:
    """Norm of the top-left n-section of T_z^* H - H T_z, built from order n+1.

    Both sides of the defining relation have entry phi_hat(m + k + 1) on
    the common section, so the residual must vanish to rounding.
    """
    h = hankel_matrix(phi, n + 1).entries
    t = shift_matrix(n + 1)
    resid = t.conj().T @ h - h @ t
    return operator_norm(resid[: n + 1, : n + 1])
