"""Model spaces of finite Blaschke products at finite truncation order.

The orthonormal basis of Q_u is the Takenaka-Malmquist system
e_k = sqrt(1-|a_k|^2)/(1 - conj(a_k) z) * prod_{j<k} (z - a_j)/(1 - conj(a_j) z),
which is triangular in the (canonically sorted) zero ordering and reduces
to the monomials when every zero vanishes.  The Beurling complement u*H^2
is represented by the truncated shifts u*z^k, re-orthonormalized so the
basis contract holds at the working order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blaschke import BlaschkeProduct, series_tail_bound, taylor_coefficients
from .errors import AmbiguousRank, OrderMismatch, TailBoundExceeded
from .operators import (
    GAP_FACTOR,
    OperatorMatrix,
    _entries,
    shift_matrix,
)

TAIL_TARGET = 1e-10
ORDER_CAP = 1 << 14


@dataclass(frozen=True)
class ModelSpaceBasis:
    """Orthonormal coefficient columns spanning Q_u at the given order."""

    columns: np.ndarray  # (order+1, degree)
    u: BlaschkeProduct
    order: int
    tail_bound: float

    @property
    def dim(self) -> int:
        return self.columns.shape[1]

    def tag(self) -> str:
        return f"Q({self.u.text()})"


@dataclass(frozen=True)
class BeurlingBasis:
    """Orthonormal columns spanning the truncated shifts of u at the given order."""

    columns: np.ndarray  # (order+1, order+1-degree)
    u: BlaschkeProduct
    order: int
    tail_bound: float
    column_tails: np.ndarray  # certified l1 tail of each raw shifted column


def tm_column_tails(u: BlaschkeProduct, order: int) -> np.ndarray:
    """Certified l1 tail of each Takenaka-Malmquist column beyond the order."""
    return np.array(
        [
            series_tail_bound(
                u.zeros[:k],
                order,
                szego_alpha=a,
                scale=np.sqrt(1.0 - abs(a) ** 2),
            )
            for k, a in enumerate(u.zeros)
        ]
    )


def _tm_tail(u: BlaschkeProduct, order: int) -> float:
    return float(tm_column_tails(u, order).max(initial=0.0))


def resolve_order(u: BlaschkeProduct, n: int, tail_target=TAIL_TARGET, order_cap=ORDER_CAP) -> int:
    """Smallest doubling of n at which the certified basis tail meets the target."""
    order = n
    while _tm_tail(u, order) > tail_target and order < order_cap:
        order = min(2 * order, order_cap)
    if _tm_tail(u, order) > tail_target:
        raise TailBoundExceeded(
            f"basis tail at the order cap {order_cap} still exceeds {tail_target:.1e} "
            f"for {u.text()}"
        )
    return order


def tm_basis(u: BlaschkeProduct, n: int, tail_target=TAIL_TARGET, order_cap=ORDER_CAP) -> ModelSpaceBasis:
    """Takenaka-Malmquist basis of Q_u, auto-raising the order for the tail target."""
    order = resolve_order(u, n, tail_target, order_cap)
    d = u.degree
    cols = np.zeros((order + 1, d), dtype=complex)
    partial = np.zeros(order + 1, dtype=complex)
    partial[0] = 1.0
    powers = np.arange(order + 1)
    for k, a in enumerate(u.zeros):
        szego = np.sqrt(1.0 - abs(a) ** 2) * np.conj(a) ** powers
        cols[:, k] = np.convolve(partial, szego)[: order + 1]
        # factor (z - a)/(1 - conj(a) z): constant -a, then (1-|a|^2) conj(a)^{k-1}
        factor = np.zeros(order + 1, dtype=complex)
        factor[0] = -a
        factor[1:] = (1.0 - abs(a) ** 2) * np.conj(a) ** powers[:-1]
        partial = np.convolve(partial, factor)[: order + 1]
    return ModelSpaceBasis(columns=cols, u=u, order=order, tail_bound=_tm_tail(u, order))


def shifted_inner_columns(u: BlaschkeProduct, n: int, k_max=None):
    """Raw truncated expansions of u*z^k for k = 0..k_max, with per-column tails."""
    d = u.degree
    if k_max is None:
        k_max = n - d
    if k_max < 0:
        raise ValueError("order too small for any shifted column")
    coeffs, _ = taylor_coefficients(u, n)
    cols = np.zeros((n + 1, k_max + 1), dtype=complex)
    tails = np.zeros(k_max + 1)
    for k in range(k_max + 1):
        cols[k:, k] = coeffs[: n + 1 - k]
        tails[k] = series_tail_bound(u.zeros, n - k)
    return cols, tails


def beurling_basis(u: BlaschkeProduct, n: int) -> BeurlingBasis:
    """Orthonormalized truncated shifts of u spanning the Beurling block.

    The raw shifts are orthonormal in the full inner product; truncation
    perturbs the Gram matrix by tail products, so a QR pass (with positive
    diagonal) restores orthonormality without changing the span.
    """
    raw, tails = shifted_inner_columns(u, n)
    q, r = np.linalg.qr(raw)
    signs = np.sign(np.real(np.diag(r)))
    signs[signs == 0] = 1.0
    return BeurlingBasis(
        columns=q * signs,
        u=u,
        order=n,
        tail_bound=float(tails.max(initial=0.0)),
        column_tails=tails,
    )


def compressed_shift(basis: ModelSpaceBasis) -> OperatorMatrix:
    """S = B* (shift section) B, the model operator on Q_u."""
    s = basis.columns.conj().T @ shift_matrix(basis.order) @ basis.columns
    return OperatorMatrix(
        entries=s, domain=basis.tag(), codomain=basis.tag(), order=basis.order
    )


def compress(m, basis: ModelSpaceBasis) -> OperatorMatrix:
    """B* M B for an operator on the analytic section of the same order."""
    if isinstance(m, OperatorMatrix) and m.order != basis.order:
        raise OrderMismatch(
            f"operator built at order {m.order}, basis at order {basis.order}"
        )
    a = _entries(m)
    if a.shape != (basis.order + 1, basis.order + 1):
        raise OrderMismatch(
            f"operator shape {a.shape} does not match the section of order {basis.order}"
        )
    return OperatorMatrix(
        entries=basis.columns.conj().T @ a @ basis.columns,
        domain=basis.tag(),
        codomain=basis.tag(),
        order=basis.order,
    )


def projector(columns) -> np.ndarray:
    """Orthogonal projector B B* onto the span of orthonormal columns."""
    b = columns.columns if hasattr(columns, "columns") else np.asarray(columns)
    return b @ b.conj().T


def basis_to_jsonable(basis) -> dict:
    """Basis columns as row-major [re, im] pairs next to the defining product."""
    cols = basis.columns
    return {
        "u": basis.u.text(),
        "order": basis.order,
        "tail_bound": basis.tail_bound,
        "shape": list(cols.shape),
        "columns": [[float(v.real), float(v.imag)] for v in cols.reshape(-1)],
    }


def subspace_intersection_dim(b1, b2, tol=1e-6) -> int:
    """Dimension of span(b1) intersect span(b2) via the stacked-basis spectrum.

    Squared singular values of [b1 b2] equal 1 +- cos(principal angles);
    an intersection direction contributes a value at 2.  The factor-100
    gap rule guards the count.
    """
    b1 = b1.columns if hasattr(b1, "columns") else np.asarray(b1)
    b2 = b2.columns if hasattr(b2, "columns") else np.asarray(b2)
    stacked = np.hstack([b1, b2])
    s = np.linalg.svd(stacked, compute_uv=False)
    defects = np.sort(np.abs(2.0 - s**2))
    hits = defects[defects <= tol]
    rest = defects[defects > tol]
    if hits.size and rest.size:
        top = hits.max()
        if top > 0 and rest.min() / top < GAP_FACTOR:
            raise AmbiguousRank(
                f"intersection count ambiguous: defects {top:.3e} vs {rest.min():.3e}"
            )
    return int(hits.size)
