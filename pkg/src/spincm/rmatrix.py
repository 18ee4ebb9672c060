"""Spectral kernels, the hyperbolic dynamical r-matrix, and Lax matrices.

Kernels:

* trigonometric: ``c(z) = cot(z/2) / 2`` and ``d(z) = c(z) + z/12``;
* hyperbolic r-matrix action
  ``(R(q) x)_{ij} = -coth((q_i - q_j)/2) x_{ij} / 2`` for i != j, zero on
  the diagonal.

The Lax matrix of the trigonometric spin system is

    L(z) = diag(p) + d(z) * diag(spin)
         + sum_{i!=j} (c(z) + c(q_i - q_j)) exp(z (q_i - q_j)/12) spin_ij E_ij

and ``lax_cm_tilde`` is the same matrix with the exponential factors removed
(conjugation by exp(-z q / 12)); both have the same characteristic
polynomial at every z.

All evaluations guard against kernel poles: |sin| or |sinh| of the relevant
half-difference must exceed ``POLE_CUTOFF``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import lie_core
from .errors import CollisionError, PoleProximityError

POLE_CUTOFF = 1e-8


def c_of_z(z: complex) -> complex:
    z = complex(z)
    if abs(z) < 0.05:
        # Laurent branch: avoids the catastrophic cancellation of
        # cot(z/2)/2 against 1/z near the pole at the origin
        if abs(z) <= 2.0 * POLE_CUTOFF:
            raise PoleProximityError(f"z={z} too close to a pole of c(z)")
        z2 = z * z
        return 1.0 / z - z * (1.0 / 12.0 + z2 * (1.0 / 720.0 + z2 * (1.0 / 30240.0 + z2 / 1209600.0)))
    s = np.sin(0.5 * z)
    if abs(s) <= POLE_CUTOFF:
        raise PoleProximityError(f"z={z} too close to a pole of c(z)")
    return 0.5 * np.cos(0.5 * z) / s


def d_of_z(z: complex) -> complex:
    return c_of_z(z) + z / 12.0


def c_prime(z: complex) -> complex:
    s = np.sin(0.5 * z)
    if abs(s) <= POLE_CUTOFF:
        raise PoleProximityError(f"z={z} too close to a pole of c'(z)")
    return -0.25 / s**2


def d_prime(z: complex) -> complex:
    return c_prime(z) + 1.0 / 12.0


def _gaps(q) -> np.ndarray:
    q = np.asarray(q, dtype=complex)
    return q[:, None] - q[None, :]


def _check_hyp(dq: np.ndarray) -> np.ndarray:
    n = dq.shape[0]
    sh = np.sinh(0.5 * dq)
    off = ~np.eye(n, dtype=bool)
    if np.any(np.abs(sh[off]) <= POLE_CUTOFF):
        gap = float(np.abs(sh[off]).min())
        raise CollisionError(f"coincident coordinates (min |sinh| = {gap:.3e})", gap=gap)
    return sh


def _check_trig(dq: np.ndarray) -> np.ndarray:
    n = dq.shape[0]
    s = np.sin(0.5 * dq)
    off = ~np.eye(n, dtype=bool)
    if np.any(np.abs(s[off]) <= POLE_CUTOFF):
        gap = float(np.abs(s[off]).min())
        raise CollisionError(f"coincident coordinates (min |sin| = {gap:.3e})", gap=gap)
    return s


def coth_half_kernel(q) -> np.ndarray:
    """Matrix with entries coth((q_i - q_j)/2) off the diagonal, 0 on it."""
    dq = _gaps(q)
    sh = _check_hyp(dq)
    n = dq.shape[0]
    out = np.zeros((n, n), dtype=complex)
    off = ~np.eye(n, dtype=bool)
    out[off] = np.cosh(0.5 * dq[off]) / sh[off]
    return out


def r_hyp_apply(q, x) -> np.ndarray:
    """Hyperbolic dynamical r-matrix acting on x at base point q.

    Skew w.r.t. the pairing: pair(R(q)x, y) = -pair(x, R(q)y); maps
    Hermitian matrices to skew-Hermitian ones for real q.
    """
    x = lie_core.as_matrix(x)
    return -0.5 * coth_half_kernel(q) * x


def dr_hyp_apply(q, h, x) -> np.ndarray:
    """Directional derivative of q -> R(q)x along the diagonal direction h.

    h is given as a diagonal matrix (complex entries allowed; the kernel is
    holomorphic in q).
    """
    x = lie_core.as_matrix(x)
    h = np.diag(lie_core.as_matrix(h))
    dq = _gaps(q)
    sh = _check_hyp(dq)
    n = dq.shape[0]
    out = np.zeros((n, n), dtype=complex)
    off = ~np.eye(n, dtype=bool)
    dh = h[:, None] - h[None, :]
    out[off] = 0.25 * dh[off] / sh[off] ** 2 * x[off]
    return out


def mdybe_residual(q, x, y) -> tuple[np.ndarray, float]:
    """Residual of the modified dynamical Yang-Baxter identity at (q, x, y).

    Evaluates

        LHS = [Rx, Ry] - R([Rx, y] + [x, Ry])
              + dR(q)(diag x)(y) - dR(q)(diag y)(x) + <dR(q)(.)x, y>

    where the last term is the diagonal matrix pairing-dual to
    lam -> pair(dR(q)(lam)x, y).  Returns (LHS + fit * [x, y], fit) where
    fit minimizes the Frobenius norm of the combination; for a kernel
    solving the identity the residual vanishes and fit recovers the
    constant c^2 in LHS = -c^2 [x, y].  When [x, y] is numerically zero the
    fit is reported as 0.
    """
    x, y = lie_core.as_matrix(x), lie_core.as_matrix(y)
    n = x.shape[0]
    rx, ry = r_hyp_apply(q, x), r_hyp_apply(q, y)
    lhs = lie_core.commutator(rx, ry)
    lhs -= r_hyp_apply(q, lie_core.commutator(rx, y) + lie_core.commutator(x, ry))
    lhs += dr_hyp_apply(q, np.diag(np.diag(x)), y)
    lhs -= dr_hyp_apply(q, np.diag(np.diag(y)), x)
    lhs += lie_core.representer_diag(
        lambda lam: lie_core.pair(dr_hyp_apply(q, lam, x), y), n
    )
    xy = lie_core.commutator(x, y)
    denom = lie_core.pair(xy, xy)
    if abs(denom) < 1e-300 or lie_core.frob(xy) < 1e-14 * max(lie_core.frob(x) * lie_core.frob(y), 1.0):
        return lhs, 0.0
    fit = -lie_core.pair(lhs, xy) / denom
    return lhs + fit * xy, float(fit)


def _lax_kernel(q, z) -> tuple[np.ndarray, np.ndarray]:
    """Off-diagonal kernel (c(z) + c(q_i - q_j)) and exp(z (q_i - q_j)/12)."""
    dq = _gaps(q)
    s = _check_trig(dq)
    n = dq.shape[0]
    cz = c_of_z(z)
    ker = np.zeros((n, n), dtype=complex)
    off = ~np.eye(n, dtype=bool)
    ker[off] = cz + 0.5 * np.cos(0.5 * dq[off]) / s[off]
    return ker, np.exp(z * dq / 12.0)


def lax_cm(q, p, spin, z: complex) -> np.ndarray:
    """Trigonometric Lax matrix L(z) of the spin system."""
    spin = lie_core.as_matrix(spin)
    ker, expo = _lax_kernel(q, z)
    out = ker * expo * spin
    np.fill_diagonal(out, np.asarray(p, dtype=complex) + d_of_z(z) * np.diag(spin))
    return out


def lax_cm_tilde(q, p, spin, z: complex) -> np.ndarray:
    """Gauge-reduced Lax matrix: lax_cm conjugated by exp(-z q / 12)."""
    spin = lie_core.as_matrix(spin)
    ker, _ = _lax_kernel(q, z)
    out = ker * spin
    np.fill_diagonal(out, np.asarray(p, dtype=complex) + d_of_z(z) * np.diag(spin))
    return out


def lax_m_minus_one(q, p, spin) -> np.ndarray:
    """Constant Laurent coefficient of L(z) at z = 0.

    Equals lim_{z->0} (L(z) - spin / z); the simple-pole coefficient of L
    is the spin matrix itself.
    """
    spin = lie_core.as_matrix(spin)
    dq = _gaps(q)
    s = _check_trig(dq)
    n = dq.shape[0]
    off = ~np.eye(n, dtype=bool)
    ker = np.zeros((n, n), dtype=complex)
    ker[off] = 0.5 * np.cos(0.5 * dq[off]) / s[off] + dq[off] / 12.0
    out = ker * spin
    np.fill_diagonal(out, np.asarray(p, dtype=complex))
    return out


def _first_slot_contraction(q, w, eta, derivative: bool = False) -> np.ndarray:
    """Contraction of the trigonometric r-matrix kernel against eta.

    Output entry (a, b), a != b, carries the kernel factor built from
    q_b - q_a; the diagonal carries d(w).  With derivative=True the
    w-derivative of the kernel is used instead.
    """
    eta = lie_core.as_matrix(eta)
    n = eta.shape[0]
    dq = _gaps(q).T  # entry (a, b) = q_b - q_a
    s = _check_trig(dq)
    off = ~np.eye(n, dtype=bool)
    expo = np.exp(w * dq / 12.0)
    ker = np.zeros((n, n), dtype=complex)
    cq = np.zeros((n, n), dtype=complex)
    cq[off] = 0.5 * np.cos(0.5 * dq[off]) / s[off]
    if not derivative:
        ker[off] = (c_of_z(w) + cq[off]) * expo[off]
        out = ker * eta
        np.fill_diagonal(out, d_of_z(w) * np.diag(eta))
    else:
        ker[off] = (c_prime(w) + (c_of_z(w) + cq[off]) * dq[off] / 12.0) * expo[off]
        out = ker * eta
        np.fill_diagonal(out, d_prime(w) * np.diag(eta))
    return out


def lax_connection(q, p, spin, z: complex, momentum_tol: float = 1e-10) -> np.ndarray:
    """Companion matrix B(z) of the Lax flow, dL/dt = [L, B].

    Valid on the zero-momentum set (diag(spin) = 0).  Built from the two
    nonzero negative Laurent coefficients of M(z) = L(z)/z:

        B(z) = M(z)/2 + F(q, -z)[M_{-1}] + F'(q, -z)[spin]

    with F the first-slot contraction of the trigonometric r-matrix kernel.
    """
    spin = lie_core.as_matrix(spin)
    if lie_core.frob(np.diag(np.diag(spin))) > momentum_tol:
        raise ValueError("lax_connection requires a momentum-zero spin matrix")
    m = lax_cm(q, p, spin, z) / z
    b = 0.5 * m
    b += _first_slot_contraction(q, -z, lax_m_minus_one(q, p, spin))
    b += _first_slot_contraction(q, -z, spin, derivative=True)
    return b


@dataclass
class LaxMatrix:
    """A spectral-parameter-dependent matrix, sampled on demand."""

    evaluator: Callable[[complex], np.ndarray]
    n: int
    description: str = ""

    def __call__(self, z: complex) -> np.ndarray:
        out = lie_core.as_matrix(self.evaluator(z))
        if out.shape != (self.n, self.n):
            raise ValueError(f"evaluator returned shape {out.shape}, expected {(self.n, self.n)}")
        return out


def cm_lax_matrix(q, p, spin) -> LaxMatrix:
    q = np.asarray(q, dtype=float)
    return LaxMatrix(
        evaluator=lambda z: lax_cm(q, p, spin, z),
        n=len(q),
        description="trigonometric spin Lax matrix",
    )
