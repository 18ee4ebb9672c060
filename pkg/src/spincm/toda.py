"""Affine Toda soliton data and its reduction to the spin RS flow.

The soliton matrix V evolves along each light-cone coordinate by

    dV/dx_pm = (Lambda_pm V + V Lambda_pm) / 2,
    Lambda_+ = diag(+sqrt(2) m exp(-eta_j) sin(theta_j / 2)),
    Lambda_- = diag(-sqrt(2) m exp(+eta_j) sin(theta_j / 2)),

solved exactly as V(x) = E V0 E with the diagonal exponential
E = exp((Lambda_+ x_+ + Lambda_- x_-) / 2).  V stays skew-Hermitian with
-iV positive definite, so there is a unitary U (unique up to diagonal
phases) with i exp(diag q) = U V U*; g_pm = U Lambda_pm U* then solve the
spin RS equations in x_pm.

Tau functions and fields:

    tau_j = det(1 + e^{ij Theta/2} V e^{ij Theta/2}),   j mod (n+1),
    phi_j = Log(tau_j / tau_{j+1}) / (i beta).

The pairing of fields to tau ratios is pinned by hand-substituting the
one-soliton tau into the field equation: with the product identity
Lambda_+ Lambda_- = -2 m^2 sin^2(theta/2) one finds

    d+ d- log tau_j = (m^2 / 2)(tau_{j+1} tau_{j-1} / tau_j^2 - 1)

exactly, and the quotient above (tau_j over tau_{j+1}) is the assignment
for which the field equation with nonlinear term
exp(i beta (phi_j - phi_{j+1})) = tau_j tau_{j+2} / tau_{j+1}^2 is
satisfied identically for every rank n.  The reversed quotient satisfies
it only for n = 1, where the two assignments coincide up to an overall
field sign.

Gauge and branch conventions: the first frame makes the largest entry of
each eigenvector column real positive; continued frames maximize the real
part of the overlap with the previous frame's columns.  Field branches are
continued by minimizing Re-jumps in units of 2 pi / beta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lie_core, rmatrix
from .errors import (
    EigenvalueCollisionError,
    SpectrumConeError,
    TauZeroError,
)

THETA_LATTICE_TOL = 1e-12
EIGEN_GAP_TOL = 1e-10
OVERFLOW_EXPONENT = 700.0


@dataclass
class SolitonSpec:
    n: int  # Toda rank; fields are indexed mod n + 1
    m: float
    beta: float
    theta: np.ndarray
    eta: np.ndarray
    v0: np.ndarray

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float).copy()
        self.eta = np.asarray(self.eta, dtype=float).copy()
        self.v0 = lie_core.as_matrix(self.v0).copy()

    @property
    def soliton_count(self) -> int:
        return len(self.theta)

    def validate(self):
        if self.n < 1:
            raise ValueError("Toda rank n must be >= 1")
        if self.m <= 0 or self.beta <= 0:
            raise ValueError("mass and coupling must be positive")
        nsol = self.soliton_count
        if self.eta.shape != (nsol,) or self.v0.shape != (nsol, nsol):
            raise ValueError("inconsistent soliton data dimensions")
        lattice = 2.0 * np.pi * np.arange(1, self.n + 1) / (self.n + 1)
        for t in self.theta:
            if np.min(np.abs(lattice - t)) > THETA_LATTICE_TOL:
                raise ValueError(
                    f"theta={t} is not on the allowed lattice 2 pi k/(n+1), k=1..n"
                )
        if lie_core.subspace_defect(self.v0, "skew_hermitian") > 1e-12:
            raise ValueError("V0 must be skew-Hermitian")
        eig = np.linalg.eigvalsh(-1j * self.v0)
        if np.min(eig) <= 0:
            raise SpectrumConeError("V0 must have spectrum on the positive imaginary axis")
        return self


def lambda_values(spec: SolitonSpec, sign: str) -> np.ndarray:
    """Diagonal of Lambda_+ (sign '+') or Lambda_- (sign '-')."""
    s = np.sin(0.5 * spec.theta)
    if sign == "+":
        return np.sqrt(2.0) * spec.m * np.exp(-spec.eta) * s
    if sign == "-":
        return -np.sqrt(2.0) * spec.m * np.exp(spec.eta) * s
    raise ValueError("sign must be '+' or '-'")


def evolve_v(spec: SolitonSpec, x_plus: float, x_minus: float) -> np.ndarray:
    """Closed-form soliton matrix V(x_+, x_-) = E V0 E."""
    expo = 0.5 * (lambda_values(spec, "+") * x_plus + lambda_values(spec, "-") * x_minus)
    if np.max(np.abs(expo)) > OVERFLOW_EXPONENT:
        raise OverflowError("light-cone coordinates too large for the diagonal exponential")
    e = np.exp(expo)
    return (e[:, None] * spec.v0) * e[None, :]


def diagonalize_gauge(v: np.ndarray, u_prev: np.ndarray | None = None):
    """Unitary U and ascending real q with i exp(diag q) = U V U*.

    Column phases of the eigenframe: largest-modulus entry made real
    positive (fresh), or overlap with the previous frame maximized
    (continuation).
    """
    v = lie_core.as_matrix(v)
    m = -1j * v
    if lie_core.subspace_defect(m, "hermitian") > 1e-10:
        raise ValueError("input is not skew-Hermitian")
    w, vecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    if w[0] <= 0:
        raise SpectrumConeError("spectrum left the positive imaginary cone")
    if len(w) > 1 and np.min(np.diff(w)) < EIGEN_GAP_TOL:
        raise EigenvalueCollisionError(f"eigenvalue gap below {EIGEN_GAP_TOL:.1e}")
    if u_prev is None:
        for j in range(vecs.shape[1]):
            idx = int(np.argmax(np.abs(vecs[:, j])))
            ph = vecs[idx, j] / abs(vecs[idx, j])
            vecs[:, j] = vecs[:, j] * np.conj(ph)
    else:
        prev = u_prev.conj().T
        for j in range(vecs.shape[1]):
            o = np.vdot(prev[:, j], vecs[:, j])
            if abs(o) < 0.2:
                raise EigenvalueCollisionError("eigenframe continuation lost track")
            vecs[:, j] = vecs[:, j] * (np.conj(o) / abs(o))
    return np.log(w), vecs.conj().T


def tau_functions(spec: SolitonSpec, v: np.ndarray) -> np.ndarray:
    """tau_j = det(1 + e^{ij Theta/2} V e^{ij Theta/2}), j = 0..n."""
    nsol = spec.soliton_count
    out = np.empty(spec.n + 1, dtype=complex)
    for j in range(spec.n + 1):
        ph = np.exp(0.5j * j * spec.theta)
        out[j] = np.linalg.det(np.eye(nsol) + (ph[:, None] * v) * ph[None, :])
    return out


def align_branch(phi: complex, ref: complex, beta: float) -> complex:
    """Shift phi by multiples of 2 pi / beta to the branch nearest ref."""
    period = 2.0 * np.pi / beta
    return phi + period * np.round(np.real(ref - phi) / period)


def fields_from_tau(tau: np.ndarray, beta: float, ref: np.ndarray | None = None) -> np.ndarray:
    """phi_j = Log(tau_j / tau_{j+1}) / (i beta), branch-aligned to ref."""
    nf = len(tau)
    scale = np.abs(tau).max()
    if np.abs(tau).min() < 1e-12 * max(scale, 1.0):
        raise TauZeroError("tau function vanished", where=int(np.argmin(np.abs(tau))))
    out = np.empty(nf, dtype=complex)
    for j in range(nf):
        out[j] = np.log(tau[j] / tau[(j + 1) % nf]) / (1j * beta)
        if ref is not None:
            out[j] = align_branch(out[j], ref[j], beta)
    return out


@dataclass
class TodaFrame:
    x_plus: float
    x_minus: float
    v: np.ndarray
    q: np.ndarray
    u: np.ndarray
    g_plus: np.ndarray
    g_minus: np.ndarray
    tau: np.ndarray
    phi: np.ndarray


def rs_frame(spec: SolitonSpec, x_plus: float, x_minus: float,
             u_prev: np.ndarray | None = None,
             phi_ref: np.ndarray | None = None,
             frame_tol: float = 1e-10) -> TodaFrame:
    """All derived frame data at a light-cone point."""
    v = evolve_v(spec, x_plus, x_minus)
    q, u = diagonalize_gauge(v, u_prev)
    if np.linalg.norm(1j * np.diag(np.exp(q)) - u @ v @ u.conj().T) > frame_tol * max(
        1.0, float(np.abs(np.exp(q)).max())
    ):
        raise RuntimeError("frame reconstruction defect exceeded tolerance")
    g_plus = u @ np.diag(lambda_values(spec, "+").astype(complex)) @ u.conj().T
    g_minus = u @ np.diag(lambda_values(spec, "-").astype(complex)) @ u.conj().T
    tau = tau_functions(spec, v)
    phi = fields_from_tau(tau, spec.beta, ref=phi_ref)
    return TodaFrame(x_plus, x_minus, v, q, u, g_plus, g_minus, tau, phi)


def _stencil_frames(spec, x_plus, x_minus, direction, h):
    """Frames at offsets [-2h..2h] along one light-cone direction, gauge
    continued outward from the center."""

    def at(offset, u_prev):
        if direction == "+":
            return rs_frame(spec, x_plus + offset, x_minus, u_prev=u_prev)
        return rs_frame(spec, x_plus, x_minus + offset, u_prev=u_prev)

    center = at(0.0, None)
    plus1 = at(h, center.u)
    plus2 = at(2 * h, plus1.u)
    minus1 = at(-h, center.u)
    minus2 = at(-2 * h, minus1.u)
    return [minus2, minus1, center, plus1, plus2]


def rs_residual(spec: SolitonSpec, x_plus: float, x_minus: float,
                direction: str = "+", fd_step: float = 1e-4) -> dict:
    """Residuals of the spin RS equations along one light-cone direction.

    Fourth-order finite differences of the gauge-continued frames.  Two
    variants of the g-equation are reported to adjudicate the diagonal
    coefficient: the commutator (matrix) form dg = [g, R(q) g], and the
    variant with the diagonal of the commutator halved.
    """
    if direction not in ("+", "-"):
        raise ValueError("direction must be '+' or '-'")
    frames = _stencil_frames(spec, x_plus, x_minus, direction, fd_step)
    gs = [f.g_plus if direction == "+" else f.g_minus for f in frames]
    qs = [f.q for f in frames]

    def deriv4(samples):
        return (samples[0] - 8.0 * samples[1] + 8.0 * samples[3] - samples[4]) / (12.0 * fd_step)

    center = frames[2]
    gc = gs[2]
    dq = deriv4(qs)
    dg = deriv4(gs)
    resid_q = float(np.max(np.abs(dq - np.real(np.diag(gc)))))
    w = rmatrix.r_hyp_apply(center.q, gc)
    comm = gc @ w - w @ gc
    resid_matrix = float(np.max(np.abs(dg - comm)))
    half = comm - 0.5 * np.diag(np.diag(comm))
    resid_half = float(np.max(np.abs(dg - half)))
    return {
        "q": resid_q,
        "matrix_form": resid_matrix,
        "half_diagonal": resid_half,
        "combined": max(resid_q, resid_matrix),
    }


def pde_residual(spec: SolitonSpec, xp_values, xm_values, fd_step: float = 1e-3) -> np.ndarray:
    """Field-equation residual per field and grid node.

    The mixed light-cone derivative uses a centered second-order stencil of
    width ``fd_step``; field branches on the stencil are aligned to the
    node value.  The exponential nonlinearity is evaluated exactly through
    tau ratios.
    """
    xp_values = np.atleast_1d(np.asarray(xp_values, dtype=float))
    xm_values = np.atleast_1d(np.asarray(xm_values, dtype=float))
    nf = spec.n + 1
    out = np.empty((len(xp_values), len(xm_values), nf))
    h = fd_step
    mass2 = spec.m**2
    for a, xp in enumerate(xp_values):
        for b, xm in enumerate(xm_values):
            tau_c = tau_functions(spec, evolve_v(spec, xp, xm))
            try:
                phi_c = fields_from_tau(tau_c, spec.beta)
            except TauZeroError as err:
                raise TauZeroError(
                    f"tau function {err.where} vanished at x_plus={xp:.6g}, x_minus={xm:.6g}",
                    where=(err.where, xp, xm),
                ) from err
            corners = {}
            for sp in (-1, 1):
                for sm in (-1, 1):
                    tau = tau_functions(spec, evolve_v(spec, xp + sp * h, xm + sm * h))
                    corners[(sp, sm)] = fields_from_tau(tau, spec.beta, ref=phi_c)
            mixed = (corners[(1, 1)] - corners[(1, -1)] - corners[(-1, 1)] + corners[(-1, -1)]) / (4.0 * h * h)
            for j in range(nf):
                jm, jp, jpp = (j - 1) % nf, (j + 1) % nf, (j + 2) % nf
                ratio_fwd = tau_c[j] * tau_c[jpp] / tau_c[jp] ** 2
                ratio_bwd = tau_c[jm] * tau_c[jp] / tau_c[j] ** 2
                nonlinear = mass2 / (2j * spec.beta) * (ratio_fwd - ratio_bwd)
                out[a, b, j] = abs(mixed[j] + nonlinear)
    return out


def field_grid(spec: SolitonSpec, xp_values, xm_values):
    """tau and branch-continued phi over a rectangular grid.

    Continuation is row-major from the grid origin: along the first row in
    x_minus, then down each column in x_plus, which makes the output
    deterministic.
    """
    xp_values = np.atleast_1d(np.asarray(xp_values, dtype=float))
    xm_values = np.atleast_1d(np.asarray(xm_values, dtype=float))
    nf = spec.n + 1
    tau = np.empty((len(xp_values), len(xm_values), nf), dtype=complex)
    phi = np.empty((len(xp_values), len(xm_values), nf), dtype=complex)
    for a, xp in enumerate(xp_values):
        for b, xm in enumerate(xm_values):
            tau[a, b] = tau_functions(spec, evolve_v(spec, xp, xm))
            if a == 0 and b == 0:
                ref = None
            elif b == 0:
                ref = phi[a - 1, 0]
            else:
                ref = phi[a, b - 1]
            phi[a, b] = fields_from_tau(tau[a, b], spec.beta, ref=ref)
    return tau, phi


def one_soliton_spec(n: int = 1, m: float = 1.0, beta: float = 1.0,
                     eta: float = 0.0, amplitude: float = 1.0,
                     mode: int = 1) -> SolitonSpec:
    """Single-soliton data: 1x1 V0 = i * amplitude, theta = 2 pi mode/(n+1)."""
    theta = 2.0 * np.pi * mode / (n + 1)
    return SolitonSpec(
        n=n, m=m, beta=beta,
        theta=np.array([theta]),
        eta=np.array([eta]),
        v0=np.array([[1j * amplitude]]),
    ).validate()


def random_spec(nsol: int, n: int = 2, m: float = 1.0, beta: float = 1.0,
                seed: int = 0) -> SolitonSpec:
    """Generic soliton data: lattice thetas, random rapidities, random V0
    with spectrum in the positive imaginary cone."""
    rng = np.random.default_rng(seed)
    modes = rng.integers(1, n + 1, size=nsol)
    theta = 2.0 * np.pi * modes / (n + 1)
    eta = rng.normal(scale=0.4, size=nsol)
    a = rng.normal(size=(nsol, nsol)) + 1j * rng.normal(size=(nsol, nsol))
    v0 = 1j * (a @ a.conj().T + 0.5 * np.eye(nsol))
    return SolitonSpec(n=n, m=m, beta=beta, theta=theta, eta=eta, v0=v0).validate()
