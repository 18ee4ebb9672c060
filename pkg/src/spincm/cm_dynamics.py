"""Spin Calogero-Moser flows on the trigonometric phase space.

State: positions q (real, kept in the ordered chamber q_1 > ... > q_N with
all gaps inside (0, 2 pi) at initialization), momenta p (real), and a spin
matrix that is skew-Hermitian in the compact form or real skew-symmetric in
the normal form.

The flow integrated here is the restriction of the Hamiltonian

    H = sum p_i^2 / 2
        + sum_{i != j} (1 / sin^2((q_i - q_j)/2) - 1/3) |spin_ij|^2 / 8

to the zero level of the momentum map J = -diag(spin):

    dq_i = p_i
    dp_i = sum_{k != i} cot((q_i - q_k)/2) / sin^2((q_i - q_k)/2)
           * |spin_ik|^2 / 4
    dspin = [spin, A],   A = -spin_ij / sin^2((q_i - q_j)/2) / 4  (off-diag)

The integrator only enforces that |sin((q_i - q_j)/2)| stays above a
collision threshold; it aborts with CollisionError otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lie_core
from .errors import CollisionError, GaugeFixError, StepUnderflowError

FORMS = ("compact", "normal")
_FORM_TAG = {"compact": "skew_hermitian", "normal": "skew_symmetric_real"}

COLLISION_THRESHOLD = 1e-6


def spin_tag(form: str) -> str:
    if form not in FORMS:
        raise ValueError(f"unknown form {form!r}")
    return _FORM_TAG[form]


@dataclass
class CMState:
    form: str
    q: np.ndarray
    p: np.ndarray
    spin: np.ndarray

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float).copy()
        self.p = np.asarray(self.p, dtype=float).copy()
        self.spin = lie_core.as_matrix(self.spin).copy()
        n = len(self.q)
        if self.p.shape != (n,) or self.spin.shape != (n, n):
            raise ValueError("inconsistent state dimensions")

    @property
    def n(self) -> int:
        return len(self.q)

    def validate(self, membership_tol: float = 1e-12, ordered_chamber: bool = True):
        """Initialization-time checks: chamber, collisions, spin subspace."""
        if ordered_chamber:
            if np.any(np.diff(self.q) >= 0):
                raise ValueError("q must be strictly decreasing")
            if self.q[0] - self.q[-1] >= 2.0 * np.pi:
                raise ValueError("all gaps q_i - q_j must lie in (0, 2 pi)")
        if min_gap(self.q) <= COLLISION_THRESHOLD:
            raise CollisionError("initial coordinates too close", time=0.0, gap=min_gap(self.q))
        if not lie_core.membership(self.spin, spin_tag(self.form), membership_tol):
            raise ValueError(f"spin matrix is not in the {self.form} subspace")
        return self

    def copy(self) -> "CMState":
        return CMState(self.form, self.q, self.p, self.spin)


def min_gap(q) -> float:
    """Smallest |sin((q_i - q_j)/2)| over pairs i != j."""
    q = np.asarray(q, dtype=float)
    dq = q[:, None] - q[None, :]
    s = np.abs(np.sin(0.5 * dq))
    n = len(q)
    return float(s[~np.eye(n, dtype=bool)].min())


def _inv_sin2(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    dq = q[:, None] - q[None, :]
    n = len(q)
    off = ~np.eye(n, dtype=bool)
    s = np.sin(0.5 * dq)
    if np.any(np.abs(s[off]) <= COLLISION_THRESHOLD):
        raise CollisionError("coordinate collision", gap=min_gap(q))
    out = np.zeros((n, n))
    out[off] = 1.0 / s[off] ** 2
    return out


def hamiltonian(state: CMState) -> float:
    inv2 = _inv_sin2(state.q)
    n = state.n
    off = ~np.eye(n, dtype=bool)
    coupling = (inv2[off] - 1.0 / 3.0) * np.abs(state.spin[off]) ** 2
    return float(0.5 * np.dot(state.p, state.p) + 0.125 * coupling.sum())


def momentum(state: CMState) -> np.ndarray:
    """Torus momentum map: minus the diagonal of the spin matrix."""
    return -np.diag(state.spin)


def vector_field(state: CMState, momentum_tol: float = 1e-10):
    """Time derivatives (dq, dp, dspin) of the zero-momentum flow."""
    if np.linalg.norm(np.diag(state.spin)) > momentum_tol:
        raise ValueError("vector_field is defined on the momentum-zero set")
    q, p, spin = state.q, state.p, state.spin
    n = state.n
    inv2 = _inv_sin2(q)
    dq = q[:, None] - q[None, :]
    cot = np.zeros((n, n))
    off = ~np.eye(n, dtype=bool)
    cot[off] = np.cos(0.5 * dq[off]) / np.sin(0.5 * dq[off])
    pdot = 0.25 * (cot * inv2 * np.abs(spin) ** 2).sum(axis=1)
    a = -0.25 * inv2 * spin
    spindot = spin @ a - a @ spin
    return p.copy(), pdot, spindot


@dataclass
class Trajectory:
    times: np.ndarray
    states: list
    energy: np.ndarray
    momentum_norm: np.ndarray
    membership_defect: np.ndarray
    extras: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.times)


def _pack(state: CMState) -> np.ndarray:
    return np.concatenate([state.q, state.p, state.spin.real.ravel(), state.spin.imag.ravel()])


def _unpack(form: str, n: int, vec: np.ndarray) -> CMState:
    q = vec[:n]
    p = vec[n : 2 * n]
    re = vec[2 * n : 2 * n + n * n].reshape(n, n)
    im = vec[2 * n + n * n :].reshape(n, n)
    return CMState(form, q, p, re + 1j * im)


def _rhs(form: str, n: int, vec: np.ndarray) -> np.ndarray:
    st = _unpack(form, n, vec)
    dq, dp, dspin = vector_field(st)
    return np.concatenate([dq, dp, dspin.real.ravel(), dspin.imag.ravel()])


def integrate(
    state: CMState,
    t_final: float,
    dt: float,
    scheme: str = "rk4",
    record_every: int = 1,
    collision_threshold: float = COLLISION_THRESHOLD,
) -> Trajectory:
    """Integrate the zero-momentum flow, recording conservation diagnostics.

    Diagnostics per recorded sample: energy, momentum norm, and the
    Frobenius defect of the spin matrix from its form subspace.  Aborts
    cleanly (CollisionError with time and gap) when particles approach a
    kernel pole.
    """
    state = state.copy()
    state.validate()
    n = state.n
    form = state.form
    tag = spin_tag(form)

    if scheme not in ("rk4", "dopri"):
        raise ValueError(f"unknown scheme {scheme!r}")

    n_steps = int(np.ceil(t_final / dt - 1e-12))
    times = [0.0]
    states = [state.copy()]

    def record(st):
        states.append(st)

    if scheme == "rk4":
        vec = _pack(state)
        t = 0.0
        for k in range(n_steps):
            h = min(dt, t_final - t)
            try:
                k1 = _rhs(form, n, vec)
                k2 = _rhs(form, n, vec + 0.5 * h * k1)
                k3 = _rhs(form, n, vec + 0.5 * h * k2)
                k4 = _rhs(form, n, vec + h * k3)
            except CollisionError as err:
                raise CollisionError(
                    f"collision approach at t={t:.6f} (min gap {err.gap:.3e})",
                    time=t,
                    gap=err.gap,
                ) from err
            vec = vec + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += h
            gap = min_gap(vec[:n])
            if gap <= collision_threshold:
                raise CollisionError(
                    f"collision approach at t={t:.6f} (min |sin| = {gap:.3e})",
                    time=t,
                    gap=gap,
                )
            if (k + 1) % record_every == 0 or k == n_steps - 1:
                times.append(t)
                record(_unpack(form, n, vec))
    else:
        from scipy.integrate import solve_ivp

        t_eval = np.linspace(0.0, t_final, n_steps // max(record_every, 1) + 1)
        sol = solve_ivp(
            lambda _t, y: _rhs(form, n, y),
            (0.0, t_final),
            _pack(state),
            method="RK45",
            t_eval=t_eval,
            rtol=1e-10,
            atol=1e-12,
        )
        if not sol.success:
            raise StepUnderflowError(f"adaptive integration failed: {sol.message}")
        times = list(sol.t)
        states = [_unpack(form, n, sol.y[:, j]) for j in range(sol.y.shape[1])]
        for st in states:
            gap = min_gap(st.q)
            if gap <= collision_threshold:
                raise CollisionError("collision approach along adaptive flow", gap=gap)

    energy = np.array([hamiltonian(st) for st in states])
    mom = np.array([np.linalg.norm(momentum(st)) for st in states])
    defect = np.array([lie_core.subspace_defect(st.spin, tag) for st in states])
    return Trajectory(np.asarray(times), states, energy, mom, defect)


def gauge_fix(spin: np.ndarray, tol: float = 1e-14):
    """Torus gauge fixing: rotate the spin so its superdiagonal is positive.

    Returns (h, spin_red) with h a unitary diagonal matrix, h[0, 0] = 1,
    and spin_red = h* spin h having real positive entries at (i, i+1).
    Requires every superdiagonal entry to be nonzero.
    """
    spin = lie_core.as_matrix(spin)
    n = spin.shape[0]
    d = np.ones(n, dtype=complex)
    for i in range(n - 1):
        a = spin[i, i + 1]
        if abs(a) <= tol:
            raise GaugeFixError(f"superdiagonal entry ({i}, {i + 1}) vanishes")
        d[i + 1] = d[i] * np.conj(a / abs(a))
    h = np.diag(d)
    spin_red = h.conj().T @ spin @ h
    return h, spin_red


def random_state(
    n: int,
    form: str,
    seed: int,
    spin_scale: float = 1.0,
    momentum_zero: bool = True,
    spread: float = 0.8,
) -> CMState:
    """Seeded random state in the ordered chamber; generic superdiagonal."""
    rng = np.random.default_rng(seed)
    base = np.linspace(0.9 * np.pi, -0.9 * np.pi, n)
    q = base + spread * (rng.uniform(-0.3, 0.3, size=n))
    q = np.sort(q)[::-1]
    p = rng.normal(size=n)
    spin = lie_core.proj(
        spin_scale * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))),
        spin_tag(form),
    )
    if momentum_zero:
        spin = spin - np.diag(np.diag(spin))
    return CMState(form, q, p, spin).validate()
