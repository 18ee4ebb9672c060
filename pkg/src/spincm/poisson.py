"""Numeric Poisson brackets for the three phase spaces of the lab.

Spaces
------
``cm_stable``     spin phase space (q, p, spin): q, p real diagonal, spin in
                  u(N) (compact form) or in the real skew-symmetrics
                  (normal form).
``cm_ambient``    the complex ambient of the above: q, p complex diagonal,
                  spin in gl(N, C).
``groupoid_full`` points (u, g, v): u, v complex diagonal, g invertible.
``rs_stable``     points (u, g): u complex diagonal, g Hermitian.

Convention table (frozen)
-------------------------
All conventions below were fixed once by requiring the bracket flows to
reproduce the explicit component equations of motion implemented in
``cm_dynamics.vector_field`` and ``rs_dynamics.vector_field``, and are not
independently adjustable:

* flow convention: dF/dt = {F, H};
* pairing: (x, y) = 2 Re tr(x y) everywhere;
* cm spaces:  {F, G} = -2 [ (d2F, d1G) - (d1F, d2G) + (spin, [dF, dG]) ];
* groupoid:   {F, G} = (d1F, DG) + (d2F, D'G) - (d1G, DF) - (d2G, D'F)
                       + (R(u) DF, DG) - (R(v) D'F, D'G)
  (the Cartan here is abelian, so the u- and v-commutator terms of the
  general trivial-groupoid pattern vanish identically and are omitted);
* rs stable:  {F, G} = 2 (d1F, DG) - 2 (d1G, DF) + 2 (R(u) DF, DG).

Anchors implied by these choices: {q_i, p_j} = +delta_ij on cm_stable, the
flow of the interaction Hamiltonian is the spin Calogero-Moser vector
field, and the flow of 2 Re tr(g) is the Ruijsenaars-Schneider vector
field.

Gradient conventions
--------------------
* cm_stable: gradients are taken within (diag_real, diag_real, spin
  subspace); cm_ambient within (diag, diag, gl).
* groupoid: D and D' are the left/right group gradients,
  (DF, X) = d/dt F(u, e^{tX} g, v) and (D'F, X) = d/dt F(u, g e^{tX}, v).
* rs stable: the locus sits diagonally in (u, v), so d1 is HALF the
  u-gradient of the restricted function; D is the symmetrized group
  gradient, (DF, X) = dF[(X g + g X*)/2].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import lie_core, rmatrix
from .cm_dynamics import spin_tag

SPACES = ("cm_stable", "cm_ambient", "groupoid_full", "rs_stable")

DEFAULT_FD_STEP = 1e-5
OUTER_STEP_ANALYTIC = 5e-6  # nested-bracket FD when inner gradients are analytic
OUTER_STEP_FD = 2e-4        # nested-bracket FD when inner gradients are themselves FD


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------


@dataclass
class AmbientCMPoint:
    q: np.ndarray  # complex diagonal entries
    p: np.ndarray
    spin: np.ndarray

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=complex).copy()
        self.p = np.asarray(self.p, dtype=complex).copy()
        self.spin = lie_core.as_matrix(self.spin).copy()


@dataclass
class GroupoidPoint:
    u: np.ndarray  # complex diagonal entries
    g: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=complex).copy()
        self.v = np.asarray(self.v, dtype=complex).copy()
        self.g = lie_core.as_matrix(self.g).copy()


@dataclass
class RSPoint:
    u: np.ndarray  # complex diagonal entries
    g: np.ndarray  # Hermitian

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=complex).copy()
        self.g = lie_core.as_matrix(self.g).copy()


def sigma_involution(x: GroupoidPoint) -> GroupoidPoint:
    """(u, g, v) -> (conj v, g*, conj u); a bracket-preserving involution."""
    return GroupoidPoint(np.conj(x.v), x.g.conj().T, np.conj(x.u))


def kappa_involution(x: AmbientCMPoint) -> AmbientCMPoint:
    """(q, p, spin) -> (conj q, conj p, -spin*); bracket-preserving."""
    return AmbientCMPoint(np.conj(x.q), np.conj(x.p), -x.spin.conj().T)


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------


@dataclass
class Observable:
    """Real-valued function on one of the phase spaces.

    ``grad``, when supplied, must return the space's gradient tuple:
    cm spaces (d1, d2, dspin); groupoid (d1, d2, D, Dp); rs (d1, D) with
    the rs halving convention already applied to d1.  ``space``, when set,
    is checked against the space a bracket is evaluated on.
    """

    fn: Callable
    grad: Callable | None = None
    fd_step: float = DEFAULT_FD_STEP
    name: str = ""
    space: str | None = None

    def __call__(self, x) -> float:
        return float(self.fn(x))


def _fd(fplus: float, fminus: float, h: float) -> float:
    return (fplus - fminus) / (2.0 * h)


# ------------------------- cm gradients ------------------------------------


def _cm_perturb(x, dq=None, dp=None, dspin=None, ambient=False):
    q = x.q + (dq if dq is not None else 0.0)
    p = x.p + (dp if dp is not None else 0.0)
    spin = x.spin + (dspin if dspin is not None else 0.0)
    if ambient:
        return AmbientCMPoint(q, p, spin)
    return type(x)(x.form, np.real(q), np.real(p), spin)


def cm_gradients(F: Observable, x, ambient: bool = False):
    """Gradient triple (d1, d2, dspin) of F at a cm point."""
    if F.grad is not None:
        return F.grad(x)
    h = F.fd_step
    n = len(x.q)

    def ell_q(direction):
        d = np.diag(direction)
        return _fd(F(_cm_perturb(x, dq=h * d, ambient=ambient)),
                   F(_cm_perturb(x, dq=-h * d, ambient=ambient)), h)

    def ell_p(direction):
        d = np.diag(direction)
        return _fd(F(_cm_perturb(x, dp=h * d, ambient=ambient)),
                   F(_cm_perturb(x, dp=-h * d, ambient=ambient)), h)

    def ell_s(direction):
        return _fd(F(_cm_perturb(x, dspin=h * direction, ambient=ambient)),
                   F(_cm_perturb(x, dspin=-h * direction, ambient=ambient)), h)

    if ambient:
        d1 = lie_core.representer_diag(ell_q, n)
        d2 = lie_core.representer_diag(ell_p, n)
        dspin = lie_core.representer_gl(ell_s, n)
    else:
        hbasis = lie_core.real_basis(n, "diag_real")
        sbasis = lie_core.real_basis(n, spin_tag(x.form))
        d1 = lie_core.representer_subspace(ell_q, hbasis)
        d2 = lie_core.representer_subspace(ell_p, hbasis)
        dspin = lie_core.representer_subspace(ell_s, sbasis)
    return d1, d2, dspin


def gradients_cm(F: Observable, x):
    """Public spelling of the stable-space gradient triple."""
    return cm_gradients(F, x, ambient=isinstance(x, AmbientCMPoint))


# ------------------------- groupoid gradients ------------------------------


def groupoid_gradients(F: Observable, x: GroupoidPoint):
    if F.grad is not None:
        return F.grad(x)
    h = F.fd_step
    n = len(x.u)

    def ell_u(lam):
        d = np.diag(lam)
        return _fd(F(GroupoidPoint(x.u + h * d, x.g, x.v)),
                   F(GroupoidPoint(x.u - h * d, x.g, x.v)), h)

    def ell_v(lam):
        d = np.diag(lam)
        return _fd(F(GroupoidPoint(x.u, x.g, x.v + h * d)),
                   F(GroupoidPoint(x.u, x.g, x.v - h * d)), h)

    # left/right multiplicative perturbations; the quadratic difference
    # between e^{tX} g and (1 + tX) g is even in t and drops out of the
    # central difference
    def ell_left(X):
        return _fd(F(GroupoidPoint(x.u, x.g + h * (X @ x.g), x.v)),
                   F(GroupoidPoint(x.u, x.g - h * (X @ x.g), x.v)), h)

    def ell_right(X):
        return _fd(F(GroupoidPoint(x.u, x.g + h * (x.g @ X), x.v)),
                   F(GroupoidPoint(x.u, x.g - h * (x.g @ X), x.v)), h)

    d1 = lie_core.representer_diag(ell_u, n)
    d2 = lie_core.representer_diag(ell_v, n)
    dleft = lie_core.representer_gl(ell_left, n)
    dright = lie_core.representer_gl(ell_right, n)
    return d1, d2, dleft, dright


# ------------------------- rs gradients -------------------------------------


def rs_tangent(g: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Hermitian tangent (X g + g X*)/2 generated by X in gl(N, C)."""
    return 0.5 * (X @ g + g @ X.conj().T)


def rs_gradients(F: Observable, x: RSPoint):
    if F.grad is not None:
        return F.grad(x)
    h = F.fd_step
    n = len(x.u)

    def ell_u(lam):
        d = np.diag(lam)
        return _fd(F(RSPoint(x.u + h * d, x.g)), F(RSPoint(x.u - h * d, x.g)), h)

    def ell_g(X):
        t = rs_tangent(x.g, X)
        return _fd(F(RSPoint(x.u, x.g + h * t)), F(RSPoint(x.u, x.g - h * t)), h)

    d1 = 0.5 * lie_core.representer_diag(ell_u, n)
    dsym = lie_core.representer_gl(ell_g, n)
    return d1, dsym


# ---------------------------------------------------------------------------
# brackets
# ---------------------------------------------------------------------------

CM_SCALE = -2.0


def _cm_bracket(x, gf, gg) -> float:
    d1f, d2f, dsf = gf
    d1g, d2g, dsg = gg
    val = lie_core.pair(d2f, d1g) - lie_core.pair(d1f, d2g)
    val += lie_core.pair(x.spin, lie_core.commutator(dsf, dsg))
    return CM_SCALE * val


def _groupoid_bracket(x: GroupoidPoint, gf, gg) -> float:
    d1f, d2f, Df, Dpf = gf
    d1g, d2g, Dg, Dpg = gg
    val = lie_core.pair(d1f, Dg) + lie_core.pair(d2f, Dpg)
    val -= lie_core.pair(d1g, Df) + lie_core.pair(d2g, Dpf)
    val += lie_core.pair(rmatrix.r_hyp_apply(x.u, Df), Dg)
    val -= lie_core.pair(rmatrix.r_hyp_apply(x.v, Dpf), Dpg)
    return val


def _rs_bracket(x: RSPoint, gf, gg) -> float:
    d1f, Df = gf
    d1g, Dg = gg
    val = 2.0 * (lie_core.pair(d1f, Dg) - lie_core.pair(d1g, Df))
    val += 2.0 * lie_core.pair(rmatrix.r_hyp_apply(x.u, Df), Dg)
    return val


def bracket(space: str, F: Observable, G: Observable, x) -> float:
    """Poisson bracket {F, G}(x) on the named space."""
    for obs in (F, G):
        if obs.space is not None and obs.space != space:
            raise ValueError(f"observable {obs.name!r} declared on {obs.space!r}, "
                             f"bracket evaluated on {space!r}")
    if space == "cm_stable":
        return _cm_bracket(x, cm_gradients(F, x), cm_gradients(G, x))
    if space == "cm_ambient":
        return _cm_bracket(x, cm_gradients(F, x, ambient=True), cm_gradients(G, x, ambient=True))
    if space == "groupoid_full":
        return _groupoid_bracket(x, groupoid_gradients(F, x), groupoid_gradients(G, x))
    if space == "rs_stable":
        return _rs_bracket(x, rs_gradients(F, x), rs_gradients(G, x))
    raise ValueError(f"unknown space {space!r}")


def jacobi_residual(space: str, F: Observable, G: Observable, H: Observable, x,
                    outer_step: float | None = None) -> float:
    """|{F,{G,H}} + {G,{H,F}} + {H,{F,G}}| with finite-difference outer brackets.

    The default step for differentiating the inner brackets depends on their
    noise floor: tighter when all three observables carry analytic gradients,
    wider when the inner brackets are built from FD gradients themselves.
    """
    if outer_step is None:
        analytic = all(o.grad is not None for o in (F, G, H))
        outer_step = OUTER_STEP_ANALYTIC if analytic else OUTER_STEP_FD

    def nested(a, b):
        return Observable(lambda y: bracket(space, a, b, y), fd_step=outer_step)

    total = bracket(space, F, nested(G, H), x)
    total += bracket(space, G, nested(H, F), x)
    total += bracket(space, H, nested(F, G), x)
    return abs(total)


def poisson_map_residual(space_src: str, space_dst: str, phi, F: Observable,
                         G: Observable, x, fd_step: float = DEFAULT_FD_STEP) -> float:
    """|{F o phi, G o phi}_src(x) - {F, G}_dst(phi(x))|."""
    Fphi = Observable(lambda y: F(phi(y)), fd_step=fd_step)
    Gphi = Observable(lambda y: G(phi(y)), fd_step=fd_step)
    lhs = bracket(space_src, Fphi, Gphi, x)
    rhs = bracket(space_dst, F, G, phi(x))
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# flow residuals
# ---------------------------------------------------------------------------


def _cm_probes(n: int, form: str):
    probes = []
    for i in range(n):
        e = np.zeros((n, n), dtype=complex)
        e[i, i] = 0.5
        probes.append((
            Observable(lambda s, i=i: s.q[i], grad=lambda s, e=e: (e, np.zeros_like(e), np.zeros_like(e))),
            lambda tangent, i=i: tangent[0][i],
        ))
        probes.append((
            Observable(lambda s, i=i: s.p[i], grad=lambda s, e=e: (np.zeros_like(e), e, np.zeros_like(e))),
            lambda tangent, i=i: tangent[1][i],
        ))
    for E in lie_core.real_basis(n, spin_tag(form)):
        probes.append((
            Observable(lambda s, E=E: lie_core.pair(s.spin, E),
                       grad=lambda s, E=E: (np.zeros_like(E), np.zeros_like(E), E)),
            lambda tangent, E=E: lie_core.pair(tangent[2], E),
        ))
    return probes


def _rs_probes(n: int):
    probes = []
    z = np.zeros((n, n), dtype=complex)
    for k in range(n):
        er = np.zeros((n, n), dtype=complex)
        er[k, k] = 0.25
        ei = np.zeros((n, n), dtype=complex)
        ei[k, k] = -0.25j
        probes.append((
            Observable(lambda s, k=k: np.real(s.u[k]), grad=lambda s, er=er: (er, z)),
            lambda tangent, k=k: float(np.real(tangent[0][k])),
        ))
        probes.append((
            Observable(lambda s, k=k: np.imag(s.u[k]), grad=lambda s, ei=ei: (ei, z)),
            lambda tangent, k=k: float(np.imag(tangent[0][k])),
        ))
    for T in lie_core.real_basis(n, "hermitian"):
        probes.append((
            Observable(lambda s, T=T: lie_core.pair(s.g, T),
                       grad=lambda s, T=T: (z, s.g @ T)),
            lambda tangent, T=T: lie_core.pair(tangent[1], T),
        ))
    return probes


def hamiltonian_flow_residual(space: str, H: Observable, vf, x) -> float:
    """Max over coordinate probes F of |{F, H}(x) - dF(x)[vf(x)]|.

    ``vf`` maps the state to a tangent: (dq, dp, dspin) on cm_stable,
    (du, dg) on rs_stable.
    """
    tangent = vf(x)
    if space == "cm_stable":
        probes = _cm_probes(len(x.q), x.form)
    elif space == "rs_stable":
        probes = _rs_probes(len(x.u))
    else:
        raise ValueError(f"flow residual not implemented for space {space!r}")
    worst = 0.0
    for obs, dfn in probes:
        worst = max(worst, abs(bracket(space, obs, H, x) - dfn(tangent)))
    return worst


# ---------------------------------------------------------------------------
# named observables with analytic gradients
# ---------------------------------------------------------------------------


def cm_energy_observable() -> Observable:
    """The spin Calogero-Moser Hamiltonian with analytic stable gradients."""

    def fn(s):
        off = ~np.eye(len(s.q), dtype=bool)
        dq = s.q[:, None] - s.q[None, :]
        inv2 = np.zeros_like(dq)
        inv2[off] = 1.0 / np.sin(0.5 * dq[off]) ** 2
        coupling = (inv2[off] - 1.0 / 3.0) * np.abs(s.spin[off]) ** 2
        return 0.5 * np.dot(s.p, s.p) + 0.125 * coupling.sum()

    def grad(s):
        n = len(s.q)
        off = ~np.eye(n, dtype=bool)
        dq = s.q[:, None] - s.q[None, :]
        inv2 = np.zeros((n, n))
        cot = np.zeros((n, n))
        inv2[off] = 1.0 / np.sin(0.5 * dq[off]) ** 2
        cot[off] = np.cos(0.5 * dq[off]) / np.sin(0.5 * dq[off])
        d1 = np.diag((-0.125 * cot * inv2 * np.abs(s.spin) ** 2).sum(axis=1).astype(complex))
        d2 = np.diag(0.5 * s.p.astype(complex))
        kmat = np.zeros((n, n))
        kmat[off] = inv2[off] - 1.0 / 3.0
        dspin = -0.125 * kmat * s.spin
        return d1, d2, dspin

    return Observable(fn, grad=grad, name="cm_energy")


def rs_power_trace_observable(k: int) -> Observable:
    """Central observable 2 Re tr(g^k) / k with analytic rs gradients."""

    def fn(s):
        return 2.0 * np.real(np.trace(np.linalg.matrix_power(s.g, k))) / k

    def grad(s):
        n = len(s.u)
        return np.zeros((n, n), dtype=complex), np.linalg.matrix_power(s.g, k).astype(complex)

    return Observable(fn, grad=grad, name=f"rs_power_trace_{k}")


# ---------------------------------------------------------------------------
# seeded random observables (analytic gradients) for verification batches
# ---------------------------------------------------------------------------


def random_cm_observable(n: int, form: str, seed: int) -> Observable:
    rng = np.random.default_rng(seed)
    a = rng.normal(size=n)
    b = rng.normal(size=n)
    amix = rng.normal(size=(n, n)) * 0.5
    c = rng.normal(size=n) * 0.5
    tag = spin_tag(form)
    m1 = lie_core.proj(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)), tag)
    m2 = lie_core.proj(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)), tag) * 0.5

    def fn(s):
        return (a @ s.q + b @ s.p + s.q @ (amix @ s.p)
                + lie_core.pair(s.spin, m1)
                + (c @ s.q) * lie_core.pair(s.spin, m2))

    def grad(s):
        t2 = lie_core.pair(s.spin, m2)
        d1 = np.diag(0.5 * (a + amix @ s.p + t2 * c).astype(complex))
        d2 = np.diag(0.5 * (b + amix.T @ s.q).astype(complex))
        dspin = m1 + (c @ s.q) * m2
        return d1, d2, dspin

    return Observable(fn, grad=grad, name=f"cm_obs_{seed}")


def random_ambient_cm_observable(n: int, seed: int) -> Observable:
    rng = np.random.default_rng(seed)
    dq = np.diag(rng.normal(size=n) + 1j * rng.normal(size=n))
    dp = np.diag(rng.normal(size=n) + 1j * rng.normal(size=n))
    dq2 = np.diag(rng.normal(size=n) + 1j * rng.normal(size=n)) * 0.5
    m1 = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) * 0.7
    m2 = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) * 0.4

    def fn(s):
        qd, pd = np.diag(s.q), np.diag(s.p)
        return (lie_core.pair(dq, qd) + lie_core.pair(dp, pd)
                + lie_core.pair(s.spin, m1)
                + lie_core.pair(dq2, qd) * lie_core.pair(s.spin, m2))

    def grad(s):
        qd = np.diag(s.q)
        t1 = lie_core.pair(dq2, qd)
        t2 = lie_core.pair(s.spin, m2)
        d1 = dq + t2 * dq2
        d2 = dp.copy()
        dspin = m1 + t1 * m2
        return d1, d2, dspin

    return Observable(fn, grad=grad, name=f"cm_ambient_obs_{seed}")


def random_groupoid_observable(n: int, seed: int) -> Observable:
    rng = np.random.default_rng(seed)

    def cmat(scale):
        return scale * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))

    def cdiag(scale):
        return np.diag(scale * (rng.normal(size=n) + 1j * rng.normal(size=n)))

    A, B, C, C2 = cmat(0.25), cmat(0.08), cmat(0.15), cmat(0.15)
    D1, D2, D3, D4 = cdiag(0.4), cdiag(0.4), cdiag(0.15), cdiag(0.15)

    def tr2(m):
        return 2.0 * np.real(np.trace(m))

    def fn(x):
        ud, vd = np.diag(x.u), np.diag(x.v)
        return (tr2(A @ x.g) + tr2(B @ x.g @ x.g) + tr2(D1 @ ud) + tr2(D2 @ vd)
                + tr2(D3 @ ud) * tr2(C @ x.g) + tr2(D4 @ vd) * tr2(C2 @ x.g))

    def grad(x):
        g = x.g
        ud, vd = np.diag(x.u), np.diag(x.v)
        t3, t4 = tr2(D3 @ ud), tr2(D4 @ vd)
        d1 = D1 + tr2(C @ g) * D3
        d2 = D2 + tr2(C2 @ g) * D4
        dleft = g @ A + g @ g @ B + g @ B @ g + t3 * (g @ C) + t4 * (g @ C2)
        dright = A @ g + g @ B @ g + B @ g @ g + t3 * (C @ g) + t4 * (C2 @ g)
        return d1, d2, dleft, dright

    return Observable(fn, grad=grad, name=f"groupoid_obs_{seed}")


def random_rs_observable(n: int, seed: int) -> Observable:
    rng = np.random.default_rng(seed)
    A = 0.25 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    B = 0.15 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    C = 0.15 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    D1 = np.diag(0.4 * (rng.normal(size=n) + 1j * rng.normal(size=n)))
    D2 = np.diag(0.2 * (rng.normal(size=n) + 1j * rng.normal(size=n)))
    D3 = np.diag(0.15 * (rng.normal(size=n) + 1j * rng.normal(size=n)))

    def tr2(m):
        return 2.0 * np.real(np.trace(m))

    def fn(x):
        ud = np.diag(x.u)
        return (tr2(A @ x.g) + tr2(B @ x.g @ B @ x.g) + tr2(D1 @ ud)
                + tr2(D2 @ ud @ ud) + tr2(D3 @ ud) * tr2(C @ x.g))

    def grad(x):
        g = x.g
        ud = np.diag(x.u)
        grad_u = D1 + 2.0 * D2 @ ud + tr2(C @ g) * D3
        d1 = 0.5 * grad_u
        dsym = (0.5 * g @ (A + A.conj().T)
                + g @ B @ g @ B + g @ B.conj().T @ g @ B.conj().T
                + tr2(D3 @ ud) * 0.5 * g @ (C + C.conj().T))
        return d1, dsym

    return Observable(fn, grad=grad, name=f"rs_obs_{seed}")


# ---------------------------------------------------------------------------
# seeded random points
# ---------------------------------------------------------------------------


def random_groupoid_point(n: int, seed: int, stable: bool = False,
                          real_u: bool = False) -> GroupoidPoint:
    rng = np.random.default_rng(seed)
    # jitter kept below the spacing so coth((u_i - u_j)/2) stays tame
    u = np.arange(n) * 2.0 + rng.uniform(0.0, 0.8, size=n)
    u = u + (0.0 if real_u else 0.25j * rng.normal(size=n))
    g = 0.4 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    if stable:
        g = 0.5 * (g + g.conj().T)
        v = np.conj(u)
    else:
        v = np.arange(n) * 2.0 + rng.uniform(0.0, 0.8, size=n) + 0.25j * rng.normal(size=n)
    g = g + 1.5 * np.eye(n)  # keep det away from zero
    return GroupoidPoint(u, g, v)


def random_rs_point(n: int, seed: int, real_u: bool = True) -> RSPoint:
    rng = np.random.default_rng(seed)
    u = rng.uniform(0.4, 1.2, size=n) + np.arange(n) * 1.6
    if not real_u:
        u = u + 0.25j * rng.normal(size=n)
    g = 0.4 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    g = 0.5 * (g + g.conj().T) + 1.5 * np.eye(n)
    return RSPoint(u, g)


def random_ambient_cm_point(n: int, seed: int) -> AmbientCMPoint:
    rng = np.random.default_rng(seed)
    q = rng.uniform(0.4, 1.1, size=n) + np.arange(n) * 1.4 + 0.2j * rng.normal(size=n)
    p = rng.normal(size=n) + 1j * rng.normal(size=n)
    spin = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return AmbientCMPoint(q, p, spin)
