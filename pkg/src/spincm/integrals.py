"""Conserved quantities from the characteristic polynomial of the Lax matrix.

On the zero-momentum set the coefficient of w^(N-r) in det(Ltilde(z) - w)
is a polynomial in c(z) = cot(z/2)/2 of degree at most r (compact form) or
an even polynomial of degree at most 2 floor(r/2) (normal form):

    det(Ltilde(z) - w) = sum_{r,k} I[r,k] c(z)^k w^(N-r).

The coefficients I[r,k] are recovered by least squares over a pole-free
set of spectral samples.  Conventions: the determinant is taken literally,
so I[0,0] = (-1)^N; in the compact form I[r,k] is real for even k and
purely imaginary for odd k.

Two linear tail relations are provided:

* ``sum_rule_residual``: |sum_m (-1)^m I[r, 2m+1]| per r, the unweighted
  alternating sum over odd columns;
* ``limit_matching_residual``: |sum_k I[r,k] ((-i/2)^k - (i/2)^k)| per r,
  which expresses that the characteristic polynomial has equal limits along
  the two imaginary spectral directions, where c(z) -> -i/2 and +i/2.  The
  second is the relation that actually holds at generic states; the first
  coincides with it only when a single odd column is present (r <= 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lie_core, poisson, rmatrix
from .cm_dynamics import CMState, spin_tag

CONDITION_LIMIT = 1e10
RANK_SV_THRESHOLD = 1e-8


def default_z_samples(n: int) -> np.ndarray:
    """Imaginary-axis samples (well separated, pole-free) plus two generic ones."""
    ys = np.linspace(0.5, 3.0, n + 3)
    return np.concatenate([1j * ys, [0.37 + 0.61j, -1.3 + 0.45j]])


@dataclass
class IntegralsTable:
    form: str
    n: int
    values: dict  # (r, k) -> complex
    fit_residual: float
    condition: float
    z_samples: np.ndarray = field(default=None, repr=False)

    def real_value(self, r: int, k: int) -> float:
        """The real-valued form of I[r,k] (imaginary part for odd k, compact)."""
        v = self.values[(r, k)]
        if self.form == "compact" and k % 2 == 1:
            return float(np.imag(v))
        return float(np.real(v))


def _degrees(form: str, r: int) -> list[int]:
    if form == "compact":
        return list(range(r + 1))
    return [2 * k for k in range(r // 2 + 1)]


def extract(state: CMState, z_samples=None, momentum_tol: float = 1e-10) -> IntegralsTable:
    """Fit the characteristic-polynomial coefficients in powers of c(z)."""
    if np.linalg.norm(np.diag(state.spin)) > momentum_tol:
        raise ValueError("extraction requires a momentum-zero spin matrix")
    n = state.n
    if z_samples is None:
        z_samples = default_z_samples(n)
    z_samples = np.asarray(z_samples, dtype=complex)
    if len(z_samples) < n + 1:
        raise ValueError("need at least max degree + 1 spectral samples")

    cs = np.array([rmatrix.c_of_z(z) for z in z_samples])
    coeff_rows = np.empty((len(z_samples), n + 1), dtype=complex)
    for m, z in enumerate(z_samples):
        cp = np.poly(rmatrix.lax_cm_tilde(state.q, state.p, state.spin, z))
        coeff_rows[m] = (-1) ** n * cp

    values: dict = {}
    worst_resid = 0.0
    worst_cond = 0.0
    for r in range(n + 1):
        degs = _degrees(state.form, r)
        vand = np.column_stack([cs**k for k in degs])
        scale = np.abs(vand).max(axis=0)
        scale[scale == 0] = 1.0
        vs = vand / scale
        worst_cond = max(worst_cond, float(np.linalg.cond(vs)))
        sol, *_ = np.linalg.lstsq(vs, coeff_rows[:, r], rcond=None)
        sol = sol / scale
        resid = np.abs(vand @ sol - coeff_rows[:, r]).max()
        worst_resid = max(worst_resid, float(resid))
        for k in range(r + 1):
            values[(r, k)] = 0.0 + 0.0j
        for k, v in zip(degs, sol):
            values[(r, k)] = complex(v)
    if worst_cond > CONDITION_LIMIT:
        raise ValueError(f"ill-conditioned spectral sample set (cond {worst_cond:.2e})")
    return IntegralsTable(state.form, n, values, worst_resid, worst_cond, z_samples)


def sum_rule_residual(tbl: IntegralsTable) -> np.ndarray:
    """|sum_m (-1)^m I[r, 2m+1]| for r = 1..N (compact form)."""
    if tbl.form != "compact":
        raise ValueError("sum rules apply to the compact form")
    out = np.zeros(tbl.n)
    for r in range(1, tbl.n + 1):
        acc = 0.0 + 0.0j
        for m in range((r - 1) // 2 + 1):
            acc += (-1) ** m * tbl.values[(r, 2 * m + 1)]
        out[r - 1] = abs(acc)
    return out


def limit_matching_residual(tbl: IntegralsTable) -> np.ndarray:
    """|sum_k I[r,k] ((-i/2)^k - (i/2)^k)| for r = 1..N (compact form)."""
    if tbl.form != "compact":
        raise ValueError("limit matching applies to the compact form")
    out = np.zeros(tbl.n)
    for r in range(1, tbl.n + 1):
        acc = 0.0 + 0.0j
        for k in range(r + 1):
            acc += tbl.values[(r, k)] * ((-0.5j) ** k - (0.5j) ** k)
        out[r - 1] = abs(acc)
    return out


def odd_column_residual(state: CMState) -> float:
    """Largest odd-power coefficient when a normal-form state is fit against
    the full power basis; the transpose symmetry of the Lax matrix makes the
    characteristic polynomial even in c(z), so this must vanish."""
    if state.form != "normal":
        raise ValueError("odd-column check applies to the normal form")
    full = CMState("compact", state.q, state.p, state.spin)  # full power basis
    tbl = extract(full)
    worst = 0.0
    for r in range(1, tbl.n + 1):
        for k in range(1, r + 1, 2):
            worst = max(worst, abs(tbl.values[(r, k)]))
    return worst


def family_labels(form: str, n: int) -> list[tuple[int, int]]:
    """Index pairs (r, k) of the nontrivial conserved family.

    Compact form: all coefficients for r >= 1 minus the vanishing I[1,1],
    the pure-spin Casimirs I[r,r] (r >= 2), and one odd column per r >= 2
    eliminated by the tail relation (k = 1 chosen as the dependent one).
    Normal form: all even-power coefficients minus the Casimirs I[2k,k].
    """
    labels = []
    if form == "compact":
        for r in range(1, n + 1):
            for k in range(r + 1):
                if r == 1 and k == 1:
                    continue
                if r >= 2 and k == r:
                    continue
                if r >= 2 and k == 1:
                    continue
                labels.append((r, k))
    elif form == "normal":
        casimirs = {(2 * k, k) for k in range(1, n // 2 + 1)}
        for r in range(1, n + 1):
            for k in range(r // 2 + 1):
                if (r, k) in casimirs:
                    continue
                labels.append((r, k))
    else:
        raise ValueError(f"unknown form {form!r}")
    return labels


def expected_family_size(form: str, n: int) -> int:
    if form == "compact":
        return 1 + n * (n - 1) // 2
    return n + ((n - 1) ** 2) // 4


def evaluate_family(state: CMState, labels=None) -> np.ndarray:
    """Real values of the nontrivial family at a momentum-zero state."""
    tbl = extract(state)
    if labels is None:
        labels = family_labels(state.form, state.n)
    if state.form == "normal":
        # table keys are stored by power of c(z); translate (r, k) -> c^{2k}
        return np.array([tbl.real_value(r, 2 * k) for (r, k) in labels])
    return np.array([tbl.real_value(r, k) for (r, k) in labels])


def _zero_momentum(state: CMState) -> CMState:
    spin = state.spin - np.diag(np.diag(state.spin))
    return CMState(state.form, state.q, state.p, spin)


def _slice_directions(state: CMState):
    """Tangent directions of the momentum-zero slice (q, p, off-diag spin)."""
    n = state.n
    dirs = []
    for i in range(n):
        dq = np.zeros(n)
        dq[i] = 1.0
        dirs.append(("q", dq))
    for i in range(n):
        dp = np.zeros(n)
        dp[i] = 1.0
        dirs.append(("p", dp))
    for E in lie_core.real_basis(n, spin_tag(state.form)):
        if lie_core.frob(np.diag(np.diag(E))) > 0:
            continue  # stay on the momentum-zero slice
        dirs.append(("spin", E))
    return dirs


def independence_rank(state: CMState, labels=None, fd_step: float = 1e-5,
                      sv_threshold: float = RANK_SV_THRESHOLD) -> int:
    """Numerical rank of the family Jacobian at a generic momentum-zero state."""
    state = _zero_momentum(state)
    if labels is None:
        labels = family_labels(state.form, state.n)
    cols = []
    for kind, d in _slice_directions(state):
        if kind == "q":
            plus = CMState(state.form, state.q + fd_step * d, state.p, state.spin)
            minus = CMState(state.form, state.q - fd_step * d, state.p, state.spin)
        elif kind == "p":
            plus = CMState(state.form, state.q, state.p + fd_step * d, state.spin)
            minus = CMState(state.form, state.q, state.p - fd_step * d, state.spin)
        else:
            plus = CMState(state.form, state.q, state.p, state.spin + fd_step * d)
            minus = CMState(state.form, state.q, state.p, state.spin - fd_step * d)
        cols.append((evaluate_family(plus, labels) - evaluate_family(minus, labels))
                    / (2.0 * fd_step))
    jac = np.column_stack(cols)
    norms = np.linalg.norm(jac, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    sv = np.linalg.svd(jac / norms, compute_uv=False)
    return int(np.sum(sv > sv_threshold * sv[0]))


def integral_observable(r: int, k: int, fd_step: float = 1e-5) -> poisson.Observable:
    """I[r,k] (real form) as a phase-space observable.

    The spin diagonal is projected out before extraction; the integrals are
    torus invariant, which makes the bracket value at momentum-zero states
    independent of this choice of extension.
    """
    label = [(r, k)]

    def fn(s):
        return evaluate_family(_zero_momentum(s), label)[0]

    return poisson.Observable(fn, fd_step=fd_step, name=f"I[{r},{k}]")


def involution_residual(state: CMState, lab1: tuple[int, int], lab2: tuple[int, int],
                        fd_step: float = 1e-5) -> float:
    """|{I[r1,k1], I[r2,k2]}| at a momentum-zero state (stable bracket)."""
    state = _zero_momentum(state)
    o1 = integral_observable(*lab1, fd_step=fd_step)
    o2 = integral_observable(*lab2, fd_step=fd_step)
    return abs(poisson.bracket("cm_stable", o1, o2, state))
