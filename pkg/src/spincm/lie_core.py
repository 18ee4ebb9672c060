"""Matrix Lie algebra primitives for gl(N, C) regarded as a real Lie algebra.

Conventions used by every other module:

* pairing: ``(x, y) = 2 Re tr(x y)``.  Invariant, symmetric, nondegenerate,
  but indefinite (it is negative definite on the skew-Hermitian subspace).
* subspaces are addressed by string tags.  Each tag has an orthogonal
  projector (w.r.t. the pairing above) and a membership predicate:

  ====================  ==================================================
  ``full``              all of gl(N, C)
  ``diag_real``         real diagonal matrices
  ``diag_imag``         purely imaginary diagonal matrices
  ``diag``              complex diagonal matrices
  ``skew_hermitian``    u(N)
  ``skew_symmetric_real``  real skew-symmetric matrices
  ``hermitian``         Hermitian matrices
  ``diag_free``         matrices with zero diagonal
  ====================  ==================================================

* involutions: ``tau(x) = -x*`` (conjugation fixing u(N)),
  ``s(x) = x*`` (involutive anti-morphism, s = -tau),
  ``theta(x) = -x^T`` (Cartan involution singling out real skew-symmetrics).
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, SubspaceTagError

SUBSPACE_TAGS = (
    "full",
    "diag_real",
    "diag_imag",
    "diag",
    "skew_hermitian",
    "skew_symmetric_real",
    "hermitian",
    "diag_free",
)

DEFAULT_MEMBERSHIP_TOL = 1e-12


def as_matrix(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("matrix has non-finite entries")
    return x


def pair(x, y) -> float:
    """Real invariant pairing 2 Re tr(x y)."""
    x, y = as_matrix(x), as_matrix(y)
    if x.shape != y.shape:
        raise DimensionMismatchError(f"pairing of shapes {x.shape} and {y.shape}")
    return float(2.0 * np.real(np.trace(x @ y)))


def commutator(x, y) -> np.ndarray:
    return x @ y - y @ x


def anticommutator(x, y) -> np.ndarray:
    return x @ y + y @ x


def frob(x) -> float:
    return float(np.linalg.norm(x)) if np.asarray(x).size else 0.0


def proj(x, tag: str) -> np.ndarray:
    """Orthogonal projection of x onto the tagged subspace."""
    x = as_matrix(x)
    if tag == "full":
        return x.copy()
    if tag == "diag_real":
        return np.diag(np.real(np.diag(x)).astype(complex))
    if tag == "diag_imag":
        return np.diag(1j * np.imag(np.diag(x)))
    if tag == "diag":
        return np.diag(np.diag(x))
    if tag == "skew_hermitian":
        return 0.5 * (x - x.conj().T)
    if tag == "hermitian":
        return 0.5 * (x + x.conj().T)
    if tag == "skew_symmetric_real":
        re = np.real(x)
        return (0.5 * (re - re.T)).astype(complex)
    if tag == "diag_free":
        return x - np.diag(np.diag(x))
    raise SubspaceTagError(f"unknown subspace tag {tag!r}")


def subspace_defect(x, tag: str) -> float:
    """Frobenius distance from x to the tagged subspace."""
    return frob(as_matrix(x) - proj(x, tag))


def membership(x, tag: str, tol: float = DEFAULT_MEMBERSHIP_TOL) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return subspace_defect(x, tag) < tol


def involution(x, which: str) -> np.ndarray:
    x = as_matrix(x)
    if which == "tau":
        return -x.conj().T
    if which == "s":
        return x.conj().T.copy()
    if which == "theta":
        return -x.T
    raise ValueError(f"unknown involution {which!r} (expected tau, s or theta)")


def real_basis(n: int, tag: str) -> list[np.ndarray]:
    """Orthogonal real basis of the tagged subspace (w.r.t. the pairing).

    The basis elements are mutually orthogonal but not normalized; their
    signed squared norms pair(E, E) may be negative.
    """
    if n < 1:
        raise DimensionMismatchError("n must be >= 1")

    def e(i, j, val=1.0):
        m = np.zeros((n, n), dtype=complex)
        m[i, j] = val
        return m

    basis: list[np.ndarray] = []
    if tag == "diag_real":
        basis = [e(k, k) for k in range(n)]
    elif tag == "diag_imag":
        basis = [e(k, k, 1j) for k in range(n)]
    elif tag == "diag":
        basis = [e(k, k) for k in range(n)] + [e(k, k, 1j) for k in range(n)]
    elif tag == "skew_hermitian":
        basis = [e(k, k, 1j) for k in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                basis.append(e(i, j) - e(j, i))
                basis.append(e(i, j, 1j) + e(j, i, 1j))
    elif tag == "hermitian":
        basis = [e(k, k) for k in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                basis.append(e(i, j) + e(j, i))
                basis.append(e(i, j, 1j) - e(j, i, 1j))
    elif tag == "skew_symmetric_real":
        for i in range(n):
            for j in range(i + 1, n):
                basis.append(e(i, j) - e(j, i))
    elif tag == "diag_free":
        for i in range(n):
            for j in range(n):
                if i != j:
                    basis.append(e(i, j))
                    basis.append(e(i, j, 1j))
    elif tag == "full":
        for i in range(n):
            for j in range(n):
                basis.append(e(i, j))
                basis.append(e(i, j, 1j))
    else:
        raise SubspaceTagError(f"unknown subspace tag {tag!r}")
    return basis


def random_element(n: int, tag: str, seed: int, scale: float = 1.0) -> np.ndarray:
    """Deterministic random element of the tagged subspace."""
    rng = np.random.default_rng(seed)
    raw = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return proj(scale * raw, tag)


def representer_gl(ell, n: int) -> np.ndarray:
    """Matrix A with pair(A, X) = ell(X) for all X in gl(N, C) (as real space).

    ``ell`` is a real-linear functional sampled on the directions
    E_kl and i E_kl.
    """
    a = np.zeros((n, n), dtype=complex)
    for k in range(n):
        for l in range(n):
            d = np.zeros((n, n), dtype=complex)
            d[k, l] = 1.0
            lr = ell(d)
            d[k, l] = 1j
            li = ell(d)
            a[l, k] = 0.5 * (lr - 1j * li)
    return a


def representer_diag(ell, n: int) -> np.ndarray:
    """Diagonal matrix Z with pair(Z, lam) = ell(lam) for all diagonal lam."""
    z = np.zeros(n, dtype=complex)
    for k in range(n):
        d = np.zeros((n, n), dtype=complex)
        d[k, k] = 1.0
        lr = ell(d)
        d[k, k] = 1j
        li = ell(d)
        z[k] = 0.5 * (lr - 1j * li)
    return np.diag(z)


def representer_subspace(ell, basis: list[np.ndarray]) -> np.ndarray:
    """Element d of span(basis) with pair(d, E) = ell(E) for basis elements E.

    Requires the basis to be orthogonal with nonzero signed norms, which the
    bases returned by :func:`real_basis` satisfy.
    """
    out = np.zeros_like(basis[0])
    for mat in basis:
        nrm = pair(mat, mat)
        out = out + (ell(mat) / nrm) * mat
    return out
