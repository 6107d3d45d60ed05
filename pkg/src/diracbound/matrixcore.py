"""Dense complex matrix kernel.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128`` and
shape ``(rows, cols)``.  Every public function returns a fresh array with
finite entries or raises.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg as sla

NULLSPACE_TOL = 1e-10
PSD_TOL = 1e-10


class MatrixError(ValueError):
    """Invalid matrix input (shape, non-finite entries, wrong structure)."""


class EigenSolveError(RuntimeError):
    """The dense eigensolver did not converge or failed its residual check."""


def as_matrix(a) -> np.ndarray:
    """Coerce to a finite 2-D complex128 array."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] == 0 or m.shape[1] == 0:
        raise MatrixError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise MatrixError("matrix has non-finite entries")
    return m


def _finite(m: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(m)):
        raise MatrixError(f"{what} produced non-finite entries")
    return m


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def dagger(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T.copy()


def kron(a, b) -> np.ndarray:
    """Kronecker product: block (i, j) of the result is ``a[i, j] * b``."""
    return _finite(np.kron(as_matrix(a), as_matrix(b)), "kron")


def kron_all(*factors) -> np.ndarray:
    """Left-to-right Kronecker product of one or more factors."""
    if not factors:
        return identity(1)
    out = as_matrix(factors[0])
    for f in factors[1:]:
        out = np.kron(out, as_matrix(f))
    return _finite(out, "kron_all")


def kron_power(a, k: int) -> np.ndarray:
    """``a ⊗ a ⊗ ... ⊗ a`` (k factors); k = 0 gives the 1×1 identity."""
    if k < 0:
        raise MatrixError("negative Kronecker power")
    return kron_all(*([a] * k)) if k else identity(1)


def spectral_norm(m) -> float:
    """Largest singular value."""
    m = as_matrix(m)
    if not np.any(m):
        return 0.0
    return float(np.linalg.norm(m, 2))


def nullspace(m, tol: float = NULLSPACE_TOL) -> list[np.ndarray]:
    """Orthonormal basis (as column vectors) of the numerical right nullspace.

    A singular direction counts as null when its singular value is at most
    ``tol * sigma_max``; the zero matrix has the whole space as nullspace.
    """
    if tol <= 0:
        raise MatrixError("tol must be positive")
    m = as_matrix(m)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = 0 if smax == 0.0 else int(np.sum(s > tol * smax))
    basis = vh[rank:].conj()
    return [basis[i].reshape(-1, 1).copy() for i in range(basis.shape[0])]


def eigenvalues(m, vectors: bool = False):
    """All eigenvalues (with multiplicity) of a square matrix.

    Uses LAPACK's QR/Schur route.  With ``vectors=True`` returns
    ``(values, vecs)`` and checks ``|m v - λ v| <= 1e-8 |m|`` per column.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise MatrixError(f"eigenvalues needs a square matrix, got {m.shape}")
    try:
        if vectors:
            w, v = sla.eig(m, check_finite=False)
        else:
            w = sla.eigvals(m, check_finite=False)
    except (np.linalg.LinAlgError, sla.LinAlgError) as exc:
        raise EigenSolveError(f"eigensolver failed to converge: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise EigenSolveError("eigensolver returned non-finite eigenvalues")
    if not vectors:
        return w
    scale = max(spectral_norm(m), np.finfo(float).tiny)
    res = np.linalg.norm(m @ v - v * w[None, :], axis=0)
    worst = float(res.max()) if res.size else 0.0
    if worst > 1e-8 * scale:
        raise EigenSolveError(f"eigenpair residual {worst:.3e} exceeds 1e-8*|m| = {1e-8 * scale:.3e}")
    return w, v


def is_hermitian(m, tol: float = PSD_TOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return float(np.max(np.abs(m - m.conj().T))) <= tol * max(1.0, float(np.max(np.abs(m))))


def herm_sqrt(m, tol: float = PSD_TOL) -> np.ndarray:
    """Hermitian PSD square root of a Hermitian PSD matrix."""
    m = as_matrix(m)
    if not is_hermitian(m, tol):
        raise MatrixError("herm_sqrt needs a Hermitian matrix")
    h = (m + m.conj().T) / 2
    w, u = np.linalg.eigh(h)
    scale = max(1.0, float(np.max(np.abs(w))))
    if w.min() < -tol * scale:
        raise MatrixError(f"herm_sqrt needs a PSD matrix (min eigenvalue {w.min():.3e})")
    root = np.sqrt(np.clip(w, 0.0, None))
    s = (u * root[None, :]) @ u.conj().T
    return _finite((s + s.conj().T) / 2, "herm_sqrt")
