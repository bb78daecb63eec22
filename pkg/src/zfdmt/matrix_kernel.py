"""Complex-matrix primitives behind the channel model and the Monte Carlo engine.

Everything here works on small dense complex matrices (dimensions <= 8 in
practice) and delegates the factorizations to LAPACK via numpy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonHermitianError, RankDeficiencyError
from .rng import sample_standard_complex

#: Frobenius tolerance for factorization identities (reused by downstream tests).
FACTOR_TOL = 1e-10
#: Absolute tolerance for triangularity below the diagonal.
TRIANGULAR_TOL = 1e-12


@dataclass(frozen=True)
class QRPair:
    """Unitary factor and upper-triangular factor with real nonnegative diagonal."""

    q: np.ndarray
    r: np.ndarray


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"2-D matrix with positive dimensions required, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def sample_complex_gaussian(rows: int, cols: int, stream: np.random.Generator) -> np.ndarray:
    """I.i.d. zero-mean complex Gaussian matrix with unit complex variance per entry."""
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    return sample_standard_complex(stream, (rows, cols))


def qr_decompose(m) -> QRPair:
    """QR factorization with the tall-or-square orientation and real diagonal.

    Wide inputs are factored through their adjoint (the mutual information of a
    matrix and of its adjoint coincide), so the diagonal of ``r`` always follows
    the tall-case law: for an i.i.d. complex Gaussian input with k rows and
    p <= k columns, |r_ll|^2 is Gamma(k-l+1, 1) distributed. Column phases are
    absorbed so that diag(r) is real and nonnegative.
    """
    a = _as_matrix(m)
    if a.shape[0] < a.shape[1]:
        a = a.conj().T
    q, r = np.linalg.qr(a, mode="complete")
    p = min(r.shape)
    d = np.diagonal(r)[:p].copy()
    mags = np.abs(d)
    scale = np.linalg.norm(a) / np.sqrt(a.size)
    if np.any(mags <= 1e-300 * max(1.0, scale)):
        raise RankDeficiencyError("column norm underflow in QR factorization")
    phase = d / mags
    q = q.copy()
    q[:, :p] *= phase[np.newaxis, :]
    r = r.copy()
    r[:p, :] *= phase.conj()[:, np.newaxis]
    return QRPair(q=q, r=r)


def null_space_basis(h) -> np.ndarray:
    """Orthonormal basis of the right null space of a fat full-row-rank matrix.

    For h of shape (ne, nt) with ne < nt, returns a of shape (nt, nt - ne) with
    orthonormal columns and h @ a = 0; a @ a^H is the orthogonal projector onto
    the null space. Raises RankDeficiencyError when the numerical row rank of h
    is below ne.
    """
    a = _as_matrix(h)
    ne, nt = a.shape
    if ne >= nt:
        raise ValueError(f"need fewer rows than columns, got shape {a.shape}")
    q, r = np.linalg.qr(a.conj().T, mode="complete")
    diag = np.abs(np.diagonal(r))
    if np.any(diag < FACTOR_TOL * max(1.0, np.linalg.norm(a))):
        raise RankDeficiencyError(f"numerical row rank below {ne}")
    return q[:, ne:]


def log_det_mutual_info(h, rho: float) -> float:
    """log det(I + rho * h h^H) in nats, via the eigenvalues of the smaller Gram matrix."""
    a = _as_matrix(h)
    if rho < 0:
        raise ValueError(f"rho >= 0 required, got {rho}")
    gram = a @ a.conj().T if a.shape[0] <= a.shape[1] else a.conj().T @ a
    lam = np.linalg.eigvalsh(gram)
    return float(np.sum(np.log1p(rho * np.clip(lam, 0.0, None))))


def max_eigenvalue_hermitian(m) -> float:
    """Largest eigenvalue of a Hermitian matrix; rejects non-Hermitian input."""
    a = _as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise NonHermitianError(f"square matrix required, got shape {a.shape}")
    defect = np.linalg.norm(a - a.conj().T)
    if defect > 1e-10 * max(1.0, np.linalg.norm(a)):
        raise NonHermitianError(f"Hermitian defect {defect:.3e} beyond tolerance")
    return float(np.linalg.eigvalsh(a)[-1])
