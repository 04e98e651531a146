"""Complex Hermitian kernel: trace norms, max-modulus deflation, Jordan splitting.

The eigen-extraction follows the greedy scheme used to build measurable
spectral representations: pick an eigenvalue of largest modulus, subtract its
rank-one projector, and repeat on the remainder.  The per-step eigenpair comes
from a cyclic complex Jacobi solver implemented here, so that the numpy/LAPACK
solvers stay available as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_RANK_CUTOFF = 1e-12
DEFAULT_TOL = 1e-9


class DimensionError(ValueError):
    """Raised for non-square or mismatched matrix shapes."""


class SymmetryError(ValueError):
    """Raised when a matrix required to be Hermitian is not."""


def as_square(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def entrywise_l1(A) -> float:
    """Sum of entry moduli; an upper bound for the trace norm."""
    A = as_square(A)
    return float(np.abs(A).sum())


def is_hermitian(A, tol: float = DEFAULT_TOL) -> bool:
    A = as_square(A)
    if A.size == 0:
        return True
    scale = max(1.0, entrywise_l1(A))
    return float(np.max(np.abs(A - A.conj().T))) <= tol * scale


def check_hermitian(A, tol: float = DEFAULT_TOL) -> np.ndarray:
    A = as_square(A)
    if not is_hermitian(A, tol):
        dev = float(np.max(np.abs(A - A.conj().T)))
        raise SymmetryError(f"matrix is not Hermitian (max |A - A*| = {dev:.3e})")
    return A


def trace_norm(A, hermitian: bool | None = None) -> float:
    """Trace norm ``||A||_1``.

    Sum of absolute eigenvalues when ``A`` is Hermitian, sum of singular
    values otherwise.  ``hermitian=None`` detects the case.
    """
    A = as_square(A)
    if A.size == 0:
        return 0.0
    if hermitian is None:
        hermitian = is_hermitian(A, tol=1e-14)
    if hermitian:
        H = 0.5 * (A + A.conj().T)
        return float(np.abs(np.linalg.eigvalsh(H)).sum())
    return float(np.linalg.svd(A, compute_uv=False).sum())


def jacobi_eigh(A, eps: float = 1e-15, max_sweeps: int = 60):
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Returns ``(values, vectors)`` with ``A @ vectors[:, k] = values[k] * vectors[:, k]``.
    Values come back in the order the sweeps leave them (unsorted).
    """
    A = np.array(as_square(A), dtype=complex)
    A = 0.5 * (A + A.conj().T)
    n = A.shape[0]
    V = np.eye(n, dtype=complex)
    if n <= 1:
        return A.diagonal().real.copy(), V
    thresh = eps * max(np.linalg.norm(A), np.finfo(float).tiny)
    offdiag = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        if np.linalg.norm(A[offdiag]) <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                mag = abs(apq)
                if mag <= thresh / n:
                    continue
                # phase-align the pivot, then a real rotation zeroes it
                ph = (apq / mag).conjugate()
                theta = (A[q, q].real - A[p, p].real) / (2.0 * mag)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # A <- G* A G with G = [[c, s], [-s ph, c ph]] on the (p, q) plane
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * ph * cq
                A[:, q] = s * cp + c * ph * cq
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * ph.conjugate() * rq
                A[q, :] = s * rp + c * ph.conjugate() * rq
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * ph * vq
                V[:, q] = s * vp + c * ph * vq
    return A.diagonal().real.copy(), V


def canonicalize(v, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Rotate ``v`` so its first entry of modulus > ``tol`` is real positive."""
    v = np.asarray(v, dtype=complex)
    big = np.flatnonzero(np.abs(v) > tol)
    if big.size == 0:
        return v.copy()
    a = v[big[0]]
    return v * (abs(a) / a)


def _lex_key(v):
    return tuple(x for z in v for x in (round(z.real, 9), round(z.imag, 9)))


def _scale(A) -> float:
    return max(1.0, trace_norm(A, hermitian=True))


def max_modulus_eigenpair(A, tol: float = DEFAULT_TOL, solver=jacobi_eigh):
    """Eigenvalue of largest modulus and a canonical unit eigenvector.

    Ties between ``+c`` and ``-c`` go to the positive value; equal eigenvalues
    are ordered by the lexicographic order of their canonical eigenvectors.
    The zero matrix gives ``(0.0, e_0)``.
    """
    A = check_hermitian(A, tol)
    n = A.shape[0]
    if n == 0:
        raise DimensionError("empty matrix has no eigenpair")
    scale = _scale(A)
    if np.max(np.abs(A)) == 0.0:
        e0 = np.zeros(n, dtype=complex)
        e0[0] = 1.0
        return 0.0, e0
    values, vectors = solver(A)
    values = np.asarray(values, dtype=float)
    top = np.max(np.abs(values))
    cand = [k for k in range(len(values)) if abs(values[k]) >= top - tol * scale]
    vecs = {k: canonicalize(vectors[:, k] / np.linalg.norm(vectors[:, k]), tol) for k in cand}
    # positive first, then larger modulus, then lexicographic on the vector
    best = min(cand, key=lambda k: (values[k] < 0, -abs(values[k]), _lex_key(vecs[k])))
    return float(values[best]), vecs[best]


@dataclass(frozen=True)
class EigenSystem:
    """Eigenpairs ordered by nonincreasing modulus; ``vectors`` has shape (r, N)."""

    values: np.ndarray
    vectors: np.ndarray
    dim: int

    @property
    def rank(self) -> int:
        return len(self.values)

    def reconstruct(self) -> np.ndarray:
        if self.rank == 0:
            return np.zeros((self.dim, self.dim), dtype=complex)
        V = self.vectors
        return (V.T * self.values) @ V.conj()


def deflate_diagonalize(A, rank_cutoff: float = DEFAULT_RANK_CUTOFF,
                        tol: float = DEFAULT_TOL, solver=jacobi_eigh) -> EigenSystem:
    """Spectral representation by repeated max-modulus deflation.

    ``T_k = T_{k-1} - lambda_k |phi_k><phi_k|`` until the largest remaining
    modulus drops to ``rank_cutoff * max(1, ||A||_1)``.
    """
    A = check_hermitian(A, tol)
    n = A.shape[0]
    stop = rank_cutoff * _scale(A)
    T = 0.5 * (A + A.conj().T)
    values, vectors = [], []
    for _ in range(n):
        lam, phi = max_modulus_eigenpair(T, tol=tol, solver=solver)
        if abs(lam) <= stop:
            break
        values.append(lam)
        vectors.append(phi)
        T = T - lam * np.outer(phi, phi.conj())
        T = 0.5 * (T + T.conj().T)
    vecs = np.array(vectors, dtype=complex).reshape(len(vectors), n)
    return EigenSystem(np.array(values, dtype=float), vecs, n)


@dataclass(frozen=True)
class SignedFrame:
    """Orthogonal vectors ``g_k`` with ``T = sum_k sgn(k) |g_k><g_k|``.

    ``positive[i]`` is ``g_{i+1}`` and ``negative[i]`` is ``g_{-(i+1)}``;
    both arrays have shape (count, N).
    """

    positive: np.ndarray
    negative: np.ndarray
    dim: int = field(default=0)

    def reconstruct(self) -> np.ndarray:
        P, M = self.positive, self.negative
        return P.T @ P.conj() - M.T @ M.conj()


def signed_frame(eig: EigenSystem, rank_cutoff: float = DEFAULT_RANK_CUTOFF) -> SignedFrame:
    cut = rank_cutoff * max(1.0, float(np.abs(eig.values).sum()))
    pos = [np.sqrt(lam) * v for lam, v in zip(eig.values, eig.vectors) if lam > cut]
    neg = [np.sqrt(-lam) * v for lam, v in zip(eig.values, eig.vectors) if lam < -cut]
    n = eig.dim
    return SignedFrame(np.array(pos, dtype=complex).reshape(len(pos), n),
                       np.array(neg, dtype=complex).reshape(len(neg), n), n)


def jordan_split(frame: SignedFrame):
    """Positive and negative parts ``(T+, T-)`` of the frame's matrix."""
    P, M = frame.positive, frame.negative
    return P.T @ P.conj(), M.T @ M.conj()


def jordan_decomposition(A, rank_cutoff: float = DEFAULT_RANK_CUTOFF, tol: float = DEFAULT_TOL):
    """Shortcut: deflate, frame and split a Hermitian matrix."""
    return jordan_split(signed_frame(deflate_diagonalize(A, rank_cutoff, tol), rank_cutoff))
