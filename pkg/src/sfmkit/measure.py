"""Atomic sesquilinear form measures and their trace-class compression.

An SFM lives on a finite set of labelled atoms; each atom carries the N x N
matrix ``E_mn(atom) = E_atom(e_m, e_n)`` in the truncated basis.  Set values
are sums over atoms.  Compression by a diagonal scaling ``D`` turns the SFM
into a trace-class valued measure ``F`` with total variation ``mu`` and
density ``T = dF/dmu``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .linalg import DEFAULT_TOL, DimensionError, is_hermitian, trace_norm


def _forms_array(forms, dim=None) -> np.ndarray:
    arr = np.asarray(forms, dtype=complex)
    if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
        raise DimensionError(f"atom forms must have shape (M, N, N), got {arr.shape}")
    if dim is not None and arr.shape[1] != dim:
        raise DimensionError(f"atom forms have dimension {arr.shape[1]}, expected {dim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("atom forms have non-finite entries")
    return arr


@dataclass(frozen=True, eq=False)
class AtomicSFM:
    """Sesquilinear form measure on a finite atomic space.

    ``forms[j]`` is the matrix of the form attached to atom ``labels[j]``,
    antilinear in the first slot: ``E(phi, psi) = phi^* @ form @ psi``.
    """

    labels: tuple
    forms: np.ndarray

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        forms = _forms_array(self.forms)
        if len(labels) != forms.shape[0]:
            raise DimensionError(f"{len(labels)} labels for {forms.shape[0]} atoms")
        if len(labels) < 1:
            raise ValueError("an atomic SFM needs at least one atom")
        if len(set(labels)) != len(labels):
            raise ValueError("atom labels must be unique")
        forms.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "forms", forms)

    @classmethod
    def from_forms(cls, forms, labels=None) -> "AtomicSFM":
        forms = _forms_array(forms)
        if labels is None:
            labels = [f"w{j}" for j in range(forms.shape[0])]
        return cls(tuple(labels), forms)

    @property
    def dim(self) -> int:
        return self.forms.shape[1]

    @property
    def n_atoms(self) -> int:
        return self.forms.shape[0]

    def index(self, label) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise KeyError(f"unknown atom label {label!r}") from None

    def indices(self, X: Iterable | None) -> list:
        if X is None:
            return list(range(self.n_atoms))
        return [self.index(x) for x in X]

    def value(self, X=None) -> np.ndarray:
        """Matrix of ``E(X)``; ``X=None`` is the whole space."""
        idx = self.indices(X)
        if not idx:
            return np.zeros((self.dim, self.dim), dtype=complex)
        return self.forms[idx].sum(axis=0)

    def map_forms(self, fn) -> "AtomicSFM":
        return AtomicSFM(self.labels, np.array([fn(f) for f in self.forms]))

    def __add__(self, other: "AtomicSFM") -> "AtomicSFM":
        _check_compatible(self, other)
        return AtomicSFM(self.labels, self.forms + other.forms)

    def __sub__(self, other: "AtomicSFM") -> "AtomicSFM":
        _check_compatible(self, other)
        return AtomicSFM(self.labels, self.forms - other.forms)

    def __mul__(self, c) -> "AtomicSFM":
        return AtomicSFM(self.labels, complex(c) * self.forms)

    __rmul__ = __mul__

    def __neg__(self) -> "AtomicSFM":
        return AtomicSFM(self.labels, -self.forms)

    def is_symmetric(self, tol: float = DEFAULT_TOL) -> bool:
        return all(is_hermitian(f, tol) for f in self.forms)

    def is_positive(self, tol: float = DEFAULT_TOL) -> bool:
        if not self.is_symmetric(tol):
            return False
        for f in self.forms:
            h = 0.5 * (f + f.conj().T)
            if np.linalg.eigvalsh(h).min() < -tol * max(1.0, trace_norm(h, True)):
                return False
        return True

    @classmethod
    def zeros(cls, labels, dim: int) -> "AtomicSFM":
        return cls(tuple(labels), np.zeros((len(labels), dim, dim), dtype=complex))


def _check_compatible(a: AtomicSFM, b: AtomicSFM) -> None:
    if a.dim != b.dim or a.labels != b.labels:
        raise DimensionError("SFMs differ in dimension or atom labels")


def evaluate(E: AtomicSFM, X, phi, psi) -> complex:
    """``E_X(phi, psi)``: antilinear in ``phi``, linear in ``psi``."""
    phi = np.asarray(phi, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    if phi.shape != (E.dim,) or psi.shape != (E.dim,):
        raise DimensionError("vectors do not match the SFM dimension")
    return complex(phi.conj() @ E.value(X) @ psi)


def symmetric_split(Phi):
    """``Phi = A + iB`` with ``A = (Phi + Phi*)/2`` and ``B = (i Phi* - i Phi)/2``."""
    Phi = np.asarray(Phi, dtype=complex)
    Phi_h = Phi.conj().T
    return 0.5 * (Phi + Phi_h), 0.5j * (Phi_h - Phi)


def symmetric_split_sfm(E: AtomicSFM):
    Eh = np.conj(np.swapaxes(E.forms, 1, 2))
    return (AtomicSFM(E.labels, 0.5 * (E.forms + Eh)),
            AtomicSFM(E.labels, 0.5j * (Eh - E.forms)))


def entry_total_variation(E: AtomicSFM, m: int, n: int) -> float:
    """Total variation ``|E_mn|(Omega)`` of one matrix-entry measure."""
    if not (0 <= m < E.dim and 0 <= n < E.dim):
        raise IndexError(f"entry ({m}, {n}) out of range for dimension {E.dim}")
    return float(np.abs(E.forms[:, m, n]).sum())


def total_variation_matrix(E: AtomicSFM) -> np.ndarray:
    return np.abs(E.forms).sum(axis=0)


@dataclass(frozen=True, eq=False)
class DiagonalScaling:
    """Positive diagonal ``D = diag(d_0, ..., d_{N-1})``.

    ``D`` maps ``H`` isometrically onto ``H_D`` (inner product
    ``<D^-1 x | D^-1 y>``); ``D^-1`` embeds ``H`` into ``H_{D^-1}``.
    """

    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).copy()
        if w.ndim != 1 or w.size == 0:
            raise DimensionError("weights must be a non-empty vector")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ValueError("scaling weights must be finite and strictly positive")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return self.weights.size

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.weights)

    @property
    def inverse_matrix(self) -> np.ndarray:
        return np.diag(1.0 / self.weights)

    def apply(self, v) -> np.ndarray:
        return self.weights * np.asarray(v, dtype=complex)

    def apply_inverse(self, v) -> np.ndarray:
        return np.asarray(v, dtype=complex) / self.weights

    def inner_D(self, x, y) -> complex:
        """Inner product of ``H_D``."""
        return complex(np.vdot(self.apply_inverse(x), self.apply_inverse(y)))

    def inner_Dinv(self, x, y) -> complex:
        """Inner product of ``H_{D^-1}``."""
        return complex(np.vdot(self.apply(x), self.apply(y)))

    @classmethod
    def identity(cls, dim: int) -> "DiagonalScaling":
        return cls(np.ones(dim))


def default_alpha(m: int) -> float:
    return 2.0 ** -(m + 1)


def geometric_alpha(ratio: float) -> Callable[[int], float]:
    if not 0 < ratio < 1:
        raise ValueError("alpha ratio must lie in (0, 1)")
    return lambda m: ratio ** (m + 1)


def _alpha_values(alpha, N: int) -> np.ndarray:
    if alpha is None:
        alpha = default_alpha
    if callable(alpha):
        vals = np.array([alpha(m) for m in range(N)], dtype=float)
    else:
        vals = np.asarray(alpha, dtype=float)
        if vals.shape != (N,):
            raise DimensionError(f"need {N} alpha values, got shape {vals.shape}")
    if np.any(vals <= 0) or not np.all(np.isfinite(vals)):
        raise ValueError("alpha must be a positive sequence")
    return vals


def scaling_weights(E: AtomicSFM, alpha=None):
    """Scaling ``d_m = alpha_m / max{1, sqrt(|E_kl|(Omega)) : k, l <= m}``.

    ``alpha`` is a callable ``m -> alpha_m`` or an explicit length-N sequence
    (default ``2^-(m+1)``).  Returns ``(DiagonalScaling, delta)`` with
    ``delta = sum_mn d_m d_n |E_mn|(Omega)``.
    """
    N = E.dim
    a = _alpha_values(alpha, N)
    tv = total_variation_matrix(E)
    d = np.empty(N)
    running = 1.0
    for m in range(N):
        # the leading (m+1) x (m+1) block grows by one row and one column
        block_max = max(tv[m, : m + 1].max(), tv[: m + 1, m].max())
        running = max(running, np.sqrt(block_max))
        d[m] = a[m] / running
    delta = float(d @ tv @ d)
    return DiagonalScaling(d), delta


@dataclass(frozen=True, eq=False)
class TraceMeasure:
    """``F(atom_j) = D E(atom_j) D`` with total variation ``mu[j] = ||F_j||_1``."""

    labels: tuple
    forms: np.ndarray
    mu: np.ndarray
    delta: float = float("nan")

    @property
    def dim(self) -> int:
        return self.forms.shape[1]

    def value(self, X=None) -> np.ndarray:
        idx = range(len(self.labels)) if X is None else [self.labels.index(x) for x in X]
        idx = list(idx)
        if not idx:
            return np.zeros((self.dim, self.dim), dtype=complex)
        return self.forms[idx].sum(axis=0)

    def total_variation(self) -> float:
        return float(self.mu.sum())


def compress(E: AtomicSFM, D: DiagonalScaling) -> TraceMeasure:
    if D.dim != E.dim:
        raise DimensionError(f"scaling has dimension {D.dim}, SFM has {E.dim}")
    d = D.weights
    F = E.forms * np.outer(d, d)[None, :, :]
    mu = np.array([trace_norm(f) for f in F])
    delta = float(d @ total_variation_matrix(E) @ d)
    return TraceMeasure(E.labels, F, mu, delta)


@dataclass(frozen=True, eq=False)
class DensityFamily:
    """Per-atom density ``T_j`` with ``F_j = mu_j T_j``."""

    labels: tuple
    forms: np.ndarray
    mu: np.ndarray

    @property
    def dim(self) -> int:
        return self.forms.shape[1]


def density(F: TraceMeasure) -> DensityFamily:
    T = np.zeros_like(F.forms)
    pos = F.mu > 0
    T[pos] = F.forms[pos] / F.mu[pos, None, None]
    return DensityFamily(F.labels, T, F.mu.copy())


def form_density(T: DensityFamily, D: DiagonalScaling, j: int) -> np.ndarray:
    """Matrix of ``C_w(phi, psi) = <D^-1 phi | T(w) D^-1 psi>`` at atom ``j``."""
    d = D.weights
    return T.forms[j] / np.outer(d, d)


def hd_extension(F: TraceMeasure, D: DiagonalScaling, j: int) -> np.ndarray:
    """``D F(atom_j) D^-1``: the operator on ``H_D`` representing the form."""
    d = D.weights
    return F.forms[j] * (d[:, None] / d[None, :])


def random_sfm(rng: np.random.Generator, N: int, M: int, kind: str = "general",
               scale: float = 1.0, labels: Sequence[str] | None = None) -> AtomicSFM:
    """Random atomic SFM; ``kind`` is ``general``, ``symmetric`` or ``positive``."""
    X = rng.normal(size=(M, N, N)) + 1j * rng.normal(size=(M, N, N))
    if kind == "general":
        forms = X
    elif kind == "symmetric":
        forms = 0.5 * (X + np.conj(np.swapaxes(X, 1, 2)))
    elif kind == "positive":
        forms = X @ np.conj(np.swapaxes(X, 1, 2)) / N
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return AtomicSFM.from_forms(scale * forms, labels)
