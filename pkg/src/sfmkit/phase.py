"""Phase-shift covariant SFMs on a partition of the circle.

``E(X) = sum_mn c_mn (int_X w^(n-m) dmu(w)) |e_m><e_n|`` with ``mu`` the
normalized Haar measure, discretized on half-open arcs.  ``c`` must be
Hermitian with unit diagonal but need not be positive semidefinite, in which
case some states get negative "probabilities".
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, DimensionError
from .measure import AtomicSFM

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class ArcPartition:
    """Breakpoints ``t_0 < t_1 < ... < t_M = t_0 + 2 pi``; arc ``j`` is ``[t_j, t_{j+1})``."""

    breakpoints: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.breakpoints, dtype=float).copy()
        if t.ndim != 1 or t.size < 2:
            raise ValueError("a partition needs at least two breakpoints")
        if np.any(np.diff(t) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if abs(t[-1] - t[0] - TWO_PI) > 1e-12:
            raise ValueError("breakpoints must span exactly one turn")
        t.setflags(write=False)
        object.__setattr__(self, "breakpoints", t)

    @classmethod
    def uniform(cls, M: int, offset: float = 0.0) -> "ArcPartition":
        if M < 1:
            raise ValueError("need at least one arc")
        t = offset + TWO_PI * np.arange(M + 1) / M
        t[-1] = offset + TWO_PI
        return cls(t)

    @property
    def n_arcs(self) -> int:
        return self.breakpoints.size - 1

    def arcs(self):
        t = self.breakpoints
        return list(zip(t[:-1], t[1:]))

    def labels(self) -> tuple:
        return tuple(f"arc{j}" for j in range(self.n_arcs))

    def locate(self, angle: float) -> int:
        """Index of the arc containing ``angle`` (taken modulo 2 pi)."""
        t0 = self.breakpoints[0]
        a = t0 + (angle - t0) % TWO_PI
        return int(np.searchsorted(self.breakpoints, a, side="right") - 1)

    def refine(self, factor: int) -> "ArcPartition":
        t = self.breakpoints
        pts = [t[0]]
        for a, b in zip(t[:-1], t[1:]):
            pts.extend(a + (b - a) * np.arange(1, factor + 1) / factor)
        pts[-1] = t[-1]
        return ArcPartition(np.array(pts))


def arc_moment(m: int, n: int, a: float, b: float) -> complex:
    """``int_[a,b) w^(n-m) dmu(w)`` for normalized Haar measure ``mu``."""
    if not b > a or b - a > TWO_PI + 1e-12:
        raise ValueError(f"invalid arc [{a}, {b})")
    k = n - m
    if k == 0:
        return complex((b - a) / TWO_PI)
    return (np.exp(1j * k * b) - np.exp(1j * k * a)) / (TWO_PI * 1j * k)


def c_matrix(preset: str, N: int, r: float = 0.5) -> np.ndarray:
    """Coefficient presets: ``identity``, ``all-ones``, ``toeplitz`` (``c_mn = r^|m-n|``)."""
    if preset == "identity":
        return np.eye(N, dtype=complex)
    if preset == "all-ones":
        return np.ones((N, N), dtype=complex)
    if preset == "toeplitz":
        idx = np.arange(N)
        return (float(r) ** np.abs(idx[:, None] - idx[None, :])).astype(complex)
    raise ValueError(f"unknown c-matrix preset {preset!r}")


def check_c_matrix(c, tol: float = DEFAULT_TOL) -> np.ndarray:
    c = np.asarray(c, dtype=complex)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise DimensionError("c must be square")
    if np.abs(c - c.conj().T).max() > tol:
        raise ValueError("c must be Hermitian")
    if np.abs(np.diag(c) - 1).max() > tol:
        raise ValueError("c must have unit diagonal")
    return c


def block_psd(c, size: int | None = None, tol: float = DEFAULT_TOL) -> tuple:
    """Smallest eigenvalue of the leading ``size x size`` block and whether it is >= -tol."""
    c = np.asarray(c, dtype=complex)
    size = c.shape[0] if size is None else size
    lam = float(np.linalg.eigvalsh(c[:size, :size]).min())
    return lam, lam >= -tol


def phase_sfm(c, partition: ArcPartition) -> AtomicSFM:
    c = check_c_matrix(c)
    N = c.shape[0]
    m = np.arange(N)
    k = m[None, :] - m[:, None]
    forms = []
    for a, b in partition.arcs():
        mom = np.empty((N, N), dtype=complex)
        nz = k != 0
        mom[~nz] = (b - a) / TWO_PI
        kk = k[nz]
        mom[nz] = (np.exp(1j * kk * b) - np.exp(1j * kk * a)) / (TWO_PI * 1j * kk)
        forms.append(c * mom)
    return AtomicSFM(partition.labels(), np.array(forms))


def coherent_vector(z: complex, N: int) -> np.ndarray:
    """Coherent state truncated to ``e_0 .. e_{N-1}`` and renormalized."""
    if N < 1:
        raise ValueError("N must be at least 1")
    z = complex(z)
    if z == 0:
        warnings.warn("z = 0 gives the vacuum e_0, not a phase-carrying coherent state",
                      stacklevel=2)
    coeffs = np.empty(N, dtype=complex)
    coeffs[0] = 1.0
    for n in range(1, N):
        coeffs[n] = coeffs[n - 1] * z / math.sqrt(n)
    return coeffs / np.linalg.norm(coeffs)


def probabilities(E: AtomicSFM, phi) -> np.ndarray:
    """Per-atom values ``E_{atom}(phi, phi)``; complex so that defects stay visible."""
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (E.dim,):
        raise DimensionError("state does not match the SFM dimension")
    return np.einsum("m,jmn,n->j", phi.conj(), E.forms, phi)


def probability_diagnostics(values, tol: float = 1e-12) -> dict:
    values = np.asarray(values, dtype=complex)
    return {
        "total": complex(values.sum()),
        "max_imag": float(np.abs(values.imag).max()),
        "min_real": float(values.real.min()),
        "negative_atoms": [int(j) for j in np.flatnonzero(values.real < -tol)],
    }


def probe_states(N: int, rng: np.random.Generator | None = None, n_random: int = 0,
                 n_phase: int = 24, radii=(0.25, 0.5, 1.0, 1.5, 2.0)) -> list:
    """Grid of test states: two-level superpositions, coherent states, random states."""
    states = []
    angles = TWO_PI * np.arange(n_phase) / n_phase
    for p in range(N):
        for q in range(p + 1, N):
            for th in angles:
                v = np.zeros(N, dtype=complex)
                v[p] = 1 / math.sqrt(2)
                v[q] = np.exp(1j * th) / math.sqrt(2)
                states.append(v)
    for r in radii:
        for th in angles:
            states.append(coherent_vector(r * np.exp(1j * th), N))
    if rng is not None:
        for _ in range(n_random):
            v = rng.normal(size=N) + 1j * rng.normal(size=N)
            states.append(v / np.linalg.norm(v))
    return states


def find_negative_probability(E: AtomicSFM, states=None):
    """Grid search for the most negative per-atom value.

    Returns ``(value, atom_index, state)`` at the minimum real part.
    """
    if states is None:
        states = probe_states(E.dim)
    best = (math.inf, -1, None)
    for v in states:
        p = probabilities(E, v).real
        j = int(np.argmin(p))
        if p[j] < best[0]:
            best = (float(p[j]), j, v)
    return best
