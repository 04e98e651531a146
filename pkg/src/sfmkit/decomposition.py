"""Positive/negative splitting of symmetric SFMs and four-part decompositions.

A symmetric SFM is compressed, its density diagonalized atom by atom, and
the signed frame pulled back through ``D^-1`` to vectors ``d_k`` with
``E(atom) = sum_k sgn(k) |d_k><d_k|``.  A general SFM is first split into
real and imaginary symmetric parts, giving ``E = sum_k i^k E^(k)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import (DEFAULT_RANK_CUTOFF, DEFAULT_TOL, DimensionError, SymmetryError,
                     check_hermitian, deflate_diagonalize, signed_frame)
from .measure import (AtomicSFM, DensityFamily, DiagonalScaling, TraceMeasure, compress,
                      density, scaling_weights, symmetric_split_sfm)

PHASES = (1, 1j, -1, -1j)


def _outer_sum(vectors: np.ndarray, dim: int) -> np.ndarray:
    if len(vectors) == 0:
        return np.zeros((dim, dim), dtype=complex)
    return vectors.T @ vectors.conj()


@dataclass(frozen=True, eq=False)
class DkFamily:
    """Per-atom vectors ``d_k = D^-1 g_k`` (coordinates in ``H_{D^-1}``).

    The base-measure weight is folded in (``g_k`` scaled by ``sqrt(mu_j)``),
    so atom sums reproduce the SFM without further weighting.
    """

    labels: tuple
    scaling: DiagonalScaling
    positive: tuple
    negative: tuple

    @property
    def dim(self) -> int:
        return self.scaling.dim

    def positive_part(self) -> AtomicSFM:
        return AtomicSFM(self.labels, np.array([_outer_sum(v, self.dim) for v in self.positive]))

    def negative_part(self) -> AtomicSFM:
        return AtomicSFM(self.labels, np.array([_outer_sum(v, self.dim) for v in self.negative]))

    def reconstruct(self) -> AtomicSFM:
        return self.positive_part() - self.negative_part()


def dk_vectors(T: DensityFamily, mu, D: DiagonalScaling,
               rank_cutoff: float = DEFAULT_RANK_CUTOFF, tol: float = DEFAULT_TOL) -> DkFamily:
    mu = np.asarray(mu, dtype=float)
    if D.dim != T.dim:
        raise DimensionError("scaling and density dimensions differ")
    pos, neg = [], []
    # atoms carrying only rounding-level mass get no vectors
    mass_cut = rank_cutoff * max(1.0, float(mu.sum()))
    for j, Tj in enumerate(T.forms):
        if mu[j] <= mass_cut:
            empty = np.zeros((0, T.dim), dtype=complex)
            pos.append(empty)
            neg.append(empty.copy())
            continue
        try:
            check_hermitian(Tj, tol)
        except SymmetryError as exc:
            raise SymmetryError(f"density at atom {T.labels[j]!r}: {exc}") from None
        frame = signed_frame(deflate_diagonalize(Tj, rank_cutoff, tol), rank_cutoff)
        w = np.sqrt(mu[j])
        pos.append(w * frame.positive / D.weights)
        neg.append(w * frame.negative / D.weights)
    return DkFamily(T.labels, D, tuple(pos), tuple(neg))


@dataclass(frozen=True, eq=False)
class SymmetricSplit:
    plus: AtomicSFM
    minus: AtomicSFM
    family: DkFamily
    trace: TraceMeasure


def symmetric_pipeline(E: AtomicSFM, alpha=None, rank_cutoff: float = DEFAULT_RANK_CUTOFF,
                       tol: float = DEFAULT_TOL, scaling: DiagonalScaling | None = None):
    """Run compression, density and diagonalization on a symmetric SFM."""
    for label, f in zip(E.labels, E.forms):
        try:
            check_hermitian(f, tol)
        except SymmetryError as exc:
            raise SymmetryError(f"atom {label!r}: {exc}") from None
    if scaling is None:
        scaling, _ = scaling_weights(E, alpha)
    F = compress(E, scaling)
    fam = dk_vectors(density(F), F.mu, scaling, rank_cutoff, tol)
    return SymmetricSplit(fam.positive_part(), fam.negative_part(), fam, F)


def split_symmetric_sfm(E: AtomicSFM, alpha=None, rank_cutoff: float = DEFAULT_RANK_CUTOFF,
                        tol: float = DEFAULT_TOL, scaling: DiagonalScaling | None = None):
    """``E = E+ - E-`` with both parts positive, unique once ``D`` is fixed."""
    s = symmetric_pipeline(E, alpha, rank_cutoff, tol, scaling)
    return s.plus, s.minus


@dataclass(frozen=True, eq=False)
class PositiveDecomposition:
    """Four positive SFMs with ``E = sum_k i^k parts[k]``.

    ``scalings`` and ``mu`` record the provenance (one entry per symmetric
    part, real then imaginary); ``frames[k][j]`` holds the ``d``-vectors
    realizing part ``k`` at atom ``j`` when they are known.
    """

    parts: tuple
    scalings: tuple = ()
    mu: np.ndarray | None = None
    frames: tuple | None = field(default=None)

    def __post_init__(self):
        if len(self.parts) != 4:
            raise ValueError("a decomposition has exactly four parts")
        p0 = self.parts[0]
        for p in self.parts[1:]:
            if p.dim != p0.dim or p.labels != p0.labels:
                raise DimensionError("decomposition parts differ in dimension or labels")

    @property
    def labels(self) -> tuple:
        return self.parts[0].labels

    @property
    def dim(self) -> int:
        return self.parts[0].dim

    def reconstruct(self) -> AtomicSFM:
        forms = sum(ph * p.forms for ph, p in zip(PHASES, self.parts))
        return AtomicSFM(self.labels, forms)

    def strictness(self) -> np.ndarray:
        """Matrix of ``sum_k E^(k)_Omega``; ``J`` is injective iff it is positive definite."""
        return sum(p.value() for p in self.parts)


def decompose(E: AtomicSFM, alpha=None, rank_cutoff: float = DEFAULT_RANK_CUTOFF,
              tol: float = DEFAULT_TOL) -> PositiveDecomposition:
    A, B = symmetric_split_sfm(E)
    sa = symmetric_pipeline(A, alpha, rank_cutoff, tol)
    sb = symmetric_pipeline(B, alpha, rank_cutoff, tol)
    parts = (sa.plus, sb.plus, sa.minus, sb.minus)
    frames = (sa.family.positive, sb.family.positive, sa.family.negative, sb.family.negative)
    return PositiveDecomposition(parts, (sa.family.scaling, sb.family.scaling),
                                 np.vstack([sa.trace.mu, sb.trace.mu]), frames)


@dataclass
class DecompositionReport:
    min_eigenvalues: np.ndarray  # shape (4, M)
    residual: float
    injectivity: float
    scale: float
    tol: float

    @property
    def psd_ok(self) -> bool:
        return bool(np.all(self.min_eigenvalues >= -self.tol * self.scale))

    @property
    def reconstruction_ok(self) -> bool:
        return self.residual <= self.tol * self.scale

    @property
    def passed(self) -> bool:
        return self.psd_ok and self.reconstruction_ok

    def lines(self) -> list:
        out = [f"reconstruction residual: {self.residual:.3e} "
               f"(limit {self.tol * self.scale:.3e}) {'ok' if self.reconstruction_ok else 'FAIL'}"]
        for k, row in enumerate(self.min_eigenvalues):
            out.append(f"part {k} min eigenvalue: {row.min():.3e}")
        out.append(f"psd check: {'ok' if self.psd_ok else 'FAIL'}")
        out.append(f"injectivity indicator: {self.injectivity:.6g}")
        return out


def verify_decomposition(E: AtomicSFM, dec: PositiveDecomposition,
                         tol: float = DEFAULT_TOL) -> DecompositionReport:
    if dec.dim != E.dim or dec.labels != E.labels:
        raise DimensionError("decomposition does not match the SFM")
    scale = 1.0 + max(float(np.abs(E.forms).max()),
                      max(float(np.abs(p.forms).max()) for p in dec.parts))
    mins = np.empty((4, E.n_atoms))
    for k, part in enumerate(dec.parts):
        for j, f in enumerate(part.forms):
            # antihermitian residue counts against positivity
            herm_dev = float(np.abs(f - f.conj().T).max())
            mins[k, j] = np.linalg.eigvalsh(0.5 * (f + f.conj().T)).min() - herm_dev
    residual = float(np.abs(E.forms - dec.reconstruct().forms).max())
    injectivity = float(np.real(np.diag(dec.strictness())).min())
    return DecompositionReport(mins, residual, injectivity, scale, tol)


def uniform_semispectral(labels, dim: int) -> AtomicSFM:
    """``E0(atom) = I/M``: the simplest normalized positive SFM on the atoms."""
    M = len(labels)
    return AtomicSFM(tuple(labels), np.broadcast_to(np.eye(dim) / M, (M, dim, dim)).copy())


def strictify(E: AtomicSFM, dec: PositiveDecomposition | None = None, eps: float = 0.1,
              E0: AtomicSFM | None = None, alpha=None, rank_cutoff: float = DEFAULT_RANK_CUTOFF,
              tol: float = DEFAULT_TOL) -> PositiveDecomposition:
    """Decomposition with ``sum_k E^(k)_Omega >= eps I``.

    Uses ``E = (E + eps E0) - eps E0``: the shifted SFM is decomposed and
    ``eps E0`` joins the negative real part.  ``dec`` only fixes the expected
    shape; its parts are not reused.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if dec is not None and (dec.dim != E.dim or dec.labels != E.labels):
        raise DimensionError("decomposition does not match the SFM")
    if E0 is None:
        E0 = uniform_semispectral(E.labels, E.dim)
    if E0.dim != E.dim or E0.labels != E.labels:
        raise DimensionError("E0 does not match the SFM")
    if not E0.is_positive(tol):
        raise ValueError("E0 must be a positive SFM")
    if np.abs(E0.value() - np.eye(E.dim)).max() > tol:
        raise ValueError("E0 must be normalized, E0(Omega) = I")
    shifted = decompose(E + eps * E0, alpha, rank_cutoff, tol)
    p = shifted.parts
    parts = (p[0], p[1], p[2] + eps * E0, p[3])
    return PositiveDecomposition(parts, shifted.scalings, shifted.mu, None)


def positive_frames(part: AtomicSFM, alpha=None, rank_cutoff: float = DEFAULT_RANK_CUTOFF,
                    tol: float = DEFAULT_TOL) -> tuple:
    """``d``-vectors of a positive SFM, one array per atom."""
    s = symmetric_pipeline(part, alpha, rank_cutoff, tol)
    scale = max(1.0, float(np.abs(part.forms).max()))
    leak = max((float(np.sum(np.abs(v) ** 2)) for v in s.family.negative), default=0.0)
    if leak > tol * scale:
        raise ValueError(f"SFM is not positive (negative mass {leak:.3e})")
    return s.family.positive
