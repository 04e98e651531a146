"""Spectral W-dilations in direct-integral form.

``K`` is the direct sum over atoms ``j`` and parts ``k`` of ``C^{n_k(j)}``.
``F(X)`` keeps the blocks of atoms in ``X``, ``W`` multiplies part ``k`` by
``i^k`` and ``J`` stacks the coordinate maps ``phi -> <d_r | phi>``.  Only the
block coordinates are stored, so ``W^4 = I`` and ``WF(X) = F(X)W`` hold by
construction.  The base-measure weight is already inside the rows, so ``K``
carries the plain Euclidean inner product.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decomposition import PHASES, PositiveDecomposition, positive_frames
from .linalg import DEFAULT_RANK_CUTOFF, DEFAULT_TOL, DimensionError
from .measure import AtomicSFM


@dataclass(frozen=True, eq=False)
class Dilation:
    """``blocks[j][k]`` is the ``n_k(w_j) x N`` matrix of ``J`` into block (j, k)."""

    dim: int
    labels: tuple
    mu: np.ndarray
    blocks: tuple

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        if len(self.blocks) != len(labels):
            raise DimensionError("one block list per atom is required")
        blocks = []
        for j, row in enumerate(self.blocks):
            if len(row) != 4:
                raise DimensionError(f"atom {labels[j]!r} needs four blocks")
            fixed = []
            for b in row:
                b = np.asarray(b, dtype=complex).reshape(-1, self.dim)
                b.setflags(write=False)
                fixed.append(b)
            blocks.append(tuple(fixed))
        mu = np.asarray(self.mu, dtype=float)
        if mu.shape != (len(labels),):
            raise DimensionError("mu needs one weight per atom")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "blocks", tuple(blocks))
        object.__setattr__(self, "mu", mu)

    @property
    def dims(self) -> np.ndarray:
        """Table ``n_k(w_j)``, shape (M, 4)."""
        return np.array([[b.shape[0] for b in row] for row in self.blocks], dtype=int)

    @property
    def k_dim(self) -> int:
        return int(self.dims.sum())

    def _offsets(self):
        off = 0
        for j, row in enumerate(self.blocks):
            for k, b in enumerate(row):
                yield j, k, off, off + b.shape[0]
                off += b.shape[0]

    def jmatrix(self) -> np.ndarray:
        """Dense ``dim K x N`` matrix of ``J``."""
        rows = [b for row in self.blocks for b in row]
        if not rows:
            return np.zeros((0, self.dim), dtype=complex)
        return np.vstack(rows)

    def atom_index(self, label) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise KeyError(f"unknown atom label {label!r}") from None


def build_dilation(dec: PositiveDecomposition, frames=None, mu=None, alpha=None,
                   rank_cutoff: float = DEFAULT_RANK_CUTOFF, tol: float = DEFAULT_TOL) -> Dilation:
    """Dilation whose associated decomposition is ``dec``.

    ``frames[k][j]`` are ``d``-vectors with ``sum_r |d_r><d_r| = dec.parts[k](atom j)``;
    when omitted they come from ``dec.frames`` or are recomputed by running
    each positive part through the splitting pipeline.
    """
    if frames is None:
        frames = dec.frames
    if frames is None:
        frames = tuple(positive_frames(p, alpha, rank_cutoff, tol) for p in dec.parts)
    if len(frames) != 4:
        raise DimensionError("need one frame family per part")
    M, N = len(dec.labels), dec.dim
    for fam in frames:
        if len(fam) != M:
            raise DimensionError("frame family does not cover every atom")
    if mu is None:
        mu = dec.mu.sum(axis=0) if dec.mu is not None else np.ones(M)
    blocks = []
    for j in range(M):
        row = []
        for k in range(4):
            v = np.asarray(frames[k][j], dtype=complex).reshape(-1, N)
            keep = np.linalg.norm(v, axis=1) > 0
            row.append(v[keep].conj())
        blocks.append(tuple(row))
    return Dilation(N, dec.labels, np.asarray(mu, dtype=float), tuple(blocks))


def _check_vector(d: Dilation, v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.shape != (d.k_dim,):
        raise DimensionError(f"K-vector must have length {d.k_dim}, got {v.shape}")
    return v


def apply_J(d: Dilation, phi) -> np.ndarray:
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (d.dim,):
        raise DimensionError(f"vector must have length {d.dim}")
    return d.jmatrix() @ phi


def apply_F(d: Dilation, X, v) -> np.ndarray:
    """``F(X) v``: zero every block whose atom is outside ``X``."""
    v = _check_vector(d, v)
    keep = {d.atom_index(x) for x in X}
    out = np.zeros_like(v)
    for j, _, a, b in d._offsets():
        if j in keep:
            out[a:b] = v[a:b]
    return out


def apply_W(d: Dilation, v, power: int = 1) -> np.ndarray:
    """``W^power v``; block ``(j, k)`` is multiplied by ``i^(k * power)``."""
    v = _check_vector(d, v)
    out = v.copy()
    for _, k, a, b in d._offsets():
        ph = PHASES[(k * power) % 4]
        if ph != 1:
            out[a:b] = ph * v[a:b]
    return out


def k_inner(u, v) -> complex:
    return complex(np.vdot(u, v))


def dilation_form(d: Dilation, j: int) -> np.ndarray:
    """Matrix ``<J e_m | F({w_j}) W J e_n>`` assembled block by block."""
    out = np.zeros((d.dim, d.dim), dtype=complex)
    for k, b in enumerate(d.blocks[j]):
        out += PHASES[k] * (b.conj().T @ b)
    return out


@dataclass
class DilationReport:
    residual: float
    residuals: np.ndarray  # per atom
    commutation_ok: bool
    block_ranks: np.ndarray  # (M, 4)
    dims: np.ndarray  # (M, 4)
    scale: float
    tol: float

    @property
    def identity_ok(self) -> bool:
        return self.residual <= self.tol * self.scale

    @property
    def density_ok(self) -> bool:
        return bool(np.all(self.block_ranks == self.dims))

    @property
    def passed(self) -> bool:
        return self.identity_ok and self.commutation_ok and self.density_ok

    def lines(self) -> list:
        return [
            f"(1) dilation identity residual: {self.residual:.3e} "
            f"(limit {self.tol * self.scale:.3e}) {'ok' if self.identity_ok else 'FAIL'}",
            f"(2) W F(X) = F(X) W: {'ok (structural)' if self.commutation_ok else 'FAIL'}",
            f"(3) blocks of full row rank: {'ok' if self.density_ok else 'FAIL'} "
            f"(dim K = {int(self.dims.sum())})",
        ]


def verify_dilation(d: Dilation, E: AtomicSFM, tol: float = DEFAULT_TOL) -> DilationReport:
    if d.dim != E.dim or d.labels != E.labels:
        raise DimensionError("dilation does not match the SFM")
    J = d.jmatrix()
    residuals = np.empty(E.n_atoms)
    for j, label in enumerate(E.labels):
        # literal operator composition on the basis vectors
        FWJ = np.column_stack([apply_F(d, [label], apply_W(d, J[:, n])) for n in range(d.dim)]) \
            if d.k_dim else np.zeros((0, d.dim))
        G = J.conj().T @ FWJ
        residuals[j] = float(np.abs(G - E.forms[j]).max())
    probe = np.arange(1, d.k_dim + 1) * (1 + 0.5j)
    commutes = all(np.array_equal(apply_W(d, apply_F(d, [x], probe)),
                                  apply_F(d, [x], apply_W(d, probe))) for x in d.labels)
    commutes = commutes and np.array_equal(apply_W(d, probe, 4), probe)
    ranks = np.zeros((E.n_atoms, 4), dtype=int)
    for j, row in enumerate(d.blocks):
        for k, b in enumerate(row):
            if b.shape[0]:
                s = np.linalg.svd(b, compute_uv=False)
                ranks[j, k] = int(np.sum(s > tol * max(1.0, s[0])))
    scale = 1.0 + float(np.abs(E.forms).max())
    return DilationReport(float(residuals.max()), residuals, bool(commutes), ranks,
                          d.dims, scale, tol)


def associated_decomposition(d: Dilation) -> PositiveDecomposition:
    """Read the four positive parts off the eigenspaces of ``W``."""
    parts = []
    for k in range(4):
        forms = np.array([row[k].conj().T @ row[k] for row in d.blocks])
        parts.append(AtomicSFM(d.labels, forms))
    frames = tuple(tuple(row[k].conj() for row in d.blocks) for k in range(4))
    return PositiveDecomposition(tuple(parts), frames=frames)


def _decompositions_agree(a: PositiveDecomposition, b: PositiveDecomposition, tol: float) -> bool:
    scale = 1.0 + max(max(float(np.abs(p.forms).max()) for p in a.parts),
                      max(float(np.abs(p.forms).max()) for p in b.parts))
    return all(float(np.abs(pa.forms - pb.forms).max()) <= tol * scale
               for pa, pb in zip(a.parts, b.parts))


def equivalent(d1: Dilation, d2: Dilation, tol: float = DEFAULT_TOL):
    """Unitary equivalence test.

    Returns ``(flag, U)`` where ``U[j][k]`` maps block ``(j, k)`` of ``d1`` onto
    block ``(j, k)`` of ``d2`` (so ``U J1 = J2``), or ``(False, None)``.  The
    flag also requires each recovered block to be unitary within ``tol``.
    """
    if d1.dim != d2.dim or d1.labels != d2.labels:
        raise DimensionError("dilations belong to different SFM shapes")
    if not _decompositions_agree(associated_decomposition(d1), associated_decomposition(d2), tol):
        return False, None
    U = []
    for row1, row2 in zip(d1.blocks, d2.blocks):
        urow = []
        for b1, b2 in zip(row1, row2):
            if b1.shape[0] != b2.shape[0]:
                return False, None
            n = b1.shape[0]
            if n == 0:
                urow.append(np.zeros((0, 0), dtype=complex))
                continue
            # least squares for U b1 = b2, solved on transposes
            Ut, *_ = np.linalg.lstsq(b1.T, b2.T, rcond=None)
            Ub = Ut.T
            scale = max(1.0, float(np.abs(b2).max()))
            if (np.abs(Ub.conj().T @ Ub - np.eye(n)).max() > tol
                    or np.abs(Ub @ b1 - b2).max() > tol * scale):
                return False, None
            urow.append(Ub)
        U.append(tuple(urow))
    return True, tuple(U)
