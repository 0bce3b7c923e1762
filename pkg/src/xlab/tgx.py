"""True-generalized-X (TGX) structure for arbitrary multipartite dimensions.

The anti-X positions of a multipartite density matrix are those that land
in the off-diagonals of some single-site reduction; TGX positions are the
rest.  This module computes both masks from the mixed-radix digit rule,
projects states onto TGX form, validates simple maximally entangled basis
(MEB) sets, and carries the built-in MEB catalogs for 2x3, 2x2x2 and 3x3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import measures, states
from .errors import DimensionError, DomainError, RankError
from .states import DensityMatrix


@dataclass(frozen=True)
class ElementMask:
    """Symmetric set of marked (row, col) positions of an n x n matrix."""

    n: int
    marked: frozenset

    def __post_init__(self):
        for i, j in self.marked:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise DimensionError(f"position ({i},{j}) out of range for n={self.n}")
            if (j, i) not in self.marked:
                raise DimensionError(f"mask not symmetric: ({i},{j}) without ({j},{i})")

    def __contains__(self, pos) -> bool:
        return tuple(pos) in self.marked

    def pairs(self) -> list:
        """Sorted 0-based (row, col) list."""
        return sorted(self.marked)

    def to_bool(self) -> np.ndarray:
        out = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.marked:
            out[i, j] = True
        return out

    def to_ascii(self) -> str:
        """Dot/X grid in the paper-style dot notation."""
        b = self.to_bool()
        return "\n".join(" ".join("X" if b[i, j] else "." for j in range(self.n))
                         for i in range(self.n))

    def union(self, other: "ElementMask") -> "ElementMask":
        if self.n != other.n:
            raise DimensionError(f"mask sizes differ: {self.n} vs {other.n}")
        return ElementMask(self.n, self.marked | other.marked)


def _digits(index: int, dims) -> tuple:
    out = []
    for d in reversed(dims):
        out.append(index % d)
        index //= d
    return tuple(reversed(out))


def _check_dims(dims) -> tuple:
    dims = tuple(int(d) for d in dims)
    if len(dims) < 2 or any(d < 2 for d in dims):
        raise DimensionError(f"need at least two subsystems of dimension >= 2, got {list(dims)}")
    return dims


_MASK_CACHE: dict = {}


def anti_x_mask(dims) -> ElementMask:
    """Positions contributing to off-diagonals of some single-site reduction.

    (i, j) is anti-X exactly when the mixed-radix digits of i and j differ
    in exactly one subsystem: tracing out the others then keeps the term
    and places it off-diagonal in that subsystem's reduction.
    """
    dims = _check_dims(dims)
    key = ("anti", dims)
    if key not in _MASK_CACHE:
        n = int(np.prod(dims))
        marked = set()
        for i in range(n):
            di = _digits(i, dims)
            for j in range(n):
                if i == j:
                    continue
                dj = _digits(j, dims)
                if sum(a != b for a, b in zip(di, dj)) == 1:
                    marked.add((i, j))
        _MASK_CACHE[key] = ElementMask(n, frozenset(marked))
    return _MASK_CACHE[key]


def tgx_mask(dims) -> ElementMask:
    """Diagonal plus every off-diagonal position that is not anti-X."""
    dims = _check_dims(dims)
    key = ("tgx", dims)
    if key not in _MASK_CACHE:
        n = int(np.prod(dims))
        anti = anti_x_mask(dims).marked
        marked = {(i, j) for i in range(n) for j in range(n)
                  if i == j or (i, j) not in anti}
        _MASK_CACHE[key] = ElementMask(n, frozenset(marked))
    return _MASK_CACHE[key]


def project_tgx(rho: DensityMatrix) -> DensityMatrix:
    """Zero out the anti-X positions of rho.

    The result is Hermitian with unit trace and diagonal single-site
    reductions, but is NOT guaranteed positive semidefinite; callers that
    need a physical state must check.
    """
    keep = ~anti_x_mask(rho.dims).to_bool()
    return DensityMatrix(rho.mat * keep, rho.dims)


def is_simple_me_state(psi: DensityMatrix, tol: float = 1e-12) -> bool:
    """Is psi a 'simple' maximally entangled pure state?

    Simple: every anti-X matrix element vanishes (within tol).  Maximally
    entangled: each single-site reduction has at least two nonzero
    eigenvalues and they are all equal within tol (maximally mixed on its
    support, which may be a proper subspace).
    """
    if measures.purity(psi) < 1.0 - max(tol, 1e-12):
        raise RankError("input must be a pure state (rank 1)")
    anti = anti_x_mask(psi.dims)
    for i, j in anti.marked:
        if abs(psi.mat[i, j]) > tol:
            return False
    for m in range(1, len(psi.dims) + 1):
        red = measures.partial_trace(psi, m)
        w = np.linalg.eigvalsh(red.mat)
        nz = w[w > max(tol, 1e-12)]
        if len(nz) < 2 or np.max(nz) - np.min(nz) > max(tol, 1e-9):
            return False
    return True


def meb_union_mask(members, dims) -> ElementMask:
    """Union of the nonzero-element footprints of a set of simple ME states."""
    dims = _check_dims(dims)
    n = int(np.prod(dims))
    marked = set()
    for k, psi in enumerate(members):
        if tuple(psi.dims) != dims:
            raise DimensionError(f"member {k} has dims {list(psi.dims)}, expected {list(dims)}")
        if not is_simple_me_state(psi):
            raise DomainError(f"member {k} is not a simple maximally entangled state")
        ii, jj = np.nonzero(np.abs(psi.mat) > 1e-12)
        marked.update(zip(ii.tolist(), jj.tolist()))
    return ElementMask(n, frozenset(marked))


def basis_resolution(members) -> tuple:
    """Best scalar c with c * sum_k psi_k ~= I, and whether it resolves I.

    Returns (factor, is_resolution); is_resolution is True when the
    max-norm residual of c * sum - I is <= 1e-10.  For a (possibly
    overcomplete) projector resolution the factor is n / count.
    """
    members = list(members)
    if not members:
        raise DomainError("need at least one state")
    n = members[0].n
    S = np.zeros((n, n), dtype=complex)
    for k, psi in enumerate(members):
        if psi.n != n:
            raise DimensionError(f"member {k} has size {psi.n}, expected {n}")
        S += psi.mat
    # Least-squares scalar fit of c*S to the identity.
    denom = float(np.sum(np.abs(S) ** 2))
    c = float(np.real(np.trace(S))) / denom if denom > 0 else 0.0
    residual = float(np.max(np.abs(c * S - np.eye(n))))
    return c, residual <= 1e-10


# ---------------------------------------------------------------------------
# Built-in MEB catalogs
# ---------------------------------------------------------------------------

def _pure_from_support(n, dims, support, coeffs) -> DensityMatrix:
    v = np.zeros(n, dtype=complex)
    for idx, c in zip(support, coeffs):
        v[idx] = c
    v /= np.linalg.norm(v)
    return DensityMatrix(np.outer(v, v.conj()), dims)


def meb_basis_2x3(family: str) -> list:
    """Six-state complete MEB in 2x3: the +/- pair for each support pair."""
    if family not in (states.PHI, states.PSI):
        raise DomainError(f"family must be 'phi' or 'psi', got {family!r}")
    out = []
    for index in (1, 2, 3):
        for sign in (+1, -1):
            out.append(states.meb_state_2x3(
                family, index, math.pi / 4, 0.0 if sign > 0 else math.pi))
    return out


# Three-qubit pairwise MEB: each member superposes a basis ket with its
# bitwise complement, so the union footprint is the literal X shape.
_PAIRS_3QUBIT = [(0, 7), (1, 6), (2, 5), (3, 4)]

# Three-qubit four-term MEB: supports of even and odd bit-parity, with the
# four sign patterns that keep the members mutually orthogonal.
_QUAD_SUPPORTS_3QUBIT = [(0, 3, 5, 6), (7, 4, 2, 1)]
_QUAD_SIGNS_3QUBIT = [(1, 1, 1, 1), (1, -1, -1, 1), (1, -1, 1, -1), (1, 1, -1, -1)]


def meb_basis_3qubit_pairs() -> list:
    """Eight-state complete MEB in 2x2x2 with literal-X footprint."""
    out = []
    for a, b in _PAIRS_3QUBIT:
        for sign in (1.0, -1.0):
            out.append(_pure_from_support(8, (2, 2, 2), (a, b), (1.0, sign)))
    return out


def meb_basis_3qubit_quads() -> list:
    """Eight-state complete MEB in 2x2x2 with four-term members."""
    out = []
    for support in _QUAD_SUPPORTS_3QUBIT:
        for signs in _QUAD_SIGNS_3QUBIT:
            out.append(_pure_from_support(8, (2, 2, 2), support, signs))
    return out


# 3x3 overcomplete MEB: six three-term supports; the phase pair (a, b)
# multiplies the second and third kets.
_SUPPORTS_3X3 = [(0, 4, 8), (1, 5, 6), (3, 7, 2), (0, 5, 7), (4, 2, 6), (8, 1, 3)]
_SIGN_PAIRS_3X3 = [(1, 1), (1, -1), (-1, 1), (-1, -1)]


def meb_basis_3x3(a: int = 1, b: int = 1) -> list:
    """Six three-term ME states in 3x3 with relative phases a, b (each +-1)."""
    if a not in (1, -1) or b not in (1, -1):
        raise DomainError(f"phase factors must be +-1, got a={a}, b={b}")
    return [_pure_from_support(9, (3, 3), s, (1.0, float(a), float(b)))
            for s in _SUPPORTS_3X3]


def meb_basis_3x3_full() -> list:
    """All 24 members: the 3x3 family over all four sign pairs (overcomplete)."""
    out = []
    for a, b in _SIGN_PAIRS_3X3:
        out.extend(meb_basis_3x3(a, b))
    return out


def bell_basis() -> list:
    """The four Bell states (the unique simple MEB of 2x2)."""
    return [states.bell_state(fam, sign)
            for fam in (states.PHI, states.PSI) for sign in (+1, -1)]
