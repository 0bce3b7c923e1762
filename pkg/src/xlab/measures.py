"""Entanglement and structure measures.

Concurrence (general and X-form), purity, the anti-X measure, partial
trace / partial transpose, the rescaled-negativity measure for 2x3, and
the maximally-entangled-mixed-state boundary curves.
"""

from __future__ import annotations

import math

import numpy as np

from . import linalg, states
from .errors import DimensionError, DomainError
from .states import DensityMatrix

_SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SPIN_FLIP = np.kron(_SIGMA2, _SIGMA2)

# Anti-X positions of the two-qubit X pattern (upper triangle).
_ANTI_X_UPPER = [(0, 1), (0, 2), (1, 3), (2, 3)]


def _as_mat(rho) -> np.ndarray:
    return rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def _require_dims(rho: DensityMatrix, dims: tuple[int, ...], what: str):
    if tuple(rho.dims) != dims:
        raise DimensionError(f"{what} requires dims {list(dims)}, got {list(rho.dims)}")


def purity(rho) -> float:
    """tr(rho^2); ranges from 1/n (maximally mixed) to 1 (pure)."""
    m = _as_mat(rho)
    return float(np.sum(np.abs(m) ** 2))


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit state.

    Uses the Hermitian route: descending eigenvalues lam_k of
    R = sqrt(sqrt(rho) rho~ sqrt(rho)) with the spin-flipped
    rho~ = (s2 x s2) rho* (s2 x s2); C = max(0, lam1 - lam2 - lam3 - lam4).
    """
    _require_dims(rho, (2, 2), "concurrence")
    s = linalg.sqrt_psd(rho.mat)
    # The eigenvalues of R are the singular values of sqrt(rho) sqrt(rho~):
    # (A A')^(1/2) with A = s st.  Computing them by SVD keeps the small
    # lam_k accurate to ~eps absolute; squaring into s rho~ s and taking an
    # eigenvalue square root would blow eps-level noise up to ~sqrt(eps).
    st = _SPIN_FLIP @ s.conj() @ _SPIN_FLIP
    lam = np.linalg.svd(s @ st, compute_uv=False)
    c = lam[0] - lam[1] - lam[2] - lam[3]
    if c < -1e-9:
        return 0.0
    return float(max(0.0, c))


def anti_x_measure(rho) -> float:
    """How far a two-qubit state is from X form, normalized to [0, 1].

    Four times the summed square magnitudes of the unique anti-X elements;
    exactly zero iff the state is an X state.
    """
    m = _as_mat(rho)
    if m.shape != (4, 4):
        raise DimensionError(f"anti-X measure needs a 4x4 matrix, got {m.shape}")
    return float(4.0 * sum(abs(m[i, j]) ** 2 for i, j in _ANTI_X_UPPER))


def concurrence_x(rho, tol: float = 1e-10) -> float:
    """Closed-form concurrence for a two-qubit X state.

    2 max(0, |rho32| - sqrt(rho44 rho11), |rho41| - sqrt(rho33 rho22)).
    Rejects input whose anti-X measure exceeds `tol`.
    """
    m = _as_mat(rho)
    a = anti_x_measure(m)
    if a > tol:
        raise DomainError(f"state is not X-shaped: anti-X measure {a:.3e} > {tol}")
    d = np.abs(np.diag(m).real)
    c = 2.0 * max(
        0.0,
        abs(m[2, 1]) - math.sqrt(d[3] * d[0]),
        abs(m[3, 0]) - math.sqrt(d[2] * d[1]),
    )
    return float(c)


def _digits(index: int, dims) -> tuple[int, ...]:
    out = []
    for d in reversed(dims):
        out.append(index % d)
        index //= d
    return tuple(reversed(out))


def partial_trace(rho: DensityMatrix, keep: int) -> DensityMatrix:
    """Reduction to subsystem `keep` (1-based), tracing out the others."""
    dims = rho.dims
    if not 1 <= keep <= len(dims):
        raise DimensionError(f"subsystem index {keep} invalid for dims {list(dims)}")
    m = keep - 1
    d = dims[m]
    t = rho.mat.reshape(dims + dims)
    # Trace over every axis pair except the kept one.
    for sub in range(len(dims) - 1, -1, -1):
        if sub == m:
            continue
        t = np.trace(t, axis1=sub, axis2=sub + (t.ndim // 2))
    return DensityMatrix(t.reshape(d, d), (d,) if d >= 2 else (d,))


def partial_transpose(rho: DensityMatrix, sub: int) -> np.ndarray:
    """Partial transpose over subsystem `sub` (1 or 2) of a bipartite state.

    Returns a plain Hermitian matrix: the result is generally not PSD.
    """
    dims = rho.dims
    if len(dims) != 2:
        raise DimensionError(f"partial transpose needs bipartite dims, got {list(dims)}")
    if sub not in (1, 2):
        raise DimensionError(f"subsystem must be 1 or 2, got {sub}")
    dA, dB = dims
    t = rho.mat.reshape(dA, dB, dA, dB)
    if sub == 1:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(dA * dB, dA * dB)


def negativity_e(rho: DensityMatrix) -> float:
    """Rescaled negativity for 2x3: ||rho^T1||_1 - 1, clamped to [0, 1].

    Normalized so a maximally entangled 2x3 state scores exactly 1.
    """
    _require_dims(rho, (2, 3), "negativity_e")
    e = linalg.trace_norm(partial_transpose(rho, 1)) - 1.0
    if e < -1e-9:
        return 0.0
    return float(min(max(e, 0.0), 1.0 + 1e-9))


def mems_boundary_2x2(P: float) -> float:
    """Maximal two-qubit concurrence at purity P (piecewise closed form)."""
    if not (0.25 - 1e-12 <= P <= 1.0 + 1e-12):
        raise DomainError(f"purity {P} outside [1/4, 1]")
    P = min(max(P, 0.25), 1.0)
    if P <= 1.0 / 3.0:
        return 0.0
    if P <= 5.0 / 9.0:
        return math.sqrt(2.0 * (P - 1.0 / 3.0))
    return (1.0 + math.sqrt(2.0 * P - 1.0)) / 2.0


class _Boundary2x3:
    """Tabulated E_T1-vs-purity curve of the 2x3 MEMS family.

    No closed form exists; the curve is sampled once on a uniform grid and
    linearly interpolated afterwards.
    """

    GRID_POINTS = 1000

    def __init__(self):
        self._grid = None
        self._vals = None

    def _build(self):
        ps = np.linspace(1.0 / 6.0, 1.0, self.GRID_POINTS)
        vals = np.array([negativity_e(states.mems_2x3(p)) for p in ps])
        self._grid, self._vals = ps, vals

    def __call__(self, P: float) -> float:
        if not (1.0 / 6.0 - 1e-12 <= P <= 1.0 + 1e-12):
            raise DomainError(f"purity {P} outside [1/6, 1]")
        if self._grid is None:
            self._build()
        P = min(max(P, 1.0 / 6.0), 1.0)
        return float(np.interp(P, self._grid, self._vals))


mems_boundary_2x3 = _Boundary2x3()


def pure_companion(C: float) -> DensityMatrix:
    """Pure two-qubit state with the given concurrence (theta state)."""
    if not -1e-12 <= C <= 1.0 + 1e-12:
        raise DomainError(f"concurrence {C} outside [0, 1]")
    C = min(max(C, 0.0), 1.0)
    return states.theta_state(states.PHI, 0.5 * math.asin(C), 0.0)


def mems_companion(C: float) -> DensityMatrix:
    """MEMS with the given concurrence (inverts the boundary curve).

    Branch selection pivots at C = 2/3, the concurrence at the P = 5/9
    branch point of the boundary.
    """
    if not -1e-12 <= C <= 1.0 + 1e-12:
        raise DomainError(f"concurrence {C} outside [0, 1]")
    C = min(max(C, 0.0), 1.0)
    if C <= 2.0 / 3.0:
        P = 0.5 * C * C + 1.0 / 3.0
    else:
        P = 0.5 * ((2.0 * C - 1.0) ** 2 + 1.0)
    return states.mems_2x2(P)
