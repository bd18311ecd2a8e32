"""Dense linear algebra over quaternions and dual quaternions.

Array conventions (float64 throughout):

* quaternion matrix  -- shape ``(m, n, 4)``, components ordered (w, x, y, z)
* quaternion vector  -- shape ``(n, 4)``
* dual quaternion matrix -- shape ``(m, n, 8)``: standard part in ``[..., :4]``,
  dual part in ``[..., 4:]``
* dual quaternion vector -- shape ``(n, 8)``

A quaternion matrix ``A`` expands to the real matrix ``real_expand(A)`` of
shape ``(4m, 4n)``; the expansion is a ring homomorphism, which is what lets
ordinary real solvers handle quaternion linear systems.
"""

from __future__ import annotations

import numpy as np

from .algebra import DualQuaternion, NotAppreciableError

# Relative cutoff for singular values when ranking / solving.
RANK_TOL = 1e-10

# A linear system counts as consistent when the least-squares residual is
# below SOLVE_TOL * (1 + |b|).
SOLVE_TOL = 1e-8

# Component permutation and sign pattern of the left-multiplication real
# representation; row r, block-column c holds sign[r][c] * A[comp[r][c]].
_EXPAND_COMP = ((0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0))
_EXPAND_SIGN = ((1.0, -1.0, -1.0, -1.0),
                (1.0, 1.0, -1.0, 1.0),
                (1.0, 1.0, 1.0, -1.0),
                (1.0, -1.0, 1.0, 1.0))

# Hamilton product as component sums: (a b)_r = sum_c sign[r][c] * a_c * b_comp[r][c].
# Same permutations as the expansion; the signs ride on the left factor's index.
_PROD_SIGN = ((1.0, -1.0, -1.0, -1.0),
              (1.0, 1.0, 1.0, -1.0),
              (1.0, -1.0, 1.0, 1.0),
              (1.0, 1.0, -1.0, 1.0))


class ShapeMismatchError(ValueError):
    """Raised when operand shapes are incompatible."""


def _check_qmat(A: np.ndarray, name: str = "A") -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 3 or A.shape[2] != 4:
        raise ShapeMismatchError(f"{name}: expected shape (m, n, 4), got {A.shape}")
    return A


def _check_dqmat(A: np.ndarray, name: str = "A") -> np.ndarray:
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 3 or A.shape[2] != 8:
        raise ShapeMismatchError(f"{name}: expected shape (m, n, 8), got {A.shape}")
    return A


# ---------------------------------------------------------------------------
# Quaternion arrays
# ---------------------------------------------------------------------------

def qconj(a: np.ndarray) -> np.ndarray:
    """Entrywise quaternion conjugate of an array with trailing axis 4."""
    out = np.array(a, dtype=np.float64, copy=True)
    out[..., 1:] *= -1.0
    return out


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcasted entrywise Hamilton product of arrays with trailing axis 4."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    aw, ax, ay, az = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    bw, bx, by, bz = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ], axis=-1)


def qmat_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Quaternion matrix product, (m,n,4) @ (n,k,4) -> (m,k,4)."""
    A = _check_qmat(A)
    B = _check_qmat(B, "B")
    if A.shape[1] != B.shape[0]:
        raise ShapeMismatchError(f"inner dimensions differ: {A.shape} vs {B.shape}")
    cols = []
    for comp, sign in zip(_EXPAND_COMP, _PROD_SIGN):
        Bp = B[:, :, comp] * np.asarray(sign)
        cols.append(np.einsum("isc,skc->ik", A, Bp))
    return np.stack(cols, axis=-1)


def qmat_conj_transpose(A: np.ndarray) -> np.ndarray:
    A = _check_qmat(A)
    return qconj(A).transpose(1, 0, 2)


def qmat_eye(n: int) -> np.ndarray:
    out = np.zeros((n, n, 4))
    out[np.arange(n), np.arange(n), 0] = 1.0
    return out


def qmat_from_scalars(entries) -> np.ndarray:
    """Build a (m, n, 4) array from nested lists of Quaternion values."""
    return np.array([[q.to_array() for q in row] for row in entries])


# ---------------------------------------------------------------------------
# Real expansion
# ---------------------------------------------------------------------------

def real_expand(A: np.ndarray) -> np.ndarray:
    """Real representation of a quaternion matrix, shape (4m, 4n).

    Block layout (A_c the component matrices):

        [ A0 -A1 -A2 -A3 ]
        [ A1  A0 -A3  A2 ]
        [ A2  A3  A0 -A1 ]
        [ A3 -A2  A1  A0 ]

    Satisfies real_expand(A @ B) == real_expand(A) @ real_expand(B) and
    real_expand(A*) == real_expand(A).T.
    """
    A = _check_qmat(A)
    return np.block([[s * A[:, :, c] for c, s in zip(comp, sign)]
                     for comp, sign in zip(_EXPAND_COMP, _EXPAND_SIGN)])


def expand_vector(b: np.ndarray) -> np.ndarray:
    """First block column of the real representation: (m,4) -> (4m,)."""
    b = np.asarray(b, dtype=np.float64)
    if b.ndim != 2 or b.shape[1] != 4:
        raise ShapeMismatchError(f"expected shape (m, 4), got {b.shape}")
    return b.T.reshape(-1)


def unexpand_vector(v: np.ndarray) -> np.ndarray:
    """Inverse of `expand_vector`: (4n,) -> (n, 4)."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] % 4:
        raise ShapeMismatchError(f"expected flat length divisible by 4, got {v.shape}")
    return v.reshape(4, -1).T


class QuatLeastSquares:
    """Factored minimum-norm least-squares solver for one quaternion matrix.

    Computes the SVD of the real expansion once so that several right-hand
    sides can be solved cheaply (the two-stage Laplacian solves reuse it).
    """

    def __init__(self, A: np.ndarray, tol: float = RANK_TOL):
        A = _check_qmat(A)
        self.m, self.n = A.shape[:2]
        R = real_expand(A)
        if min(R.shape) == 0:
            self._u = np.zeros((R.shape[0], 0))
            self._s = np.zeros(0)
            self._vt = np.zeros((0, R.shape[1]))
            self.rank = 0
            return
        u, s, vt = np.linalg.svd(R, full_matrices=False)
        keep = s > tol * s[0] if s[0] > 0 else np.zeros_like(s, dtype=bool)
        self._u = u[:, keep]
        self._s = s[keep]
        self._vt = vt[keep]
        self.rank = int(np.count_nonzero(keep))

    @property
    def full_column_rank(self) -> bool:
        return self.rank == 4 * self.n

    def solve(self, b: np.ndarray) -> tuple[np.ndarray, float]:
        """Minimum-norm least-squares solution of A x = b.

        Args:
            b: right-hand side, shape (m, 4).

        Returns:
            (x, residual) with x of shape (n, 4) and residual = |A x - b|
            over all real components.
        """
        rv = expand_vector(b)
        coeff = self._u.T @ rv / self._s if self._s.size else np.zeros(0)
        x = self._vt.T @ coeff
        residual = float(np.linalg.norm(rv - self._u @ (coeff * self._s)))
        return unexpand_vector(x) if self.n else np.zeros((0, 4)), residual


def solve_least_squares(A: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, float]:
    """Minimum-norm least-squares solution of the quaternion system A x = b.

    Returns (x, residual); the system is consistent when
    residual <= SOLVE_TOL * (1 + |b|).
    """
    A = _check_qmat(A)
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (A.shape[0], 4):
        raise ShapeMismatchError(f"b has shape {b.shape}, expected ({A.shape[0]}, 4)")
    return QuatLeastSquares(A).solve(b)


def is_consistent(residual: float, b: np.ndarray) -> bool:
    return residual <= SOLVE_TOL * (1.0 + float(np.linalg.norm(b)))


def rank(A: np.ndarray, tol: float = RANK_TOL) -> int:
    """Quaternion rank: real rank of the expansion divided by four."""
    A = _check_qmat(A)
    if A.size == 0:
        return 0
    s = np.linalg.svd(real_expand(A), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    real_rank = int(np.count_nonzero(s > tol * s[0]))
    return int(round(real_rank / 4))


# ---------------------------------------------------------------------------
# Dual quaternion arrays
# ---------------------------------------------------------------------------

def dq_standard(M: np.ndarray) -> np.ndarray:
    return np.asarray(M, dtype=np.float64)[..., :4]


def dq_dual(M: np.ndarray) -> np.ndarray:
    return np.asarray(M, dtype=np.float64)[..., 4:]


def dq_join(s: np.ndarray, d: np.ndarray) -> np.ndarray:
    return np.concatenate([s, d], axis=-1)


def dqconj(a: np.ndarray) -> np.ndarray:
    """Entrywise conjugate of an array with trailing axis 8."""
    out = np.array(a, dtype=np.float64, copy=True)
    out[..., 1:4] *= -1.0
    out[..., 5:] *= -1.0
    return out


def dqmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcasted entrywise dual quaternion product of arrays with trailing axis 8."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    s = qmul(a[..., :4], b[..., :4])
    d = qmul(a[..., :4], b[..., 4:]) + qmul(a[..., 4:], b[..., :4])
    return np.concatenate([s, d], axis=-1)


def dqinv(a: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Entrywise inverse; every entry must be appreciable."""
    a = np.asarray(a, dtype=np.float64)
    s, d = a[..., :4], a[..., 4:]
    n2 = np.sum(s * s, axis=-1, keepdims=True)
    if np.any(n2 <= tol ** 2):
        raise NotAppreciableError("entrywise inverse requires appreciable entries")
    si = qconj(s) / n2
    return np.concatenate([si, -qmul(qmul(si, d), si)], axis=-1)


def dqmat_mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Dual quaternion matrix product, (m,n,8) @ (n,k,8) -> (m,k,8)."""
    A = _check_dqmat(A)
    B = _check_dqmat(B, "B")
    if A.shape[1] != B.shape[0]:
        raise ShapeMismatchError(f"inner dimensions differ: {A.shape} vs {B.shape}")
    s = qmat_mul(A[..., :4], B[..., :4])
    d = qmat_mul(A[..., :4], B[..., 4:]) + qmat_mul(A[..., 4:], B[..., :4])
    return np.concatenate([s, d], axis=-1)


def dqmat_conj_transpose(A: np.ndarray) -> np.ndarray:
    A = _check_dqmat(A)
    return dqconj(A).transpose(1, 0, 2)


def dqmat_apply(A: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Matrix-vector product, (m,n,8) @ (n,8) -> (m,8)."""
    A = _check_dqmat(A)
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (A.shape[1], 8):
        raise ShapeMismatchError(f"vector has shape {v.shape}, expected ({A.shape[1]}, 8)")
    return dqmat_mul(A, v[:, None, :])[:, 0, :]


def dqmat_eye(n: int) -> np.ndarray:
    out = np.zeros((n, n, 8))
    out[np.arange(n), np.arange(n), 0] = 1.0
    return out


def dqmat_from_scalars(entries) -> np.ndarray:
    """Build a (m, n, 8) array from nested lists of DualQuaternion values."""
    return np.array([[q.to_array() for q in row] for row in entries])


def dqvec_from_scalars(entries) -> np.ndarray:
    return np.array([q.to_array() for q in entries])


def dqvec_to_scalars(v: np.ndarray) -> list[DualQuaternion]:
    return [DualQuaternion.from_array(row) for row in np.asarray(v, dtype=np.float64)]


def fr_norm(M: np.ndarray) -> float:
    """Frobenius norm over every real component (works for any of the array kinds)."""
    return float(np.linalg.norm(np.asarray(M, dtype=np.float64)))


__all__ = [
    "RANK_TOL", "SOLVE_TOL", "ShapeMismatchError",
    "qconj", "qmul", "qmat_mul", "qmat_conj_transpose", "qmat_eye",
    "qmat_from_scalars", "real_expand", "expand_vector", "unexpand_vector",
    "QuatLeastSquares", "solve_least_squares", "is_consistent", "rank",
    "dq_standard", "dq_dual", "dq_join", "dqconj", "dqmul", "dqinv",
    "dqmat_mul", "dqmat_conj_transpose", "dqmat_apply", "dqmat_eye",
    "dqmat_from_scalars", "dqvec_from_scalars", "dqvec_to_scalars", "fr_norm",
]
