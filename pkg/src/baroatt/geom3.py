"""Minimal 3D geometry kernel.

Vectors are numpy arrays of shape (3,), matrices of shape (3, 3). Rotation
matrices are plain arrays satisfying ``R @ R.T == I`` and ``det(R) == 1``
within 1e-9; :func:`check_rotation` enforces that contract. Long products
of rotations must be repaired with :func:`reorthonormalize`.

The functions used inside hot filter loops (:func:`skew`, :func:`exp_so3`,
:func:`proj_reg`) are numba-compiled, see :mod:`baroatt._accel`.
"""

import warnings

import numpy as np

from ._accel import njit

ROTATION_TOL = 1e-9
_GIMBAL_MARGIN = 1e-6


@njit(cache=True)
def skew(u):
    """
    Skew-symmetric matrix S of a vector u, such that S @ v == cross(u, v).

    Parameters
    ----------
    u : ndarray, shape (3,)

    Returns
    -------
    ndarray, shape (3, 3)
    """
    return np.array(
        [
            [0.0, -u[2], u[1]],
            [u[2], 0.0, -u[0]],
            [-u[1], u[0], 0.0],
        ]
    )


def vex(S, tol=1e-9):
    """
    Inverse of :func:`skew`: recover u from an antisymmetric matrix.

    Parameters
    ----------
    S : ndarray, shape (3, 3)
        Antisymmetric within `tol` (largest entry of S + S.T).
    tol : float

    Returns
    -------
    ndarray, shape (3,)

    Raises
    ------
    ValueError
        If S is not antisymmetric within `tol`.
    """
    S = np.asarray(S, dtype=float)
    defect = np.max(np.abs(S + S.T))
    if defect > tol:
        raise ValueError(f"matrix is not antisymmetric (defect {defect:.3e} > {tol:.1e})")
    return np.array([S[2, 1], S[0, 2], S[1, 0]])


@njit(cache=True)
def exp_so3(theta):
    """
    Exponential map R^3 -> SO(3), Rodrigues closed form.

    ``R = I + sin(n)/n * S + (1 - cos(n))/n^2 * S @ S`` with ``S = skew(theta)``
    and ``n = |theta|``. For n < 1e-7 the two coefficients are replaced by
    their 2nd-order Taylor expansions to avoid 0/0.

    Parameters
    ----------
    theta : ndarray, shape (3,)
        Rotation vector (axis * angle), radians.

    Returns
    -------
    ndarray, shape (3, 3)
        Rotation matrix; satisfies d/dt exp_so3(t * theta) = exp_so3(t * theta) @ skew(theta).
    """
    S = skew(theta)
    n2 = theta[0] ** 2 + theta[1] ** 2 + theta[2] ** 2
    n = np.sqrt(n2)
    if n < 1e-7:
        c1 = 1.0 - n2 / 6.0
        c2 = 0.5 - n2 / 24.0
    else:
        c1 = np.sin(n) / n
        c2 = (1.0 - np.cos(n)) / n2
    return np.eye(3) + c1 * S + c2 * (S @ S)


@njit(cache=True)
def proj_reg(u, v):
    """
    Regularized projection of v onto the plane orthogonal to u.

    Computes ``(|u|^2 I - u u^T) v = |u|^2 v - u (u^T v)``. Well defined for
    any u, including u = 0 (returns 0); the output is always orthogonal to u.
    """
    u2 = u[0] ** 2 + u[1] ** 2 + u[2] ** 2
    uv = u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
    return u2 * v - uv * u


def attitude_error(R, Rhat):
    """
    Rotation discrepancy trace(I - R @ Rhat.T); 0 at R == Rhat, 4 at 180 deg.
    """
    return 3.0 - float(np.sum(np.asarray(R) * np.asarray(Rhat)))


def rotation_from_euler_zyx(roll, pitch, yaw):
    """
    Rotation matrix from intrinsic Z-Y-X (yaw-pitch-roll) Euler angles, radians.
    """
    cr, sr = np.cos(roll), np.sin(roll)
    cp, sp = np.cos(pitch), np.sin(pitch)
    cy, sy = np.cos(yaw), np.sin(yaw)
    return np.array(
        [
            [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
            [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
            [-sp, cp * sr, cp * cr],
        ]
    )


def euler_zyx(R):
    """
    Intrinsic Z-Y-X Euler angles (roll, pitch, yaw) of a rotation matrix.

    Unique away from gimbal lock (|pitch| = pi/2). Within 1e-6 rad of lock a
    warning is emitted and the yaw/roll split is resolved by convention
    roll := 0.

    Returns
    -------
    (roll, pitch, yaw) : tuple of float, radians
    """
    R = np.asarray(R, dtype=float)
    pitch = -np.arcsin(np.clip(R[2, 0], -1.0, 1.0))
    if np.pi / 2 - abs(pitch) < _GIMBAL_MARGIN:
        warnings.warn("euler_zyx: pitch within 1e-6 of gimbal lock; using roll := 0")
        return 0.0, float(pitch), float(np.arctan2(-R[0, 1], R[1, 1]))
    roll = np.arctan2(R[2, 1], R[2, 2])
    yaw = np.arctan2(R[1, 0], R[0, 0])
    return float(roll), float(pitch), float(yaw)


def euler_zyx_series(Rs):
    """
    Vectorized euler_zyx over an (n, 3, 3) stack; no gimbal-lock warning.
    """
    Rs = np.asarray(Rs, dtype=float)
    pitch = -np.arcsin(np.clip(Rs[:, 2, 0], -1.0, 1.0))
    roll = np.arctan2(Rs[:, 2, 1], Rs[:, 2, 2])
    yaw = np.arctan2(Rs[:, 1, 0], Rs[:, 0, 0])
    return roll, pitch, yaw


@njit(cache=True)
def _orthonormalize(M):
    # Nearest orthogonal matrix (orthogonal Procrustes); no validity checks.
    U, s, Vt = np.linalg.svd(M)
    return U @ Vt


def reorthonormalize(M):
    """
    Project a near-rotation matrix back onto SO(3).

    Orthogonal Procrustes solution (via SVD); idempotent on valid rotations.

    Raises
    ------
    ValueError
        If the projected matrix has non-positive determinant, i.e. the input
        was not in the proper-rotation basin.
    """
    R = _orthonormalize(np.asarray(M, dtype=float))
    if np.linalg.det(R) <= 0.0:
        raise ValueError("projection onto SO(3) has det <= 0; input too far from a rotation")
    return R


def rotation_defect(R):
    """
    Frobenius norm of R.T @ R - I and deviation of det(R) from 1.
    """
    R = np.asarray(R, dtype=float)
    ortho = np.linalg.norm(R.T @ R - np.eye(3))
    return float(ortho), float(abs(np.linalg.det(R) - 1.0))


def is_rotation(R, tol=ROTATION_TOL):
    """True if R satisfies the rotation-matrix contract within `tol`."""
    ortho, det_dev = rotation_defect(R)
    return ortho <= tol and det_dev <= tol


def check_rotation(R, tol=ROTATION_TOL):
    """Raise ValueError unless R is a rotation matrix within `tol`."""
    ortho, det_dev = rotation_defect(R)
    if ortho > tol or det_dev > tol:
        raise ValueError(
            f"not a rotation matrix: |R'R - I| = {ortho:.3e}, |det - 1| = {det_dev:.3e}"
        )
    return R
