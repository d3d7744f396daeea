"""Fused per-run filter loop.

One IMU tick = Riccati predict, optional barometer correct, covariance
symmetrization, then the SO(3) update fed with the freshest tilt estimate.
This is the hot path of the Monte Carlo harness; it reuses the same jitted
step primitives as the module-level APIs, so the fallback numpy path
(BAROATT_DISABLE_NUMBA=1) executes identical arithmetic.
"""

import numpy as np

from ._accel import njit
from .attitude import _correction
from .geom3 import exp_so3
from .riccati import _correct, _predict


@njit(cache=True)
def filter_run(imu_a, imu_w, baro_step, baro_y, mag_m, mag_avail,
               xhat0, P0, Rhat0, Q, M, T, g, kz, km, m_I, joseph, track_spd):
    """
    Run the cascaded observer over N IMU ticks.

    baro_step maps barometer samples to the tick index that consumes them
    (strictly increasing). Returns the state and attitude series (length
    N + 1 including initial conditions), the per-tick minimum eigenvalue of P
    and Frobenius SO(3) defect of Rhat (NaN when track_spd is off), the final
    covariance, and the number of corrections applied.
    """
    N = imu_a.shape[0]
    xs = np.empty((N + 1, 5))
    Rs = np.empty((N + 1, 3, 3))
    p_min_eig = np.full(N, np.nan)
    r_defect = np.full(N, np.nan)
    x = xhat0.copy()
    P = P0.copy()
    R = Rhat0.copy()
    xs[0] = x
    Rs[0] = R
    eye3 = np.eye(3)
    jb = 0
    for k in range(N):
        x, P = _predict(x, P, imu_a[k], imu_w[k], Q, T, g)
        if jb < baro_step.shape[0] and baro_step[jb] == k:
            x, P = _correct(x, P, baro_y[jb], M, joseph)
            jb += 1
        P = 0.5 * (P + P.T)
        zhat = x[2:5].copy()
        sig = _correction(R, zhat, mag_m[k], kz, km, m_I, mag_avail[k])
        R = R @ exp_so3(T * (imu_w[k] - R.T @ sig))
        xs[k + 1] = x
        Rs[k + 1] = R
        if track_spd:
            p_min_eig[k] = np.linalg.eigvalsh(P)[0]
            D = R.T @ R - eye3
            r_defect[k] = np.sqrt(np.sum(D * D))
    return xs, Rs, p_min_eig, r_defect, P, jb
