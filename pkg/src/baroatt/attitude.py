"""Nonlinear complementary attitude observer on SO(3).

Blends gyro integration with two vector corrections: the tilt estimate from
the Riccati observer (gain k_z) and the magnetometer direction projected
orthogonally to the tilt (gain k_m), so the magnetometer only steers yaw.
The discrete update is exponential-Euler at the IMU period, which keeps the
estimate on SO(3) by construction.
"""

from dataclasses import dataclass, field

import numpy as np

from ._accel import njit
from .geom3 import exp_so3, proj_reg
from .sim import MAG_FIELD_DEFAULT


@dataclass
class AttitudeConfig:
    """Gains and the known inertial magnetic field direction (unit norm)."""

    k_z: float = 80.0
    k_m: float = 25.0
    m_inertial: np.ndarray = field(default_factory=lambda: MAG_FIELD_DEFAULT.copy())

    def __post_init__(self):
        self.m_inertial = np.asarray(self.m_inertial, dtype=float)
        if self.k_z <= 0.0:
            raise ValueError("k_z must be > 0")
        if self.k_m < 0.0:
            raise ValueError("k_m must be >= 0")
        if abs(np.linalg.norm(self.m_inertial) - 1.0) > 1e-6:
            raise ValueError("m_inertial must be a unit vector")
        if np.hypot(self.m_inertial[0], self.m_inertial[1]) < 1e-6:
            raise ValueError("m_inertial must not be parallel to e3 (yaw unobservable)")


@njit(cache=True)
def _correction(Rhat, zhat, m_B, kz, km, m_I, use_mag):
    v = Rhat @ zhat
    sig = kz * np.array([-v[1], v[0], 0.0])  # e3 x (Rhat zhat)
    if use_mag and km > 0.0:
        e3 = np.array([0.0, 0.0, 1.0])
        m_bar_I = proj_reg(e3, m_I)
        m_bar_B = proj_reg(zhat, m_B)
        w = Rhat @ m_bar_B
        sig = sig + km * np.cross(m_bar_I, w)
    return sig


@njit(cache=True)
def _step(Rhat, omega, zhat, m_B, kz, km, m_I, T, use_mag):
    sig = _correction(Rhat, zhat, m_B, kz, km, m_I, use_mag)
    return Rhat @ exp_so3(T * (omega - Rhat.T @ sig))


@njit(cache=True)
def _run_loop(omega, zhat, mag_m, mag_avail, R0, kz, km, m_I, T):
    n = omega.shape[0]
    Rs = np.empty((n + 1, 3, 3))
    R = R0.copy()
    Rs[0] = R
    for k in range(n):
        R = _step(R, omega[k], zhat[k], mag_m[k], kz, km, m_I, T, mag_avail[k])
        Rs[k + 1] = R
    return Rs


def correction(Rhat, zhat, m_B, cfg):
    """
    Innovation vector sigma = k_z (e3 x Rhat zhat) + k_m (m_bar_I x Rhat m_bar_B),
    with m_bar_I / m_bar_B the regularized projections of the magnetic field
    orthogonal to e3 / zhat. Vanishes at the true-state equilibrium; m_B of
    None drops the magnetometer term.
    """
    use_mag = m_B is not None
    m_B_arr = np.zeros(3) if m_B is None else np.asarray(m_B, dtype=float)
    return _correction(np.ascontiguousarray(Rhat, dtype=float),
                       np.asarray(zhat, dtype=float), m_B_arr,
                       float(cfg.k_z), float(cfg.k_m), cfg.m_inertial, use_mag)


def step(Rhat, omega, zhat, m_B, cfg, T):
    """
    One exponential-Euler update Rhat <- Rhat exp_so3(T (omega - Rhat' sigma)).

    Output stays in SO(3) up to roundoff; reduces to pure gyro integration
    when the innovation vanishes.
    """
    use_mag = m_B is not None
    m_B_arr = np.zeros(3) if m_B is None else np.asarray(m_B, dtype=float)
    return _step(np.ascontiguousarray(Rhat, dtype=float), np.asarray(omega, dtype=float),
                 np.asarray(zhat, dtype=float), m_B_arr,
                 float(cfg.k_z), float(cfg.k_m), cfg.m_inertial, float(T), use_mag)


def run(omega, zhat, R0, cfg, T, mag_m=None, mag_avail=None):
    """
    Run the observer over synchronized streams at the IMU rate.

    Parameters
    ----------
    omega : ndarray (N, 3)
        Gyro samples.
    zhat : ndarray (N, 3)
        Tilt estimates, one per IMU tick (from the Riccati observer).
    mag_m : ndarray (N, 3), optional
        Magnetometer samples; rows where mag_avail is False are ignored and
        the k_m term is dropped for that step. None disables the term.
    mag_avail : ndarray (N,) of bool, optional
        Defaults to all-True when mag_m is given.

    Returns
    -------
    ndarray (N + 1, 3, 3) of attitude estimates (index 0 is R0).

    Raises
    ------
    ValueError
        On stream length mismatch.
    """
    omega = np.ascontiguousarray(omega, dtype=float)
    zhat = np.ascontiguousarray(zhat, dtype=float)
    n = omega.shape[0]
    if zhat.shape != (n, 3):
        raise ValueError(f"zhat stream shape {zhat.shape} does not match {n} IMU samples")
    if mag_m is None:
        mag_m = np.zeros((n, 3))
        mag_avail = np.zeros(n, dtype=np.bool_)
    else:
        mag_m = np.ascontiguousarray(mag_m, dtype=float)
        if mag_m.shape != (n, 3):
            raise ValueError(f"magnetometer stream shape {mag_m.shape} does not match {n} IMU samples")
        if mag_avail is None:
            mag_avail = np.ones(n, dtype=np.bool_)
        else:
            mag_avail = np.ascontiguousarray(mag_avail, dtype=np.bool_)
            if mag_avail.shape != (n,):
                raise ValueError("mag_avail length mismatch")
    return _run_loop(omega, zhat, mag_m, mag_avail,
                     np.ascontiguousarray(R0, dtype=float),
                     float(cfg.k_z), float(cfg.k_m), cfg.m_inertial, float(T))
