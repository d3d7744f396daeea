"""Ground-truth trajectory generation and sensor synthesis.

The reference scenario drives the rigid-body attitude kinematics
``Rdot = R skew(omega)`` with sinusoidal body rates, a sinusoidal altitude
profile, and the matching body-frame specific acceleration
``a = R.T (vdot - g e3)``. Sensors (IMU, barometer, magnetometer) sample
the integrated truth at their own rates and add seeded Gaussian noise.
"""

from dataclasses import dataclass, field

import numpy as np

from ._accel import njit
from .geom3 import _orthonormalize, exp_so3

GRAVITY = 9.81
E3 = np.array([0.0, 0.0, 1.0])
MAG_FIELD_DEFAULT = np.array([1.0 / np.sqrt(2.0), 0.0, 1.0 / np.sqrt(2.0)])

_ALT_AMP = 5.0 * np.sqrt(3.0) / 4.0


def truth_omega(t):
    """
    Reference body angular velocity, rad/s. Accepts scalar or array t.

    [0.4 sin(0.5 t), 0.5 sin(0.3 t + pi/4), 0.3 sin(0.7 t + pi/3)]
    """
    t = np.asarray(t, dtype=float)
    return np.stack(
        [
            0.4 * np.sin(0.5 * t),
            0.5 * np.sin(0.3 * t + np.pi / 4.0),
            0.3 * np.sin(0.7 * t + np.pi / 3.0),
        ],
        axis=-1,
    )


def truth_altitude(t):
    """
    Reference altitude h = -(5 sqrt(3)/4) sin(2t) and its analytic derivative.

    Returns
    -------
    (h, hdot) : m and m/s, shaped like t.
    """
    t = np.asarray(t, dtype=float)
    return -_ALT_AMP * np.sin(2.0 * t), -2.0 * _ALT_AMP * np.cos(2.0 * t)


def truth_accel_inertial(t):
    """
    Reference inertial coordinate acceleration vdot, m/s^2.

    [-cos t, -sin 2t, 5 sqrt(3) sin 2t]; its third component equals hddot.
    """
    t = np.asarray(t, dtype=float)
    return np.stack(
        [
            -np.cos(t),
            -np.sin(2.0 * t),
            5.0 * np.sqrt(3.0) * np.sin(2.0 * t),
        ],
        axis=-1,
    )


def truth_body_accel(t, R):
    """
    Body-frame specific acceleration a = R.T (vdot - g e3) at scalar time t.
    """
    return np.asarray(R, dtype=float).T @ (truth_accel_inertial(float(t)) - GRAVITY * E3)


@dataclass
class Trajectory:
    """Integrated ground truth sampled on a uniform grid."""

    t: np.ndarray  # (n,) s
    R: np.ndarray  # (n, 3, 3)
    h: np.ndarray  # (n,) m
    hdot: np.ndarray  # (n,) m/s
    omega: np.ndarray  # (n, 3) rad/s, body frame
    a: np.ndarray  # (n, 3) m/s^2, body-frame specific acceleration
    a_inertial: np.ndarray  # (n, 3) m/s^2, coordinate acceleration vdot

    @property
    def dt(self):
        return float(self.t[1] - self.t[0])

    def tilt(self):
        """Gravity direction in the body frame, z = R.T e3, shape (n, 3)."""
        return self.R[:, 2, :].copy()


@njit(cache=True)
def _integrate_attitude(omega_mid, dt, R0, renorm_every):
    # Midpoint exponential integration of Rdot = R skew(omega), with periodic
    # SVD re-orthonormalization to hold the SO(3) defect near roundoff.
    n = omega_mid.shape[0]
    Rs = np.empty((n + 1, 3, 3))
    R = R0.copy()
    Rs[0] = R
    for k in range(n):
        R = R @ exp_so3(dt * omega_mid[k])
        if (k + 1) % renorm_every == 0:
            R = _orthonormalize(R)
        Rs[k + 1] = R
    return Rs


def integrate_truth(
    duration,
    dt=1e-3,
    R0=None,
    omega_fn=truth_omega,
    accel_inertial_fn=truth_accel_inertial,
    altitude_fn=truth_altitude,
    renorm_every=500,
):
    """
    Integrate the truth trajectory over [0, duration].

    Attitude uses midpoint exponential steps R_{k+1} = R_k exp_so3(dt * omega_mid);
    altitude and accelerations are evaluated from their closed forms. The signal
    functions default to the reference scenario and can be stubbed for tests.

    Parameters
    ----------
    duration : float, s
    dt : float, s
        Integration step; must divide duration (within roundoff).
    R0 : ndarray (3, 3), optional
        Initial attitude, identity by default.

    Returns
    -------
    Trajectory
    """
    if dt <= 0 or duration < dt:
        raise ValueError("require dt > 0 and duration >= dt")
    n = int(round(duration / dt))
    t = np.arange(n + 1) * dt
    R0 = np.eye(3) if R0 is None else np.asarray(R0, dtype=float)

    omega_mid = np.atleast_2d(omega_fn(t[:-1] + 0.5 * dt))
    Rs = _integrate_attitude(np.ascontiguousarray(omega_mid, dtype=float), dt, R0, renorm_every)

    h, hdot = altitude_fn(t)
    omega = np.atleast_2d(omega_fn(t))
    a_inertial = np.atleast_2d(accel_inertial_fn(t))
    # a = R.T (a_inertial - g e3), batched over the grid
    a = np.einsum("nji,nj->ni", Rs, a_inertial - GRAVITY * E3)
    return Trajectory(t=t, R=Rs, h=np.asarray(h, dtype=float), hdot=np.asarray(hdot, dtype=float),
                      omega=omega, a=a, a_inertial=a_inertial)


@dataclass
class NoiseConfig:
    """Sensor rates and noise levels; all noises are zero-mean Gaussian."""

    std_accel: float = 0.05  # m/s^2, per axis
    std_gyro: float = 0.05  # rad/s, per axis
    std_mag: float = 0.02  # unitless, per axis (before renormalization)
    var_baro: float = 1e-6  # m^2 (std 0.001 m; the observer's M defaults to match)
    rate_imu: float = 200.0  # Hz
    rate_baro: float = 5.0  # Hz
    rate_mag: float = 200.0  # Hz
    seed: int = 0

    def __post_init__(self):
        if min(self.std_accel, self.std_gyro, self.std_mag, self.var_baro) < 0:
            raise ValueError("noise levels must be >= 0")
        if min(self.rate_imu, self.rate_baro, self.rate_mag) <= 0:
            raise ValueError("rates must be > 0")
        if self.rate_mag > self.rate_imu:
            raise ValueError("rate_mag must not exceed rate_imu")

    def noise_free(self):
        """Copy of this config with all noise levels zeroed."""
        return NoiseConfig(0.0, 0.0, 0.0, 0.0, self.rate_imu, self.rate_baro,
                           self.rate_mag, self.seed)


@dataclass
class SensorStreams:
    """Time-stamped sensor samples; timestamps strictly increasing per stream."""

    imu_t: np.ndarray  # (N,)
    imu_a: np.ndarray  # (N, 3)
    imu_omega: np.ndarray  # (N, 3)
    baro_t: np.ndarray  # (Nb,)
    baro_y: np.ndarray  # (Nb,)
    mag_t: np.ndarray  # (Nm,)
    mag_m: np.ndarray  # (Nm, 3), unit norm
    m_inertial: np.ndarray = field(default_factory=lambda: MAG_FIELD_DEFAULT.copy())


def _grid_indices(times, grid_dt, n_grid):
    idx = np.rint(np.asarray(times) / grid_dt).astype(np.int64)
    if idx.size and (idx[-1] >= n_grid or idx[0] < 0):
        raise ValueError("requested sample times fall outside the truth grid")
    return idx


def synthesize_measurements(truth, noise, m_inertial=None, rng=None):
    """
    Sample noisy sensor streams from an integrated truth trajectory.

    IMU samples sit at k / rate_imu for k = 0 .. round(D * rate_imu) - 1
    (each drives one filter propagation step), barometer samples at
    j / rate_baro for j = 1 .. floor(D * rate_baro), magnetometer at an
    integer subsampling of the IMU grid. Sample times must land on the truth
    grid (truth must be integrated at least as fast as the IMU rate).
    Magnetometer vectors are renormalized to unit length after adding noise.
    Deterministic given noise.seed (or the supplied generator state).

    Raises
    ------
    ValueError
        If m_inertial is (near) zero or sample times leave the truth grid.
    """
    m_I = MAG_FIELD_DEFAULT if m_inertial is None else np.asarray(m_inertial, dtype=float)
    if np.linalg.norm(m_I) < 1e-12:
        raise ValueError("inertial magnetic field vector must be nonzero")

    duration = float(truth.t[-1])
    dt = truth.dt
    n_grid = truth.t.size
    if rng is None:
        rng = np.random.default_rng(noise.seed)

    n_imu = int(round(duration * noise.rate_imu))
    imu_t = np.arange(n_imu) / noise.rate_imu
    gi = _grid_indices(imu_t, dt, n_grid)
    imu_a = truth.a[gi] + noise.std_accel * rng.standard_normal((n_imu, 3))
    imu_w = truth.omega[gi] + noise.std_gyro * rng.standard_normal((n_imu, 3))

    n_baro = int(np.floor(duration * noise.rate_baro))
    baro_t = np.arange(1, n_baro + 1) / noise.rate_baro
    gb = _grid_indices(baro_t, dt, n_grid)
    baro_y = truth.h[gb] + np.sqrt(noise.var_baro) * rng.standard_normal(n_baro)

    stride = int(round(noise.rate_imu / noise.rate_mag))
    mag_t = imu_t[::stride]
    gm = gi[::stride]
    z_mI = np.einsum("nji,j->ni", truth.R[gm], m_I)  # R.T m_I per sample
    mag_m = z_mI + noise.std_mag * rng.standard_normal(z_mI.shape)
    mag_m /= np.linalg.norm(mag_m, axis=1, keepdims=True)

    return SensorStreams(imu_t=imu_t, imu_a=imu_a, imu_omega=imu_w,
                         baro_t=baro_t, baro_y=baro_y,
                         mag_t=mag_t, mag_m=mag_m, m_inertial=m_I.copy())
