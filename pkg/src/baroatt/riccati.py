"""Five-state Riccati observer for altitude, vertical speed, and tilt.

State x = [h, hdot, z] with z the gravity direction in the body frame;
the barometer measures the first component. The discrete-time form runs a
correction-prediction cycle at the IMU period with the exact incremental
rotation for the tilt block; the continuous-time form (state ODE plus the
continuous Riccati equation) is kept as a reference for discretization
checks. z is deliberately never projected to the unit sphere: the observer
evolves it freely in R^5 and |z| -> 1 only asymptotically.
"""

from dataclasses import dataclass, field

import numpy as np

from ._accel import njit
from .geom3 import exp_so3, skew
from .sim import GRAVITY


def _default_q():
    return 10.0 * np.eye(5)


def _default_p0():
    return np.diag([64.0, 64.0, 0.25, 0.25, 0.25])


def _check_spd(A, name):
    A = np.asarray(A, dtype=float)
    if A.shape != (5, 5):
        raise ValueError(f"{name} must be 5x5")
    if np.max(np.abs(A - A.T)) > 1e-9:
        raise ValueError(f"{name} must be symmetric")
    if np.linalg.eigvalsh(A)[0] <= 0.0:
        raise ValueError(f"{name} must be positive definite")
    return A


@dataclass
class RiccatiConfig:
    """Observer tuning: process noise Q, output variance M, initial P, IMU period T."""

    Q: np.ndarray = field(default_factory=_default_q)
    M: float = 1e-6
    P0: np.ndarray = field(default_factory=_default_p0)
    T: float = 0.005
    joseph: bool = False  # Joseph-form covariance update, for numerical comparisons

    def __post_init__(self):
        self.Q = _check_spd(self.Q, "Q")
        self.P0 = _check_spd(self.P0, "P0")
        if self.M <= 0.0:
            raise ValueError("M must be > 0")
        if self.T <= 0.0:
            raise ValueError("T must be > 0")


@njit(cache=True)
def system_matrix(a, omega):
    """
    Continuous-time 5x5 system matrix of the [h, hdot, z] dynamics.

    [[0, 1, 0], [0, 0, a^T], [0, 0, -skew(omega)]] in block form.
    """
    A = np.zeros((5, 5))
    A[0, 1] = 1.0
    A[1, 2] = a[0]
    A[1, 3] = a[1]
    A[1, 4] = a[2]
    A[2:5, 2:5] = -skew(omega)
    return A


@njit(cache=True)
def tilt_transition(omega, T):
    """
    Exact tilt-block transition over one period of constant angular velocity.

    Solves phi_dot = -skew(omega) phi, phi(0) = I, i.e. exp_so3(-T * omega);
    orthogonal for any omega, with the small-angle branch of exp_so3.
    """
    return exp_so3(-T * omega)


@njit(cache=True)
def _predict(xhat, P, a, omega, Q, T, g):
    # First-order discrete propagation: x+ = Ad x + Bd g, P+ = Ad P Ad' + Q T.
    Ad = np.zeros((5, 5))
    ht2 = 0.5 * T * T
    Ad[0, 0] = 1.0
    Ad[0, 1] = T
    Ad[1, 1] = 1.0
    for i in range(3):
        Ad[0, 2 + i] = ht2 * a[i]
        Ad[1, 2 + i] = T * a[i]
    Ad[2:5, 2:5] = tilt_transition(omega, T)
    x_new = Ad @ xhat
    x_new[0] += ht2 * g
    x_new[1] += T * g
    P_new = Ad @ P @ Ad.T + Q * T
    return x_new, P_new


@njit(cache=True)
def _correct(xhat, P, y, M, joseph):
    # Scalar-output Kalman update with C = [1 0 0 0 0].
    s = P[0, 0] + M
    K = P[:, 0] / s
    x_new = xhat + K * (y - xhat[0])
    if joseph:
        ImKC = np.eye(5)
        for i in range(5):
            ImKC[i, 0] -= K[i]
        P_new = ImKC @ P @ ImKC.T + M * (K.reshape(5, 1) * K.reshape(1, 5))
    else:
        P_new = P - K.reshape(5, 1) * P[0, :].reshape(1, 5)
    return x_new, P_new


def predict(xhat, P, a, omega, cfg, g=GRAVITY):
    """
    One prediction step of the discrete observer.

    Returns
    -------
    (xhat_minus, P_minus) : ndarray (5,), ndarray (5, 5)
    """
    x, Pm = _predict(np.asarray(xhat, dtype=float), np.asarray(P, dtype=float),
                     np.asarray(a, dtype=float), np.asarray(omega, dtype=float),
                     cfg.Q, cfg.T, g)
    return x, Pm


def correct(xhat_minus, P_minus, y_baro, cfg):
    """
    Barometer measurement update followed by covariance symmetrization.

    Returns
    -------
    (xhat_plus, P_plus) : updated state and exactly symmetric covariance.
    """
    if cfg.M <= 0.0:
        raise ValueError("M must be > 0")
    x, P = _correct(np.asarray(xhat_minus, dtype=float), np.asarray(P_minus, dtype=float),
                    float(y_baro), cfg.M, cfg.joseph)
    return x, 0.5 * (P + P.T)


def cre_rhs(P, A, cfg):
    """
    Right-hand side of the continuous Riccati equation
    A P + P A' - P C' M^-1 C P + Q, with C = [1 0 0 0 0].
    """
    P = np.asarray(P, dtype=float)
    A = np.asarray(A, dtype=float)
    pc = P[:, :1]  # P C^T
    return A @ P + P @ A.T - (pc @ pc.T) / cfg.M + cfg.Q


class RiccatiObserver:
    """
    Stateful discrete observer: predict at every IMU sample, correct when a
    barometer sample is supplied, then symmetrize the covariance.
    """

    def __init__(self, cfg, xhat0, P0=None, t0=0.0):
        self.cfg = cfg
        self.xhat = np.array(xhat0, dtype=float).copy()
        if self.xhat.shape != (5,):
            raise ValueError("xhat0 must have shape (5,)")
        self.P = np.array(cfg.P0 if P0 is None else P0, dtype=float).copy()
        self.t = float(t0)
        self.n_predictions = 0
        self.n_corrections = 0

    @property
    def hhat(self):
        return float(self.xhat[0])

    @property
    def zhat(self):
        return self.xhat[2:5].copy()

    def step(self, t_imu, a, omega, y_baro=None):
        """
        Consume one IMU sample (and optionally one barometer sample); the
        state advances to t_imu + T. Raises on a timestamp regression.
        """
        if t_imu < self.t - 1e-12:
            raise ValueError(f"IMU timestamp regression: {t_imu} < {self.t}")
        x, P = _predict(self.xhat, self.P, np.asarray(a, dtype=float),
                        np.asarray(omega, dtype=float), self.cfg.Q, self.cfg.T, GRAVITY)
        self.n_predictions += 1
        if y_baro is not None:
            x, P = _correct(x, P, float(y_baro), self.cfg.M, self.cfg.joseph)
            self.n_corrections += 1
        self.P = 0.5 * (P + P.T)
        self.xhat = x
        self.t = float(t_imu) + self.cfg.T
        return self.xhat, self.P


@njit(cache=True)
def _obs_rhs(a, w, y, x, P, Q, M, g):
    A = system_matrix(a, w)
    K = P[:, 0] / M  # P C^T M^-1
    dx = A @ x + K * (y - x[0])
    dx[1] += g
    dP = A @ P + P @ A.T - M * (K.reshape(5, 1) * K.reshape(1, 5)) + Q
    return dx, dP


@njit(cache=True)
def _continuous_loop(a_half, w_half, y_half, dt, xhat0, P0, Q, M, g, save_every):
    # RK4 on the coupled (xhat, P) ODEs; signals given on the half-step grid
    # (index 2k is t_k, 2k+1 is t_k + dt/2).
    n = (a_half.shape[0] - 1) // 2
    x = xhat0.copy()
    P = P0.copy()
    n_saved = n // save_every if save_every > 0 else 0
    xs = np.empty((n_saved, 5))
    for k in range(n):
        i0, i1, i2 = 2 * k, 2 * k + 1, 2 * k + 2
        dx1, dP1 = _obs_rhs(a_half[i0], w_half[i0], y_half[i0], x, P, Q, M, g)
        dx2, dP2 = _obs_rhs(a_half[i1], w_half[i1], y_half[i1],
                            x + 0.5 * dt * dx1, P + 0.5 * dt * dP1, Q, M, g)
        dx3, dP3 = _obs_rhs(a_half[i1], w_half[i1], y_half[i1],
                            x + 0.5 * dt * dx2, P + 0.5 * dt * dP2, Q, M, g)
        dx4, dP4 = _obs_rhs(a_half[i2], w_half[i2], y_half[i2],
                            x + dt * dx3, P + dt * dP3, Q, M, g)
        x = x + (dt / 6.0) * (dx1 + 2.0 * dx2 + 2.0 * dx3 + dx4)
        P = P + (dt / 6.0) * (dP1 + 2.0 * dP2 + 2.0 * dP3 + dP4)
        P = 0.5 * (P + P.T)
        if save_every > 0 and (k + 1) % save_every == 0:
            xs[(k + 1) // save_every - 1] = x
    return x, P, xs


def continuous_reference(a_half, w_half, y_half, dt, xhat0, cfg, P0=None, save_every=0):
    """
    Continuous-time observer (state ODE + continuous Riccati equation)
    integrated by RK4, used as the discretization oracle.

    Parameters
    ----------
    a_half, w_half : ndarray (2n+1, 3)
        Body acceleration / angular velocity sampled on the half-step grid
        t = 0, dt/2, dt, ..., n*dt.
    y_half : ndarray (2n+1,)
        Noise-free altitude measurement on the same grid.
    dt : float
        RK4 step.
    save_every : int
        If > 0, also return the state every `save_every` steps.

    Returns
    -------
    (xhat, P, saved_states)
    """
    P0 = cfg.P0 if P0 is None else P0
    return _continuous_loop(
        np.ascontiguousarray(a_half, dtype=float),
        np.ascontiguousarray(w_half, dtype=float),
        np.ascontiguousarray(y_half, dtype=float),
        float(dt), np.asarray(xhat0, dtype=float).copy(),
        np.asarray(P0, dtype=float).copy(), cfg.Q, float(cfg.M), GRAVITY,
        int(save_every),
    )
