"""Monte Carlo campaign runner and CSV export.

A campaign is a pure function of its configuration: per-run generators are
seeded as (master seed, run index), so runs are reproducible individually
and the first k results never change when n_runs grows. Each run wires
simulator -> Riccati observer -> attitude observer through the fused kernel
and records truth/estimate series at the IMU rate.
"""

import csv
import time
from dataclasses import dataclass, field, replace

import numpy as np
import yaml

from . import attitude as attitude_mod
from .geom3 import euler_zyx_series, exp_so3, rotation_from_euler_zyx
from .kernels import filter_run
from .riccati import RiccatiConfig
from .sim import GRAVITY, NoiseConfig, integrate_truth, synthesize_measurements

RUN_CSV_FIELDS = [
    "t", "h", "hdot", "h_hat", "hdot_hat",
    "z1", "z2", "z3", "zhat1", "zhat2", "zhat3",
    "roll", "pitch", "yaw", "roll_hat", "pitch_hat", "yaw_hat",
    "tilt_err", "att_err",
]
SUMMARY_CSV_FIELDS = ["t", "tilt_q05", "tilt_q50", "tilt_q95", "att_q05", "att_q50", "att_q95"]
GRAMIAN_CSV_FIELDS = ["t0", "delta", "gramian_min_eig", "pe_metric", "uniformly_observable"]

CONVERGED_ATT_ERR = 0.5  # attitude error at end-of-run below this counts as converged


class ConfigError(ValueError):
    """Invalid campaign configuration or config file."""


@dataclass
class InitConfig:
    """Initial-estimate sampling: Gaussian state around [alt, vz, Rhat' e3],
    attitude perturbed from the mean Euler orientation by an axis-wise
    Gaussian rotation vector."""

    xhat_mean_alt: float = 5.0
    xhat_mean_vz: float = 5.0
    sigma_x: tuple = (8.0, 8.0, 0.5, 0.5, 0.5)
    euler_mean_deg: tuple = (60.0, -30.0, 45.0)  # intrinsic Z-Y-X: (yaw, pitch, roll)
    attitude_std_deg: float = 104.0

    def __post_init__(self):
        if len(self.sigma_x) != 5 or min(self.sigma_x) < 0:
            raise ConfigError("sigma_x must be 5 nonnegative values")
        if len(self.euler_mean_deg) != 3:
            raise ConfigError("euler_mean_deg must have 3 entries")
        if self.attitude_std_deg < 0:
            raise ConfigError("attitude_std_deg must be >= 0")

    def mean_rotation(self):
        yaw, pitch, roll = np.deg2rad(np.asarray(self.euler_mean_deg, dtype=float))
        return rotation_from_euler_zyx(roll, pitch, yaw)


@dataclass
class CampaignConfig:
    duration: float = 30.0
    n_runs: int = 50
    seed: int = 20240901
    truth_dt: float = 1e-3
    noise: NoiseConfig = field(default_factory=NoiseConfig)
    riccati: RiccatiConfig = field(default_factory=RiccatiConfig)
    attitude: attitude_mod.AttitudeConfig = field(default_factory=attitude_mod.AttitudeConfig)
    init: InitConfig = field(default_factory=InitConfig)

    def __post_init__(self):
        if self.n_runs < 1:
            raise ConfigError("n_runs must be >= 1")
        if self.duration <= 0:
            raise ConfigError("duration must be > 0")
        if self.truth_dt <= 0 or self.truth_dt > 1.0 / self.noise.rate_imu:
            raise ConfigError("truth_dt must be positive and no larger than the IMU period")
        # the observer period is tied to the IMU rate
        T = 1.0 / self.noise.rate_imu
        if abs(self.riccati.T - T) > 1e-12:
            self.riccati = replace(self.riccati, T=T)


def reference_config():
    """Campaign configuration of the reference simulation study."""
    return CampaignConfig()


def sample_initial_conditions(rng, cfg):
    """
    Draw (xhat0, Rhat0, P0) for one run.

    Rhat0 perturbs the mean orientation by exp_so3 of an axis-wise Gaussian
    rotation vector; xhat0 is Gaussian around [alt, vz, Rhat0' e3].
    """
    init = cfg.init
    std_rot = np.deg2rad(init.attitude_std_deg)
    Rhat0 = init.mean_rotation() @ exp_so3(std_rot * rng.standard_normal(3))
    mean = np.empty(5)
    mean[0] = init.xhat_mean_alt
    mean[1] = init.xhat_mean_vz
    mean[2:5] = Rhat0.T @ np.array([0.0, 0.0, 1.0])
    xhat0 = mean + np.asarray(init.sigma_x, dtype=float) * rng.standard_normal(5)
    return xhat0, Rhat0, cfg.riccati.P0.copy()


@dataclass
class RunResult:
    """Per-run series on the IMU-rate grid (index 0 is the initial condition)."""

    seed: tuple
    t: np.ndarray  # (N+1,)
    h: np.ndarray
    hdot: np.ndarray
    h_hat: np.ndarray
    hdot_hat: np.ndarray
    z: np.ndarray  # (N+1, 3) true tilt
    zhat: np.ndarray  # (N+1, 3)
    euler: np.ndarray  # (N+1, 3) roll, pitch, yaw of truth
    euler_hat: np.ndarray  # (N+1, 3)
    tilt_err: np.ndarray  # |zhat - z|
    att_err: np.ndarray  # trace(I - R Rhat')
    p_min_eig: np.ndarray  # (N,) smallest eigenvalue of P after each tick
    rhat_defect: np.ndarray  # (N,) Frobenius SO(3) defect of Rhat
    n_corrections: int
    wall_clock: float

    def to_csv(self, path):
        rows = np.column_stack([
            self.t, self.h, self.hdot, self.h_hat, self.hdot_hat,
            self.z, self.zhat, self.euler, self.euler_hat,
            self.tilt_err, self.att_err,
        ])
        _write_csv(path, RUN_CSV_FIELDS, rows)


def _write_csv(path, fields, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(fields)
        for row in np.asarray(rows):
            w.writerow([repr(float(v)) for v in row])


def read_csv(path):
    """Read a harness CSV into a dict of named float columns."""
    data = np.genfromtxt(path, delimiter=",", names=True)
    return {name: np.atleast_1d(data[name]) for name in data.dtype.names}


def _baro_tick_map(baro_t, T, n_ticks):
    # Barometer sample at tb is consumed by the tick whose post-prediction
    # time (k+1) T lies within half an IMU period; at most one per tick.
    k = np.rint(np.asarray(baro_t) / T).astype(np.int64) - 1
    ok = (k >= 0) & (k < n_ticks) & (np.abs(baro_t - (k + 1) * T) <= 0.5 * T + 1e-12)
    k = k[ok]
    keep = np.ones(k.size, dtype=bool)
    keep[1:] = k[1:] != k[:-1]
    return k[keep], np.flatnonzero(ok)[keep]


def _mag_full_streams(streams, n_ticks):
    stride = int(round(streams.imu_t.size / max(streams.mag_t.size, 1)))
    mag_full = np.zeros((n_ticks, 3))
    avail = np.zeros(n_ticks, dtype=np.bool_)
    idx = np.arange(streams.mag_t.size) * stride
    idx = idx[idx < n_ticks]
    mag_full[idx] = streams.mag_m[: idx.size]
    avail[idx] = True
    return mag_full, avail


def run_single(cfg, seed, truth=None, xhat0=None, Rhat0=None):
    """
    Execute one seeded run: sample initial estimates, synthesize sensors,
    run the cascaded observer, and compute the error series.

    seed may be an int or a (master, index) pair; explicit xhat0/Rhat0
    bypass the initial-condition sampling (used by equilibrium and
    negative-control tests).
    """
    t_start = time.perf_counter()
    if truth is None:
        truth = integrate_truth(cfg.duration, dt=cfg.truth_dt)
    rng = np.random.default_rng(seed)
    xs0, Rs0, P0 = sample_initial_conditions(rng, cfg)
    if xhat0 is not None:
        xs0 = np.asarray(xhat0, dtype=float)
    if Rhat0 is not None:
        Rs0 = np.asarray(Rhat0, dtype=float)

    streams = synthesize_measurements(truth, cfg.noise, cfg.attitude.m_inertial, rng=rng)

    T = cfg.riccati.T
    n_ticks = streams.imu_t.size
    baro_ticks, baro_keep = _baro_tick_map(streams.baro_t, T, n_ticks)
    mag_full, mag_avail = _mag_full_streams(streams, n_ticks)

    xs, Rs, p_min_eig, r_defect, _, n_corr = filter_run(
        np.ascontiguousarray(streams.imu_a), np.ascontiguousarray(streams.imu_omega),
        baro_ticks, np.ascontiguousarray(streams.baro_y[baro_keep]),
        mag_full, mag_avail,
        np.ascontiguousarray(xs0, dtype=float), np.ascontiguousarray(P0, dtype=float),
        np.ascontiguousarray(Rs0, dtype=float),
        cfg.riccati.Q, float(cfg.riccati.M), float(T), GRAVITY,
        float(cfg.attitude.k_z), float(cfg.attitude.k_m), cfg.attitude.m_inertial,
        cfg.riccati.joseph, True,
    )

    t_grid = np.arange(n_ticks + 1) * T
    gi = np.rint(t_grid / truth.dt).astype(np.int64)
    R_true = truth.R[gi]
    z_true = R_true[:, 2, :]
    roll, pitch, yaw = euler_zyx_series(R_true)
    roll_h, pitch_h, yaw_h = euler_zyx_series(Rs)

    zhat = xs[:, 2:5]
    tilt_err = np.linalg.norm(zhat - z_true, axis=1)
    att_err = 3.0 - np.einsum("nij,nij->n", R_true, Rs)

    return RunResult(
        seed=tuple(np.atleast_1d(seed).tolist()),
        t=t_grid,
        h=truth.h[gi], hdot=truth.hdot[gi],
        h_hat=xs[:, 0], hdot_hat=xs[:, 1],
        z=z_true, zhat=zhat,
        euler=np.column_stack([roll, pitch, yaw]),
        euler_hat=np.column_stack([roll_h, pitch_h, yaw_h]),
        tilt_err=tilt_err, att_err=att_err,
        p_min_eig=p_min_eig, rhat_defect=r_defect,
        n_corrections=int(n_corr),
        wall_clock=time.perf_counter() - t_start,
    )


@dataclass
class CampaignSummary:
    """Per-time-step quantiles across runs plus bookkeeping."""

    t: np.ndarray
    tilt_q05: np.ndarray
    tilt_q50: np.ndarray
    tilt_q95: np.ndarray
    att_q05: np.ndarray
    att_q50: np.ndarray
    att_q95: np.ndarray
    converged: np.ndarray  # per-run flag: final att_err < CONVERGED_ATT_ERR
    wall_clock_total: float
    wall_clock_per_run: np.ndarray

    def to_csv(self, path):
        rows = np.column_stack([
            self.t, self.tilt_q05, self.tilt_q50, self.tilt_q95,
            self.att_q05, self.att_q50, self.att_q95,
        ])
        _write_csv(path, SUMMARY_CSV_FIELDS, rows)


def summarize(results):
    """Aggregate RunResults into quantile envelopes."""
    tilt = np.stack([r.tilt_err for r in results])
    att = np.stack([r.att_err for r in results])
    q = [0.05, 0.50, 0.95]
    tq = np.quantile(tilt, q, axis=0)
    aq = np.quantile(att, q, axis=0)
    per_run = np.array([r.wall_clock for r in results])
    return CampaignSummary(
        t=results[0].t.copy(),
        tilt_q05=tq[0], tilt_q50=tq[1], tilt_q95=tq[2],
        att_q05=aq[0], att_q50=aq[1], att_q95=aq[2],
        converged=np.array([r.att_err[-1] < CONVERGED_ATT_ERR for r in results]),
        wall_clock_total=float(per_run.sum()),
        wall_clock_per_run=per_run,
    )


def run_campaign(cfg, out_dir=None):
    """
    Run n_runs seeded runs (seeds (cfg.seed, k)), aggregate, and optionally
    write run_###.csv plus summary.csv under out_dir.

    Returns
    -------
    (CampaignSummary, list[RunResult])
    """
    truth = integrate_truth(cfg.duration, dt=cfg.truth_dt)
    results = [run_single(cfg, (cfg.seed, k), truth=truth) for k in range(cfg.n_runs)]
    summary = summarize(results)
    if out_dir is not None:
        from pathlib import Path

        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for k, r in enumerate(results):
            r.to_csv(out / f"run_{k:03d}.csv")
        summary.to_csv(out / "summary.csv")
    return summary, results


# --- configuration file handling -------------------------------------------

def config_to_dict(cfg):
    n, r, a, i = cfg.noise, cfg.riccati, cfg.attitude, cfg.init
    return {
        "duration": cfg.duration,
        "n_runs": cfg.n_runs,
        "seed": cfg.seed,
        "truth_dt": cfg.truth_dt,
        "rates": {"imu": n.rate_imu, "baro": n.rate_baro, "mag": n.rate_mag},
        "noise": {
            "std_accel": n.std_accel, "std_gyro": n.std_gyro,
            "std_mag": n.std_mag, "var_baro": n.var_baro,
        },
        "riccati": {
            "q_diag": np.diag(r.Q).tolist(), "m": r.M,
            "p0_diag": np.diag(r.P0).tolist(), "joseph": r.joseph,
        },
        "attitude": {"k_z": a.k_z, "k_m": a.k_m, "m_inertial": a.m_inertial.tolist()},
        "init": {
            "xhat_mean_alt": i.xhat_mean_alt, "xhat_mean_vz": i.xhat_mean_vz,
            "sigma_x": list(i.sigma_x), "euler_mean_deg": list(i.euler_mean_deg),
            "attitude_std_deg": i.attitude_std_deg,
        },
    }


def config_from_dict(d):
    try:
        rates = d.get("rates", {})
        noise = NoiseConfig(
            std_accel=float(d["noise"]["std_accel"]),
            std_gyro=float(d["noise"]["std_gyro"]),
            std_mag=float(d["noise"]["std_mag"]),
            var_baro=float(d["noise"]["var_baro"]),
            rate_imu=float(rates.get("imu", 200.0)),
            rate_baro=float(rates.get("baro", 5.0)),
            rate_mag=float(rates.get("mag", rates.get("imu", 200.0))),
        )
        rc = d.get("riccati", {})
        riccati = RiccatiConfig(
            Q=np.diag(np.asarray(rc.get("q_diag", [10.0] * 5), dtype=float)),
            M=float(rc.get("m", 1e-6)),
            P0=np.diag(np.asarray(rc.get("p0_diag", [64.0, 64.0, 0.25, 0.25, 0.25]), dtype=float)),
            T=1.0 / noise.rate_imu,
            joseph=bool(rc.get("joseph", False)),
        )
        ac = d.get("attitude", {})
        att = attitude_mod.AttitudeConfig(
            k_z=float(ac.get("k_z", 80.0)),
            k_m=float(ac.get("k_m", 25.0)),
            m_inertial=np.asarray(
                ac.get("m_inertial", [1 / np.sqrt(2), 0.0, 1 / np.sqrt(2)]), dtype=float),
        )
        ic = d.get("init", {})
        init = InitConfig(
            xhat_mean_alt=float(ic.get("xhat_mean_alt", 5.0)),
            xhat_mean_vz=float(ic.get("xhat_mean_vz", 5.0)),
            sigma_x=tuple(float(v) for v in ic.get("sigma_x", (8, 8, 0.5, 0.5, 0.5))),
            euler_mean_deg=tuple(float(v) for v in ic.get("euler_mean_deg", (60, -30, 45))),
            attitude_std_deg=float(ic.get("attitude_std_deg", 104.0)),
        )
        return CampaignConfig(
            duration=float(d.get("duration", 30.0)),
            n_runs=int(d.get("n_runs", 50)),
            seed=int(d.get("seed", 20240901)),
            truth_dt=float(d.get("truth_dt", 1e-3)),
            noise=noise, riccati=riccati, attitude=att, init=init,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid campaign config: {exc}") from exc


def load_config(path):
    """Load a CampaignConfig from a YAML file; raises ConfigError on problems."""
    try:
        with open(path) as fh:
            data = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot load config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path} must contain a mapping")
    return config_from_dict(data)


def save_config(cfg, path):
    """Write a CampaignConfig as YAML."""
    with open(path, "w") as fh:
        yaml.safe_dump(config_to_dict(cfg), fh, sort_keys=False)
