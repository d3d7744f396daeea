"""Barometer-aided attitude estimation.

A five-state Riccati observer fuses IMU and barometric altitude into
altitude / vertical-speed / tilt estimates; a nonlinear complementary
filter on SO(3) combines the tilt with magnetometer headings into the full
attitude. Includes the truth simulator, observability diagnostics, and a
seeded Monte Carlo harness with CSV export.
"""

from ._accel import NUMBA_ENABLED
from .attitude import AttitudeConfig, correction, step
from .geom3 import (
    attitude_error,
    check_rotation,
    euler_zyx,
    exp_so3,
    is_rotation,
    proj_reg,
    reorthonormalize,
    rotation_from_euler_zyx,
    skew,
    vex,
)
from .harness import (
    CampaignConfig,
    CampaignSummary,
    InitConfig,
    RunResult,
    load_config,
    reference_config,
    run_campaign,
    run_single,
    sample_initial_conditions,
)
from .observability import GramianReport, SignalWindow, gramian, pe_metric, transition_matrix
from .riccati import RiccatiConfig, RiccatiObserver, correct, cre_rhs, predict, system_matrix, tilt_transition
from .sim import (
    GRAVITY,
    MAG_FIELD_DEFAULT,
    NoiseConfig,
    SensorStreams,
    Trajectory,
    integrate_truth,
    synthesize_measurements,
    truth_accel_inertial,
    truth_altitude,
    truth_body_accel,
    truth_omega,
)

__version__ = "0.1.0"
