"""Configuration dataclasses and JSON loading.

Every tunable lives here with its default; a JSON config file may override
any subset of fields (section by section). `load_config(path)` returns a
fully populated `Config`.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

GRAVITY = 9.81

# Environment-vector layout (13 entries):
#   0 mass, 1-3 inertia diag, 4 drag_v, 5 drag_w, 6 arm length,
#   7-9 external force (world), 10-12 external torque (body)
ENV_DIM = 13
ENV_NAMES = (
    "mass", "inertia_x", "inertia_y", "inertia_z", "drag_v", "drag_w",
    "arm_length", "force_x", "force_y", "force_z",
    "torque_x", "torque_y", "torque_z",
)

N_STATE = 12   # controller state: position, velocity, roll-pitch-yaw, body rates
N_INPUT = 4    # collective-thrust deviation + body torques
N_MOTOR = 6


@dataclass
class RegimeConfig:
    """Per-parameter closed intervals plus the per-step change probability."""

    mass: tuple = (1.0, 1.6)
    inertia_xy: tuple = (6.6e-3, 9.8e-3)
    inertia_z: tuple = (1.0e-2, 1.5e-2)
    drag_v: tuple = (0.08, 0.12)
    drag_w: tuple = (8.0e-5, 1.2e-4)
    arm_length: tuple = (0.13, 0.20)
    force_xyz: tuple = (-2.6, 2.6)
    torque_xy: tuple = (-0.42, 0.42)
    torque_z: tuple = (-4.2e-2, 4.2e-2)
    change_prob: float = 0.001

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Lower/upper bound vectors in environment-vector order."""
        rows = [
            self.mass,
            self.inertia_xy, self.inertia_xy, self.inertia_z,
            self.drag_v, self.drag_w, self.arm_length,
            self.force_xyz, self.force_xyz, self.force_xyz,
            self.torque_xy, self.torque_xy, self.torque_z,
        ]
        lo = np.array([r[0] for r in rows], dtype=float)
        hi = np.array([r[1] for r in rows], dtype=float)
        return lo, hi


def default_test_regime() -> RegimeConfig:
    return RegimeConfig(
        mass=(0.8, 1.8),
        inertia_xy=(4.9e-3, 1.2e-2),
        inertia_z=(0.8e-2, 1.8e-2),
        drag_v=(0.06, 0.14),
        drag_w=(6.0e-5, 1.4e-4),
        arm_length=(0.10, 0.23),
        force_xyz=(-3.2, 3.2),
        torque_xy=(-0.53, 0.53),
        torque_z=(-4.2e-2, 4.2e-2),
        change_prob=0.002,
    )


@dataclass
class SimConfig:
    dt: float = 0.002
    f_motor_max: float = 8.5
    kappa: float = 0.016          # drag-moment/thrust ratio of each rotor
    gravity: float = GRAVITY
    volume_center: tuple = (0.0, 0.0, 1.0)
    wrench_clamp_tol: float = 2.0  # motor-clamping slack before InfeasibleWrench


@dataclass
class ConstraintConfig:
    """State box X and input box U (inputs as deviation from hover wrench)."""

    pos_halfwidth: float = 3.0
    vel_halfwidth: float = 4.0
    tilt_halfwidth: float = 0.6
    yaw_halfwidth: float = float(np.pi)
    rate_halfwidth: float = 6.0
    thrust_dev: tuple = (-12.753, 7.6518)   # [-m_nom*g, +0.6*m_nom*g], m_nom = 1.3
    torque_xy_max: float = 1.2
    torque_z_max: float = 0.3

    def state_box(self, center: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        half = np.array(
            [self.pos_halfwidth] * 3 + [self.vel_halfwidth] * 3
            + [self.tilt_halfwidth] * 2 + [self.yaw_halfwidth]
            + [self.rate_halfwidth] * 3
        )
        c = np.concatenate([np.asarray(center, dtype=float), np.zeros(9)])
        return c - half, c + half

    def input_box(self) -> tuple[np.ndarray, np.ndarray]:
        lo = np.array([self.thrust_dev[0], -self.torque_xy_max,
                       -self.torque_xy_max, -self.torque_z_max])
        hi = np.array([self.thrust_dev[1], self.torque_xy_max,
                       self.torque_xy_max, self.torque_z_max])
        return lo, hi


@dataclass
class SynthesisConfig:
    dt_model: float = 0.04
    q_diag: tuple = (10.0,) * 3 + (1.0,) * 3 + (5.0,) * 3 + (0.5,) * 3
    r_diag: tuple = (0.5, 5.0, 5.0, 5.0)
    w_margin: float = 1.2          # inflation on the disturbance box W
    tube_inflation: float = 1.05   # inflation on the Monte-Carlo tube maxima
    mc_rollouts: int = 2000
    mc_horizon: int = 200
    mc_divergence_bound: float = 1e6
    dare_tol: float = 1e-12
    dare_max_iter: int = 10_000
    cache_quantum: float = 0.01    # synthesis cache step, fraction of train range


@dataclass
class AdmmConfig:
    eps_abs: float = 1e-5
    eps_rel: float = 1e-5
    max_iter: int = 4000
    alpha: float = 1.6             # over-relaxation
    rho: float = 0.1
    rho_eq_scale: float = 1e3
    sigma: float = 1e-6
    check_every: int = 25
    adapt_every: int = 50
    eps_infeas: float = 1e-7


@dataclass
class MpcConfig:
    horizon: int = 25
    resolve_ticks: int = 20        # QP re-solve every 0.04 s at the 500 Hz tick
    admm: AdmmConfig = field(default_factory=AdmmConfig)


@dataclass
class NetConfig:
    z_dim: int = 8
    pi_hidden: tuple = (256, 256)
    mu_hidden: tuple = (128,)
    history_len: int = 400
    pair_embed: tuple = (32, 32)
    conv_channels: int = 32
    conv_kernel: int = 8
    conv_stride: int = 4
    conv_layers: int = 3


@dataclass
class Phase1Config:
    n_samples: int = 100                 # tube draws per expert label tick
    aug_mode: str = "every"              # "every" | "first-only" | "none"
    iterations: int = 5
    demos_per_iteration: int = 10
    label_ticks: int = 25                # 20 Hz expert labels at the 500 Hz tick
    epochs: int = 50
    batch_size: int = 256
    learning_rate: float = 1e-3
    max_updates_per_retrain: int = 6000
    eval_episodes: int = 10              # post-iteration robustness evaluation


@dataclass
class Phase2Config:
    iterations: int = 20
    rollouts_per_iteration: int = 10
    updates_per_iteration: int = 250
    batch_size: int = 128
    learning_rate: float = 1e-3
    zhat_ticks: int = 10                 # adaptation-estimate refresh (50 Hz)
    holdout_rollouts: int = 4


@dataclass
class TrajectoryConfig:
    shape: str = "heart"
    duration: float = 8.0
    hover_pad: float = 1.0
    peak_speed: float = 2.0              # heart; the eight uses eight_peak_speed
    eight_peak_speed: float = 3.2
    height: float = 1.0


@dataclass
class Config:
    sim: SimConfig = field(default_factory=SimConfig)
    train_regime: RegimeConfig = field(default_factory=RegimeConfig)
    test_regime: RegimeConfig = field(default_factory=default_test_regime)
    constraints: ConstraintConfig = field(default_factory=ConstraintConfig)
    synthesis: SynthesisConfig = field(default_factory=SynthesisConfig)
    mpc: MpcConfig = field(default_factory=MpcConfig)
    net: NetConfig = field(default_factory=NetConfig)
    phase1: Phase1Config = field(default_factory=Phase1Config)
    phase2: Phase2Config = field(default_factory=Phase2Config)
    trajectory: TrajectoryConfig = field(default_factory=TrajectoryConfig)


def _update_dataclass(obj, values: dict):
    for key, val in values.items():
        if not hasattr(obj, key):
            raise KeyError(f"unknown config field: {type(obj).__name__}.{key}")
        current = getattr(obj, key)
        if dataclasses.is_dataclass(current):
            _update_dataclass(current, val)
        elif isinstance(current, tuple) and isinstance(val, (list, tuple)):
            setattr(obj, key, tuple(val))
        else:
            setattr(obj, key, type(current)(val) if current is not None else val)
    return obj


def config_from_dict(d: dict) -> Config:
    cfg = Config()
    _update_dataclass(cfg, d or {})
    return cfg


def load_config(path: str | Path | None) -> Config:
    """Load a JSON config file; missing sections keep their defaults."""
    if path is None:
        return Config()
    with open(path) as f:
        return config_from_dict(json.load(f))


def config_to_dict(cfg) -> dict:
    return dataclasses.asdict(cfg)
