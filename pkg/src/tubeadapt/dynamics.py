"""Nonlinear hexarotor rigid-body simulation.

World-frame position/velocity, attitude quaternion, body rates. Forces are
collective thrust along body z, isotropic translational/rotational drag,
gravity, and an external wrench drawn from the environment vector. The six
motor forces map to the thrust/torque wrench through a fixed allocation
matrix (motors on a circle of radius L at 30 + k*60 degrees, alternating
spin, drag-moment ratio kappa).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .config import ENV_DIM, GRAVITY, RegimeConfig
from .errors import InfeasibleWrench, NonFiniteState

_EZ = np.array([0.0, 0.0, 1.0])


# ---------------------------------------------------------------------------
# quaternion / Euler helpers (q = [w, x, y, z], body-to-world rotation)

def quat_normalize(q: np.ndarray) -> np.ndarray:
    return q / np.linalg.norm(q)


def quat_to_rotmat(q: np.ndarray) -> np.ndarray:
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def quat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array([
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    ])


def euler_zyx_to_quat(rpy: np.ndarray) -> np.ndarray:
    """Intrinsic Z-Y-X (yaw-pitch-roll) Euler angles to quaternion."""
    roll, pitch, yaw = rpy
    cr, sr = np.cos(roll / 2), np.sin(roll / 2)
    cp, sp = np.cos(pitch / 2), np.sin(pitch / 2)
    cy, sy = np.cos(yaw / 2), np.sin(yaw / 2)
    qz = np.array([cy, 0.0, 0.0, sy])
    qy = np.array([cp, 0.0, sp, 0.0])
    qx = np.array([cr, sr, 0.0, 0.0])
    return quat_mul(quat_mul(qz, qy), qx)


def quat_to_euler_zyx(q: np.ndarray) -> np.ndarray:
    """Quaternion to (roll, pitch, yaw); yaw wrapped to (-pi, pi]."""
    r = quat_to_rotmat(q)
    pitch = np.arcsin(np.clip(-r[2, 0], -1.0, 1.0))
    roll = np.arctan2(r[2, 1], r[2, 2])
    yaw = np.arctan2(r[1, 0], r[0, 0])
    return np.array([roll, pitch, yaw])


def euler_rate_matrix(rpy: np.ndarray) -> np.ndarray:
    """Maps body rates to Z-Y-X Euler-angle rates."""
    roll, pitch = rpy[0], rpy[1]
    cr, sr = np.cos(roll), np.sin(roll)
    cp, tp = np.cos(pitch), np.tan(pitch)
    return np.array([
        [1.0, sr * tp, cr * tp],
        [0.0, cr, -sr],
        [0.0, sr / cp, cr / cp],
    ])


# ---------------------------------------------------------------------------
# domain types

@dataclass
class RobotState:
    """Simulator state: world position/velocity, unit quaternion, body rates."""

    p: np.ndarray
    v: np.ndarray
    q: np.ndarray
    w: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.p, self.v, self.q, self.w])

    @staticmethod
    def from_array(x: np.ndarray) -> "RobotState":
        return RobotState(x[0:3].copy(), x[3:6].copy(), x[6:10].copy(), x[10:13].copy())

    @staticmethod
    def hover(position) -> "RobotState":
        return RobotState(
            np.asarray(position, dtype=float).copy(),
            np.zeros(3),
            np.array([1.0, 0.0, 0.0, 0.0]),
            np.zeros(3),
        )


@dataclass(frozen=True)
class EnvParams:
    """The 13-entry environment vector: inertial, drag, geometric, and
    external-wrench parameters the policy must adapt to."""

    mass: float
    inertia: np.ndarray        # diagonal (3,)
    drag_v: float
    drag_w: float
    arm_length: float
    f_ext: np.ndarray          # world frame (3,)
    tau_ext: np.ndarray        # body frame (3,)

    def __post_init__(self):
        if not (self.mass > 0 and np.all(self.inertia > 0) and self.arm_length > 0
                and self.drag_v >= 0 and self.drag_w >= 0):
            raise ValueError("invalid environment parameters")

    def as_vector(self) -> np.ndarray:
        return np.concatenate([
            [self.mass], self.inertia, [self.drag_v, self.drag_w, self.arm_length],
            self.f_ext, self.tau_ext,
        ])

    @staticmethod
    def from_vector(e: np.ndarray) -> "EnvParams":
        e = np.asarray(e, dtype=float)
        return EnvParams(
            mass=float(e[0]), inertia=e[1:4].copy(),
            drag_v=float(e[4]), drag_w=float(e[5]), arm_length=float(e[6]),
            f_ext=e[7:10].copy(), tau_ext=e[10:13].copy(),
        )

    def with_external(self, f_ext=None, tau_ext=None) -> "EnvParams":
        return replace(
            self,
            f_ext=self.f_ext if f_ext is None else np.asarray(f_ext, dtype=float),
            tau_ext=self.tau_ext if tau_ext is None else np.asarray(tau_ext, dtype=float),
        )


def nominal_env(regime: RegimeConfig) -> EnvParams:
    """Midpoint of the regime intervals (external wrench averages to zero)."""
    lo, hi = regime.bounds()
    return EnvParams.from_vector(0.5 * (lo + hi))


@dataclass(frozen=True)
class Wrench:
    """Collective thrust (N, along body z) and body torque (N m)."""

    thrust: float
    torque: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.concatenate([[self.thrust], self.torque])


@dataclass(frozen=True)
class WindField:
    """Position-dependent wind force: active on the p_x <= 0 half-space."""

    force: np.ndarray

    def at(self, position: np.ndarray) -> np.ndarray:
        return scenario_wind(position, self)


def scenario_wind(position: np.ndarray, scenario: WindField | None) -> np.ndarray:
    """Wind force at `position`; the disturbed half-space p_x <= 0 is inclusive."""
    if scenario is None or position[0] > 0.0:
        return np.zeros(3)
    return np.asarray(scenario.force, dtype=float)


# ---------------------------------------------------------------------------
# motor allocation

def allocation_matrix(arm_length: float, kappa: float = 0.016) -> np.ndarray:
    """4x6 map from individual motor forces to (thrust, torque)."""
    angles = np.deg2rad(30.0 + 60.0 * np.arange(6))
    spins = np.array([1.0, -1.0, 1.0, -1.0, 1.0, -1.0])
    m = np.empty((4, 6))
    m[0] = 1.0
    m[1] = arm_length * np.sin(angles)
    m[2] = -arm_length * np.cos(angles)
    m[3] = kappa * spins
    return m


def motors_to_wrench(motors: np.ndarray, arm_length: float,
                     kappa: float = 0.016) -> Wrench:
    u = allocation_matrix(arm_length, kappa) @ np.asarray(motors, dtype=float)
    return Wrench(thrust=float(u[0]), torque=u[1:4])


def wrench_to_motors(wrench: Wrench, arm_length: float, kappa: float = 0.016,
                     f_motor_max: float = 8.5,
                     clamp_tol: float | None = None) -> tuple[np.ndarray, bool]:
    """Minimum-norm motor forces realizing the wrench, clamped to limits.

    Returns (motors, saturated). Raises InfeasibleWrench when `clamp_tol`
    is given and any motor had to move by more than it.
    """
    m = allocation_matrix(arm_length, kappa)
    raw = np.linalg.pinv(m) @ wrench.as_array()
    motors = np.clip(raw, 0.0, f_motor_max)
    delta = np.max(np.abs(motors - raw))
    saturated = bool(delta > 1e-12)
    if clamp_tol is not None and delta > clamp_tol:
        raise InfeasibleWrench(
            f"wrench requires clamping motors by {delta:.3f} N (> {clamp_tol})")
    return motors, saturated


def hover_motors(env: EnvParams, gravity: float = GRAVITY) -> np.ndarray:
    return np.full(6, env.mass * gravity / 6.0)


# ---------------------------------------------------------------------------
# dynamics

def robot_deriv(x: np.ndarray, thrust: float, torque: np.ndarray,
                env: EnvParams, f_extra: np.ndarray | None = None,
                gravity: float = GRAVITY) -> np.ndarray:
    """Time derivative of the packed 13-dim state [p, v, q, w]."""
    v = x[3:6]
    q = x[6:10]
    w = x[10:13]
    r = quat_to_rotmat(q)
    f_world = thrust * r[:, 2] + env.f_ext - env.drag_v * v
    if f_extra is not None:
        f_world = f_world + f_extra
    v_dot = f_world / env.mass - gravity * _EZ
    wx, wy, wz = w
    omega = np.array([
        [0.0, -wx, -wy, -wz],
        [wx, 0.0, wz, -wy],
        [wy, -wz, 0.0, wx],
        [wz, wy, -wx, 0.0],
    ])
    q_dot = 0.5 * omega @ q
    jw = env.inertia * w
    w_dot = (-np.cross(w, jw) + torque - env.drag_w * w + env.tau_ext) / env.inertia
    return np.concatenate([v, v_dot, q_dot, w_dot])


def step_dynamics(state: RobotState, motors: np.ndarray, env: EnvParams,
                  dt: float, f_extra: np.ndarray | None = None,
                  kappa: float = 0.016, gravity: float = GRAVITY) -> RobotState:
    """One classical RK4 step; quaternion renormalized afterwards.

    `f_extra` is an additional world-frame force (e.g. scenario wind) held
    constant over the step.
    """
    wrench = motors_to_wrench(motors, env.arm_length, kappa)
    x = state.as_array()
    k1 = robot_deriv(x, wrench.thrust, wrench.torque, env, f_extra, gravity)
    k2 = robot_deriv(x + 0.5 * dt * k1, wrench.thrust, wrench.torque, env, f_extra, gravity)
    k3 = robot_deriv(x + 0.5 * dt * k2, wrench.thrust, wrench.torque, env, f_extra, gravity)
    k4 = robot_deriv(x + dt * k3, wrench.thrust, wrench.torque, env, f_extra, gravity)
    x_next = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    if not np.all(np.isfinite(x_next)):
        raise NonFiniteState("non-finite state after integration step")
    x_next[6:10] = quat_normalize(x_next[6:10])
    return RobotState.from_array(x_next)


# ---------------------------------------------------------------------------
# controller-facing state view

def ctrl_from_robot(state: RobotState) -> np.ndarray:
    """12-dim controller view: position, velocity, roll-pitch-yaw, body rates."""
    return np.concatenate([state.p, state.v, quat_to_euler_zyx(state.q), state.w])


def robot_from_ctrl(x: np.ndarray) -> RobotState:
    return RobotState(
        p=x[0:3].copy(), v=x[3:6].copy(),
        q=euler_zyx_to_quat(x[6:9]), w=x[9:12].copy(),
    )


def ctrl_deriv(x: np.ndarray, wrench: np.ndarray, env: EnvParams,
               f_extra: np.ndarray | None = None,
               gravity: float = GRAVITY) -> np.ndarray:
    """Continuous-time vector field in controller coordinates.

    `wrench` is the absolute (thrust, torque) input. Used by the
    finite-difference checks of the hover linearization.
    """
    robot = robot_from_ctrl(x)
    dx = robot_deriv(robot.as_array(), float(wrench[0]), np.asarray(wrench[1:4]),
                     env, f_extra, gravity)
    rpy_dot = euler_rate_matrix(x[6:9]) @ x[9:12]
    return np.concatenate([dx[0:3], dx[3:6], rpy_dot, dx[10:13]])


# ---------------------------------------------------------------------------
# environment randomization

def sample_env(regime: RegimeConfig, rng: np.random.Generator) -> EnvParams:
    """Uniform draw of every environment entry within its regime interval."""
    lo, hi = regime.bounds()
    return EnvParams.from_vector(rng.uniform(lo, hi))


def evolve_env(env: EnvParams, regime: RegimeConfig,
               rng: np.random.Generator) -> tuple[EnvParams, bool]:
    """Resample each entry independently with the regime's change probability."""
    lo, hi = regime.bounds()
    e = env.as_vector()
    flip = rng.random(ENV_DIM) < regime.change_prob
    fresh = rng.uniform(lo, hi)
    e_new = np.where(flip, fresh, e)
    changed = bool(np.any(e_new != e))
    if not changed:
        return env, False
    return EnvParams.from_vector(e_new), changed
