"""Attitude propagation from a sampled angular-velocity profile.

Three steppers integrate dR/dt = hat(w) @ R:

* exponential: R <- exp(dt * w) @ R, stays on SO(3) to roundoff
* euler: R <- (I + hat(dt * w)) @ R, leaves the manifold at O(dt^2) per step
* euler_renorm: the Euler step followed by polar projection back onto SO(3)

Euler trajectories store the raw drifted matrices; the drift is the
measurement, not an error.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .algebra import exp_so3, hat
from .core import RotationMatrix, So3Error, as_vec3, ortho_defect, project_to_so3

__all__ = [
    "OutOfRange",
    "EmptyProfile",
    "BadStep",
    "Interpolation",
    "Method",
    "RateSampling",
    "RateProfile",
    "Trajectory",
    "DriftReport",
    "sample_rate",
    "step_exponential",
    "step_euler",
    "step_euler_renorm",
    "propagate",
    "subsample",
    "drift_report",
]


class OutOfRange(So3Error):
    """Requested time lies outside the profile's sampled span."""


class EmptyProfile(So3Error):
    """Rate profile has no samples."""


class BadStep(So3Error):
    """Step size is nonpositive or exceeds the profile span."""


class Interpolation(enum.Enum):
    ZERO_ORDER_HOLD = "zoh"
    LINEAR = "linear"


class Method(enum.Enum):
    EXPONENTIAL = "exp"
    EULER = "euler"
    EULER_RENORM = "euler_renorm"


class RateSampling(enum.Enum):
    """Where the per-step angular velocity is evaluated.

    START keeps the classic first-order accuracy story for the Euler
    stepper: with MIDPOINT evaluation the Euler step's leading defect is
    purely symmetric, polar projection removes it, and the projected
    attitude error becomes second order, indistinguishable from the
    exponential stepper.  START is therefore the default.
    """

    START = "start"
    MIDPOINT = "midpoint"


@dataclass(frozen=True)
class RateProfile:
    """Sampled angular velocity w(t), rad/s in the fixed frame.

    times: strictly increasing sample times, shape (N,)
    omegas: corresponding rate vectors, shape (N, 3)
    """

    times: np.ndarray
    omegas: np.ndarray
    interpolation: Interpolation = Interpolation.LINEAR

    def __post_init__(self):
        times = np.array(self.times, dtype=float).reshape(-1)
        omegas = np.array(self.omegas, dtype=float)
        if times.size == 0:
            raise EmptyProfile("rate profile has no samples")
        if omegas.shape != (times.size, 3):
            raise ValueError(f"omegas shape {omegas.shape} does not match {times.size} samples")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(omegas))):
            raise ValueError("rate profile contains non-finite values")
        if times.size > 1 and np.any(np.diff(times) <= 0.0):
            raise ValueError("sample times must be strictly increasing")
        times.flags.writeable = False
        omegas.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "omegas", omegas)

    @classmethod
    def constant(cls, omega, t0: float, tf: float,
                 interpolation: Interpolation = Interpolation.LINEAR) -> "RateProfile":
        w = as_vec3(omega)
        return cls(np.array([t0, tf]), np.array([w, w]), interpolation)

    @property
    def span(self) -> tuple[float, float]:
        return float(self.times[0]), float(self.times[-1])


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled attitude history R(t) from one propagation run.

    Matrices are raw stepper output; for the Euler method they may have
    drifted off SO(3).
    """

    times: np.ndarray
    matrices: np.ndarray
    method: str
    dt: float
    initial: np.ndarray
    truncated_span: bool = False

    def __post_init__(self):
        times = np.array(self.times, dtype=float).reshape(-1)
        mats = np.array(self.matrices, dtype=float)
        if times.size == 0 or mats.shape != (times.size, 3, 3):
            raise ValueError(f"matrices shape {mats.shape} does not match {times.size} samples")
        if times.size > 1:
            diffs = np.diff(times)
            scale = max(1.0, float(np.max(np.abs(times))))
            if np.max(np.abs(diffs - np.mean(diffs))) > 1e-12 * scale:
                raise ValueError("trajectory sample times are not uniform")
        times.flags.writeable = False
        mats.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "initial", np.array(self.initial, dtype=float))

    def __len__(self) -> int:
        return int(self.times.size)

    def final(self) -> np.ndarray:
        return self.matrices[-1]


@dataclass(frozen=True)
class DriftReport:
    """Per-sample departure from SO(3): orthogonality and determinant errors."""

    per_sample: list[tuple[float, float, float]]  # (t, ortho_err, det_err)
    max_ortho_err: float
    max_det_err: float


def sample_rate(profile: RateProfile, t: float) -> np.ndarray:
    """Evaluate the profile at time t (inclusive of both endpoints).

    Zero-order hold takes the latest sample at or before t; linear
    interpolation blends the bracketing samples.  Both are exact at the
    sample times.
    """
    times, omegas = profile.times, profile.omegas
    t0, tf = profile.span
    slack = 1e-9 * max(1.0, abs(t0), abs(tf))
    if t < t0 - slack or t > tf + slack:
        raise OutOfRange(f"t = {t} outside profile span [{t0}, {tf}]")
    t = min(max(t, t0), tf)
    idx = int(np.searchsorted(times, t, side="right")) - 1
    idx = min(max(idx, 0), times.size - 1)
    if profile.interpolation is Interpolation.ZERO_ORDER_HOLD or idx == times.size - 1:
        return np.array(omegas[idx])
    frac = (t - times[idx]) / (times[idx + 1] - times[idx])
    return (1.0 - frac) * omegas[idx] + frac * omegas[idx + 1]


def step_exponential(r: RotationMatrix, omega, dt: float) -> RotationMatrix:
    """Exact flow of the rate identity for omega frozen over the step."""
    _check_step(dt)
    return RotationMatrix(exp_so3(dt * as_vec3(omega), r.tol).matrix @ r.matrix, r.tol)


def step_euler(r, omega, dt: float) -> np.ndarray:
    """First-order step (I + hat(dt * omega)) @ R; output is a plain matrix
    whose orthogonality defect grows as dt^2."""
    _check_step(dt)
    m = r.matrix if isinstance(r, RotationMatrix) else np.asarray(r, dtype=float)
    return (np.eye(3) + hat(dt * as_vec3(omega)).matrix) @ m


def step_euler_renorm(r: RotationMatrix, omega, dt: float) -> RotationMatrix:
    """Euler step followed by polar projection back onto SO(3)."""
    _check_step(dt)
    return project_to_so3(step_euler(r, omega, dt), r.tol)


def _check_step(dt: float) -> None:
    if not (np.isfinite(dt) and dt > 0.0):
        raise BadStep(f"dt must be positive and finite, got {dt}")


def propagate(r0: RotationMatrix, profile: RateProfile, dt: float, method: Method,
              rate_sampling: RateSampling = RateSampling.START) -> Trajectory:
    """Integrate the rate identity over the profile span on a uniform grid.

    The rate for each step is evaluated at the step start (see
    RateSampling).  If the span is not an integer multiple of dt the grid
    is truncated to the last full step (never extrapolated); the
    truncation is recorded on the trajectory.
    """
    _check_step(dt)
    t0, tf = profile.span
    span = tf - t0
    if span < dt:
        raise BadStep(f"dt = {dt} exceeds profile span {span}")
    ratio = span / dt
    n_steps = int(round(ratio)) if abs(ratio - round(ratio)) <= 1e-9 * max(1.0, ratio) \
        else int(np.floor(ratio))
    truncated = n_steps * dt < span * (1.0 - 1e-12)

    times = t0 + dt * np.arange(n_steps + 1)
    mats = np.empty((n_steps + 1, 3, 3))
    mats[0] = r0.matrix
    offset = 0.5 * dt if rate_sampling is RateSampling.MIDPOINT else 0.0

    if method is Method.EULER:
        state = np.array(r0.matrix)
        for k in range(n_steps):
            w = sample_rate(profile, t0 + k * dt + offset)
            state = step_euler(state, w, dt)
            mats[k + 1] = state
    else:
        step = step_exponential if method is Method.EXPONENTIAL else step_euler_renorm
        rot = r0
        for k in range(n_steps):
            w = sample_rate(profile, t0 + k * dt + offset)
            rot = step(rot, w, dt)
            mats[k + 1] = rot.matrix

    return Trajectory(times=times, matrices=mats, method=method.value, dt=dt,
                      initial=r0.matrix, truncated_span=truncated)


def subsample(traj: Trajectory, stride: int) -> Trajectory:
    """Every stride-th sample of a trajectory (effective step stride * dt)."""
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    if stride == 1:
        return traj
    return Trajectory(times=traj.times[::stride], matrices=traj.matrices[::stride],
                      method=traj.method, dt=traj.dt * stride, initial=traj.initial,
                      truncated_span=traj.truncated_span)


def drift_report(traj: Trajectory) -> DriftReport:
    """Measure orthogonality and determinant drift at every sample."""
    per_sample = []
    for t, m in zip(traj.times, traj.matrices):
        per_sample.append((float(t), ortho_defect(m), abs(float(np.linalg.det(m)) - 1.0)))
    return DriftReport(per_sample=per_sample,
                       max_ortho_err=max(p[1] for p in per_sample),
                       max_det_err=max(p[2] for p in per_sample))
