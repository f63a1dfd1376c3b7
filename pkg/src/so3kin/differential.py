"""The rotation-rate identity dR/dt = hat(w) @ R and its finite-difference
verification with convergence-order estimation.

The angular velocity w is spatial: expressed in the fixed reference frame,
so the skew matrix multiplies R from the left.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import hat
from .core import RotationMatrix, So3Error

__all__ = [
    "NonUniformSampling",
    "TooFewSamples",
    "DegenerateInput",
    "ResidualReport",
    "differential_increment",
    "rotation_rate",
    "finite_difference_residual",
    "estimate_convergence_order",
    "residual_order_report",
    "geodesic_distance",
]


class NonUniformSampling(So3Error):
    """Trajectory sample times are not uniformly spaced."""


class TooFewSamples(So3Error):
    """Fewer samples than the operation requires."""


class DegenerateInput(So3Error):
    """Convergence-order input has nonpositive or duplicate step sizes."""


@dataclass(frozen=True)
class ResidualReport:
    """Finite-difference residuals of the rate identity over a trajectory.

    per_sample holds (time, Frobenius residual) at each interior sample.
    estimated_order is the log-log regression slope of residual vs step
    size; it is None when fewer than two step sizes were measured.
    """

    max_residual: float
    per_sample: list[tuple[float, float]]
    step_sizes: list[float]
    estimated_order: Optional[float]


def differential_increment(dphi, r: RotationMatrix) -> np.ndarray:
    """Increment of R under an infinitesimal rotation: hat(dphi) @ R.

    Agrees entrywise exactly with (infinitesimal_rotation(dphi) - I) @ R.
    """
    return hat(dphi).matrix @ r.matrix


def rotation_rate(w, r: RotationMatrix) -> np.ndarray:
    """Time derivative of R for spatial angular velocity w: hat(w) @ R."""
    return hat(w).matrix @ r.matrix


def _uniform_step(times: np.ndarray) -> float:
    diffs = np.diff(times)
    h = float(np.mean(diffs))
    scale = max(1.0, float(np.max(np.abs(times))))
    if np.max(np.abs(diffs - h)) > 1e-12 * scale:
        raise NonUniformSampling("trajectory sample times deviate from a uniform grid")
    return h


def finite_difference_residual(trajectory, profile) -> ResidualReport:
    """Check a sampled trajectory against dR/dt = hat(w) @ R.

    For each interior sample k the residual is the Frobenius norm of the
    central difference (R[k+1] - R[k-1]) / (2h) minus hat(w(t_k)) @ R[k].
    Endpoints are skipped so all residuals share the O(h^2) error order.
    """
    from .propagator import sample_rate  # deferred to avoid an import cycle

    times = np.asarray(trajectory.times, dtype=float)
    mats = np.asarray(trajectory.matrices, dtype=float)
    if len(times) < 3:
        raise TooFewSamples(f"need at least 3 samples, got {len(times)}")
    h = _uniform_step(times)

    per_sample: list[tuple[float, float]] = []
    for k in range(1, len(times) - 1):
        diff = (mats[k + 1] - mats[k - 1]) / (2.0 * h)
        w = sample_rate(profile, float(times[k]))
        residual = float(np.linalg.norm(diff - hat(w).matrix @ mats[k]))
        per_sample.append((float(times[k]), residual))
    max_residual = max(res for _, res in per_sample)
    return ResidualReport(max_residual=max_residual, per_sample=per_sample,
                          step_sizes=[h], estimated_order=None)


def estimate_convergence_order(residuals) -> float:
    """Least-squares slope of log(residual) vs log(step size)."""
    pairs = [(float(s), float(r)) for s, r in residuals]
    if len(pairs) < 2:
        raise DegenerateInput("need at least 2 (step, residual) pairs")
    steps = [s for s, _ in pairs]
    if any(s <= 0.0 for s in steps) or any(r <= 0.0 for _, r in pairs):
        raise DegenerateInput("steps and residuals must be strictly positive")
    if len(set(steps)) != len(steps):
        raise DegenerateInput("step sizes must be distinct")
    log_s = np.log([s for s, _ in pairs])
    log_r = np.log([r for _, r in pairs])
    slope, _ = np.polyfit(log_s, log_r, 1)
    return float(slope)


def residual_order_report(trajectory, profile, strides=(1, 2, 4)) -> ResidualReport:
    """Residual report across several effective step sizes.

    Subsamples the trajectory by each integer stride (step size becomes
    stride * h), evaluates the residual at each, and regresses the maxima
    to estimate the convergence order.  per_sample and max_residual refer
    to the finest (stride 1 or smallest given) grid.
    """
    from .propagator import subsample

    strides = sorted(set(int(s) for s in strides))
    if any(s < 1 for s in strides):
        raise DegenerateInput("strides must be positive integers")
    reports = [(s, finite_difference_residual(subsample(trajectory, s), profile))
               for s in strides]
    finest = reports[0][1]
    step_sizes = [rep.step_sizes[0] for _, rep in reports]
    order = None
    if len(reports) >= 2:
        order = estimate_convergence_order(
            [(rep.step_sizes[0], rep.max_residual) for _, rep in reports]
        )
    return ResidualReport(max_residual=finest.max_residual,
                          per_sample=finest.per_sample,
                          step_sizes=step_sizes,
                          estimated_order=order)


def geodesic_distance(a: RotationMatrix, b: RotationMatrix) -> float:
    """Rotation angle separating two attitudes: ||log(a @ b^T)||."""
    from .algebra import log_so3

    rel = RotationMatrix(a.matrix @ b.matrix.T, a.tol)
    return float(np.linalg.norm(log_so3(rel)))
