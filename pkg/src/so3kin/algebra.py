"""Static rotation algebra: hat/vee, elementary and frame-derived rotations,
fixed-frame composition, infinitesimal rotations, and the exp/log bridge.

Composition is always with respect to the fixed reference frame: applying
rotation A first and then B yields the product B @ A.
"""
from __future__ import annotations

import enum

import numpy as np

from .core import (
    DEFAULT_TOL,
    Frame,
    NonFinite,
    NotProperRotation,
    RotationMatrix,
    SkewMatrix,
    ToleranceConfig,
    as_vec3,
)

__all__ = [
    "Axis",
    "hat",
    "vee",
    "elementary_rotation",
    "rotation_from_frames",
    "compose_fixed",
    "infinitesimal_rotation",
    "compose_infinitesimal",
    "exp_so3",
    "log_so3",
]


class Axis(enum.Enum):
    X = "x"
    Y = "y"
    Z = "z"


def hat(v) -> SkewMatrix:
    """Map a 3-vector to its skew-symmetric matrix:

    hat((x, y, z)) = [[0, -z, y], [z, 0, -x], [-y, x, 0]]
    """
    return SkewMatrix(as_vec3(v))


def vee(s: SkewMatrix) -> np.ndarray:
    """Inverse of hat: recover the generating vector, exactly."""
    return s.v


def elementary_rotation(axis: Axis, angle: float, tol: ToleranceConfig = DEFAULT_TOL) -> RotationMatrix:
    """Right-handed rotation about one of the fixed coordinate axes."""
    if not np.isfinite(angle):
        raise NonFinite(f"angle is not finite: {angle}")
    c, s = np.cos(angle), np.sin(angle)
    if axis is Axis.X:
        m = [[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]
    elif axis is Axis.Y:
        m = [[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]]
    elif axis is Axis.Z:
        m = [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]
    else:
        raise ValueError(f"unknown axis: {axis!r}")
    return RotationMatrix(m, tol)


def rotation_from_frames(target: Frame, reference: Frame, tol: ToleranceConfig = DEFAULT_TOL) -> RotationMatrix:
    """Rotation matrix representing `target` with respect to `reference`.

    Entry (r, c) is the dot product of the c-th basis vector of the target
    frame with the r-th basis vector of the reference frame, so each column
    is a target basis vector expressed in reference coordinates.
    """
    m = reference.basis.T @ target.basis
    if float(np.linalg.det(m)) < 0.0:
        raise NotProperRotation("frames differ in handedness (det < 0)")
    return RotationMatrix(m, tol)


def compose_fixed(first: RotationMatrix, second: RotationMatrix) -> RotationMatrix:
    """Compose two rotations performed about the fixed reference frame.

    The rotation applied first appears on the right: result = second @ first.
    """
    return RotationMatrix(second.matrix @ first.matrix, first.tol)


def infinitesimal_rotation(dphi) -> np.ndarray:
    """First-order rotation matrix I + hat(dphi) for an infinitesimal rotation.

    Returned as a plain 3x3 array, not a RotationMatrix: it is orthogonal
    only to first order in ||dphi||.
    """
    return np.eye(3) + hat(dphi).matrix


def compose_infinitesimal(d1, d2) -> np.ndarray:
    """Compose two infinitesimal rotations: componentwise addition."""
    return as_vec3(d1) + as_vec3(d2)


def exp_so3(phi, tol: ToleranceConfig = DEFAULT_TOL) -> RotationMatrix:
    """Exponential map (Rodrigues formula) from an axis-angle vector.

    R = I + a * hat(phi) + b * hat(phi)^2 with a = sin(t)/t and
    b = (1 - cos(t))/t^2, t = ||phi||.  Below small_angle_tol the
    coefficients switch to their second-order Taylor expansions to avoid
    cancellation.
    """
    phi = as_vec3(phi)
    theta = float(np.linalg.norm(phi))
    if theta < tol.small_angle_tol:
        a = 1.0 - theta * theta / 6.0
        b = 0.5 - theta * theta / 24.0
    else:
        a = np.sin(theta) / theta
        b = (1.0 - np.cos(theta)) / (theta * theta)
    s = hat(phi).matrix
    return RotationMatrix(np.eye(3) + a * s + b * (s @ s), tol)


_LOG_NEAR_PI = 1e-3  # radians from pi below which the symmetric-part branch is used


def log_so3(r: RotationMatrix) -> np.ndarray:
    """Logarithm map: canonical axis-angle vector with norm in [0, pi].

    At angle pi the axis sign is ambiguous; it is canonicalized so the
    first nonzero component among (x, y, z) is positive.
    """
    m = r.matrix
    cos_theta = np.clip((np.trace(m) - 1.0) / 2.0, -1.0, 1.0)
    theta = float(np.arccos(cos_theta))
    # (m - m^T)/2 = sin(theta) * hat(axis)
    w = np.array([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]]) / 2.0

    if theta < 1e-7:
        # phi = theta * axis = w * (theta / sin theta); correction is O(theta^3)
        return w
    if theta < np.pi - _LOG_NEAR_PI:
        return (theta / np.sin(theta)) * w

    # Near pi: recover axis*axis^T from the symmetric part.
    outer = ((m + m.T) / 2.0 - cos_theta * np.eye(3)) / (1.0 - cos_theta)
    k = int(np.argmax(np.diag(outer)))
    axis = outer[:, k] / np.sqrt(outer[k, k])
    if np.linalg.norm(w) > 1e-12:
        if float(axis @ w) < 0.0:
            axis = -axis
    else:
        for comp in axis:
            if abs(comp) > 1e-12:
                if comp < 0.0:
                    axis = -axis
                break
    return theta * axis
