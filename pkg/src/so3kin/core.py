"""Value types and validation for 3x3 rotation matrices.

Conventions used throughout the package:

* all angles are radians, all rates are rad/s
* vectors are numpy arrays of shape (3,), matrices of shape (3, 3)
* matrices are row-major when flattened or serialized
* every value type is immutable; operations are pure functions
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "So3Error",
    "NonFinite",
    "NotOrthogonal",
    "NotProperRotation",
    "NotSkewSymmetric",
    "NotProjectable",
    "NoConvergence",
    "DegenerateFrame",
    "ToleranceConfig",
    "DEFAULT_TOL",
    "as_vec3",
    "as_mat3",
    "ortho_defect",
    "RotationMatrix",
    "SkewMatrix",
    "skew_from_matrix",
    "Frame",
    "validate_rotation",
    "project_to_so3",
]


class So3Error(Exception):
    """Base class for every error raised by this package."""


class NonFinite(So3Error):
    """An input contains NaN or infinite entries."""


class NotOrthogonal(So3Error):
    """Matrix fails the orthogonality test ||M^T M - I||_F <= ortho_tol."""


class NotProperRotation(So3Error):
    """Matrix is orthogonal but has determinant != +1 (e.g. a reflection)."""


class NotSkewSymmetric(So3Error):
    """Matrix is not skew-symmetric within tolerance."""


class NotProjectable(So3Error):
    """Matrix has nonpositive determinant or is singular; no nearest rotation."""


class NoConvergence(So3Error):
    """Iterative projection failed to converge within the iteration cap."""


class DegenerateFrame(So3Error):
    """Frame basis vectors are not an orthonormal triad within tolerance."""


def as_vec3(v) -> np.ndarray:
    """Coerce to a read-only float64 vector of shape (3,), rejecting non-finite input."""
    arr = np.array(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected 3 components, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFinite(f"vector has non-finite components: {arr}")
    arr.flags.writeable = False
    return arr


def as_mat3(m) -> np.ndarray:
    """Coerce to a read-only float64 matrix of shape (3, 3), rejecting non-finite input."""
    arr = np.array(m, dtype=float)
    if arr.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFinite("matrix has non-finite entries")
    arr.flags.writeable = False
    return arr


def ortho_defect(m: np.ndarray) -> float:
    """Frobenius norm of M^T M - I."""
    return float(np.linalg.norm(m.T @ m - np.eye(3)))


@dataclass(frozen=True)
class ToleranceConfig:
    """Numeric tolerances for SO(3) membership and small-angle switching."""

    ortho_tol: float = 1e-9
    det_tol: float = 1e-9
    small_angle_tol: float = 1e-7  # radians

    def __post_init__(self):
        for name in ("ortho_tol", "det_tol", "small_angle_tol"):
            value = getattr(self, name)
            if not (0.0 < value < 1e-2):
                raise ValueError(f"{name} must be in (0, 1e-2), got {value}")


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class RotationMatrix:
    """A validated element of SO(3).

    Construction runs the full membership test, so any live instance is a
    proper rotation under the tolerances it was built with.  The wrapped
    array is read-only; there is no mutation path.
    """

    matrix: np.ndarray
    tol: ToleranceConfig = field(default_factory=ToleranceConfig, compare=False, repr=False)

    def __post_init__(self):
        m = as_mat3(self.matrix)
        defect = ortho_defect(m)
        if defect > self.tol.ortho_tol:
            raise NotOrthogonal(
                f"||M^T M - I||_F = {defect:.3e} exceeds ortho_tol = {self.tol.ortho_tol:.3e}"
            )
        det = float(np.linalg.det(m))
        if abs(det - 1.0) > self.tol.det_tol:
            raise NotProperRotation(
                f"|det - 1| = {abs(det - 1.0):.3e} exceeds det_tol = {self.tol.det_tol:.3e}"
                f" (det = {det:.6f})"
            )
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, tol: ToleranceConfig = DEFAULT_TOL) -> "RotationMatrix":
        return cls(np.eye(3), tol)

    def inverse(self) -> "RotationMatrix":
        """The inverse rotation (transpose)."""
        return RotationMatrix(self.matrix.T, self.tol)

    def apply(self, v) -> np.ndarray:
        return self.matrix @ as_vec3(v)


@dataclass(frozen=True)
class SkewMatrix:
    """A 3x3 skew-symmetric matrix, stored as its unique generating vector.

    Storing the vector makes skew-symmetry unfalsifiable and the inverse
    (vee) exact; the 3x3 form is materialized on demand.
    """

    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "v", as_vec3(self.v))

    @property
    def matrix(self) -> np.ndarray:
        x, y, z = self.v
        return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def skew_from_matrix(m, tol: ToleranceConfig = DEFAULT_TOL) -> SkewMatrix:
    """Build a SkewMatrix from a 3x3 matrix, rejecting non-skew input."""
    arr = as_mat3(m)
    sym = float(np.linalg.norm(arr + arr.T))
    if sym > tol.ortho_tol:
        raise NotSkewSymmetric(f"||M + M^T||_F = {sym:.3e} exceeds {tol.ortho_tol:.3e}")
    return SkewMatrix(np.array([arr[2, 1], arr[0, 2], arr[1, 0]]))


@dataclass(frozen=True)
class Frame:
    """A Cartesian frame: three unit basis vectors in a common ambient frame.

    Construction checks unit norms and pairwise orthogonality.  Handedness
    is checked where a rotation is actually built (rotation_from_frames),
    which reports a left-handed triad as NotProperRotation.
    """

    i: np.ndarray
    j: np.ndarray
    k: np.ndarray
    tol: ToleranceConfig = field(default_factory=ToleranceConfig, compare=False, repr=False)

    def __post_init__(self):
        i, j, k = as_vec3(self.i), as_vec3(self.j), as_vec3(self.k)
        for name, vec in (("i", i), ("j", j), ("k", k)):
            err = abs(float(np.linalg.norm(vec)) - 1.0)
            if err > self.tol.ortho_tol:
                raise DegenerateFrame(f"basis vector {name} is not unit length (|norm-1| = {err:.3e})")
        for pair, dot in (("i.j", i @ j), ("i.k", i @ k), ("j.k", j @ k)):
            if abs(float(dot)) > self.tol.ortho_tol:
                raise DegenerateFrame(f"basis vectors not orthogonal: {pair} = {float(dot):.3e}")
        object.__setattr__(self, "i", i)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "k", k)

    @property
    def basis(self) -> np.ndarray:
        """Basis vectors as matrix columns [i j k]."""
        return np.column_stack([self.i, self.j, self.k])

    def is_right_handed(self) -> bool:
        return float(np.cross(self.i, self.j) @ self.k) >= 1.0 - self.tol.ortho_tol


def validate_rotation(m, tol: ToleranceConfig = DEFAULT_TOL) -> RotationMatrix:
    """Check SO(3) membership of a 3x3 matrix and wrap it unchanged.

    Raises NonFinite, NotOrthogonal, or NotProperRotation.
    """
    return RotationMatrix(m, tol)


_PROJECTION_STOP = 1e-15
_PROJECTION_MAX_ITER = 100


def project_to_so3(m, tol: ToleranceConfig = DEFAULT_TOL) -> RotationMatrix:
    """Nearest rotation in Frobenius norm via the polar Newton iteration.

    Iterates X <- (X + X^-T)/2 until successive iterates differ by at most
    1e-15 in Frobenius norm.  Requires det(m) > 0 so the orthogonal polar
    factor is a proper rotation.
    """
    x = np.array(as_mat3(m))
    det = float(np.linalg.det(x))
    if det <= 0.0:
        raise NotProjectable(f"det = {det:.3e} is not positive; no nearest rotation")
    for _ in range(_PROJECTION_MAX_ITER):
        try:
            inv_t = np.linalg.inv(x).T
        except np.linalg.LinAlgError:
            raise NotProjectable("matrix became singular during projection") from None
        nxt = 0.5 * (x + inv_t)
        delta = float(np.linalg.norm(nxt - x))
        x = nxt
        if delta <= _PROJECTION_STOP:
            break
    else:
        raise NoConvergence(
            f"polar iteration did not converge in {_PROJECTION_MAX_ITER} iterations"
        )
    return RotationMatrix(x, tol)
