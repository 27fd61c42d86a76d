"""Floating-point even Clifford elements and path lifting to the spin group.

This module is the numerical oracle that pins the sign conventions of the
exact arithmetic: a path in SO(m) is lifted step by step, multiplying the
running lift by exp of the bivector corresponding to the principal logarithm
of each relative rotation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from . import clifford_exact as ce

__all__ = [
    "SpinNumeric",
    "FramePath",
    "lift_path",
    "snap_to_exact",
    "snap_against",
    "bivector_from_skew",
    "exp_bivector",
    "rotation_log",
    "StepGuardError",
    "SnapError",
]

STEP_GUARD = np.pi / 4
RENORM_EVERY = 16


class StepGuardError(ValueError):
    """Consecutive frames differ by too large a rotation for safe lifting."""


class SnapError(ValueError):
    """No exact element within tolerance of the numerical spin element."""


@lru_cache(maxsize=None)
def _grade1_masks(m: int) -> np.ndarray:
    return np.array([1 << i for i in range(m)], dtype=np.int64)


@lru_cache(maxsize=None)
def _odd_mask(m: int) -> np.ndarray:
    grades = np.array([mask.bit_count() for mask in range(1 << m)])
    return grades % 2 == 1


@lru_cache(maxsize=None)
def _reverse_signs(m: int) -> np.ndarray:
    grades = np.array([mask.bit_count() for mask in range(1 << m)])
    return np.where((grades * (grades - 1) // 2) % 2 == 1, -1.0, 1.0)


class SpinNumeric:
    """Dense even Clifford element; coefficients indexed by blade mask."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs: np.ndarray):
        self.m = int(m)
        self.coeffs = np.asarray(coeffs, dtype=np.float64)
        if self.coeffs.shape != (1 << self.m,):
            raise ValueError(f"expected {1 << self.m} coefficients")

    @staticmethod
    def one(m: int) -> "SpinNumeric":
        coeffs = np.zeros(1 << m)
        coeffs[0] = 1.0
        return SpinNumeric(m, coeffs)

    @staticmethod
    def from_exact(z: ce.ExactSpinElement) -> "SpinNumeric":
        return SpinNumeric(z.m, z.to_numeric())

    def mul(self, other: "SpinNumeric") -> "SpinNumeric":
        return SpinNumeric(self.m, _kernels.dense_mul(self.coeffs, other.coeffs, self.m))

    def reverse(self) -> "SpinNumeric":
        return SpinNumeric(self.m, self.coeffs * _reverse_signs(self.m))

    def neg(self) -> "SpinNumeric":
        return SpinNumeric(self.m, -self.coeffs)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.coeffs**2)))

    def normalized(self) -> "SpinNumeric":
        return SpinNumeric(self.m, self.coeffs / self.norm())

    def is_even(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs[_odd_mask(self.m)]) <= tol))

    def distance(self, other: "SpinNumeric") -> float:
        return float(np.max(np.abs(self.coeffs - other.coeffs)))

    def so_matrix(self) -> np.ndarray:
        """Image under the covering map: columns are z e_j reverse(z)."""
        m = self.m
        rev = self.coeffs * _reverse_signs(m)
        out = np.empty((m, m))
        g1 = _grade1_masks(m)
        for j in range(m):
            e_j = np.zeros(1 << m)
            e_j[1 << j] = 1.0
            col = _kernels.dense_mul(
                _kernels.dense_mul(self.coeffs, e_j, m), rev, m
            )
            out[:, j] = col[g1]
        return out


def bivector_from_skew(skew: np.ndarray) -> np.ndarray:
    """Dense coefficients of the bivector mapping to the skew matrix.

    Inverse of the covering map differential: the rotation generator with
    L[j, i] = theta (rotation from axis i+1 toward axis j+1) corresponds to
    (theta/2) e_{j+1} e_{i+1}.
    """
    skew = np.asarray(skew, dtype=np.float64)
    m = skew.shape[0]
    coeffs = np.zeros(1 << m)
    for i in range(m):
        for j in range(i + 1, m):
            # (1/2) L[j,i] e_{j+1} e_{i+1} = -(1/2) L[j,i] on the canonical blade
            coeffs[(1 << i) | (1 << j)] = -0.5 * skew[j, i]
    return coeffs


def skew_from_bivector(coeffs: np.ndarray, m: int) -> np.ndarray:
    skew = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            skew[j, i] = -2.0 * coeffs[(1 << i) | (1 << j)]
            skew[i, j] = -skew[j, i]
    return skew


def exp_bivector(coeffs: np.ndarray, m: int, tol: float = 1e-16) -> np.ndarray:
    """exp of a bivector by the Clifford power series (small arguments)."""
    result = np.zeros(1 << m)
    result[0] = 1.0
    term = result.copy()
    for n in range(1, 60):
        term = _kernels.dense_mul(term, coeffs, m) / n
        result = result + term
        if np.max(np.abs(term)) < tol:
            break
    else:
        raise ValueError("bivector exponential series did not converge")
    return result


def rotation_log(rot: np.ndarray, tol: float = 1e-15) -> np.ndarray:
    """Principal logarithm of a rotation matrix within the step guard."""
    rot = np.asarray(rot, dtype=np.float64)
    m = rot.shape[0]
    delta = rot - np.eye(m)
    gap = np.linalg.norm(delta, 2)
    if gap > 2 * np.sin(STEP_GUARD / 2) + 1e-9:
        raise StepGuardError(f"rotation step too large: |R - I| = {gap:.3f}")
    log = np.zeros_like(delta)
    term = np.eye(m)
    for n in range(1, 200):
        term = term @ delta
        log += ((-1) ** (n + 1) / n) * term
        if np.linalg.norm(term, np.inf) / n < tol:
            break
    return 0.5 * (log - log.T)


@dataclass
class FramePath:
    """A sampled path of special-orthogonal frames with optional spin lifts."""

    times: np.ndarray
    frames: np.ndarray
    lifts: list[SpinNumeric] | None = field(default=None)

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=np.float64)
        self.frames = np.asarray(self.frames, dtype=np.float64)
        if self.frames.ndim != 3 or self.frames.shape[0] != self.times.shape[0]:
            raise ValueError("frames must be (T, m, m) matching times")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing")

    @property
    def m(self) -> int:
        return self.frames.shape[1]

    def validate(self, ortho_tol: float = 1e-8) -> None:
        eye = np.eye(self.m)
        for k, frame in enumerate(self.frames):
            if np.max(np.abs(frame.T @ frame - eye)) > ortho_tol:
                raise ValueError(f"frame {k} is not orthogonal within {ortho_tol}")
            if np.linalg.det(frame) < 0:
                raise ValueError(f"frame {k} has negative determinant")
        for k in range(len(self.frames) - 1):
            rel = self.frames[k].T @ self.frames[k + 1]
            angle = 2 * np.arcsin(min(1.0, np.linalg.norm(rel - eye, 2) / 2))
            if angle >= STEP_GUARD:
                raise StepGuardError(f"step {k} rotates by {angle:.3f} >= pi/4")

    def to_json_dict(self) -> dict:
        data = {
            "times": self.times.tolist(),
            "frames": [frame.tolist() for frame in self.frames],
        }
        if self.lifts is not None:
            data["lifts"] = [lift.coeffs.tolist() for lift in self.lifts]
        return data

    @staticmethod
    def from_json_dict(data: dict) -> "FramePath":
        lifts = None
        if "lifts" in data:
            m = int(np.log2(len(data["lifts"][0])))
            lifts = [SpinNumeric(m, np.array(c)) for c in data["lifts"]]
        return FramePath(np.array(data["times"]), np.array(data["frames"]), lifts)


def lift_path(path: FramePath, start: SpinNumeric, proj_tol: float = 1e-6) -> FramePath:
    """Fill in the unique continuous spin lift of the frame path."""
    if start.m != path.m:
        raise ValueError("dimension mismatch between start and path")
    if np.max(np.abs(start.so_matrix() - path.frames[0])) > proj_tol:
        raise ValueError("start does not project to the initial frame")
    lifts = [start]
    z = start
    for k in range(len(path.frames) - 1):
        rel = path.frames[k].T @ path.frames[k + 1]
        log = rotation_log(rel)
        rotor = exp_bivector(bivector_from_skew(log), path.m)
        z = SpinNumeric(path.m, _kernels.dense_mul(z.coeffs, rotor, path.m))
        if (k + 1) % RENORM_EVERY == 0:
            z = z.normalized()
        lifts.append(z)
    return FramePath(path.times, path.frames, lifts)


@lru_cache(maxsize=None)
def _exact_table(m: int) -> tuple[tuple[ce.ExactSpinElement, ...], np.ndarray]:
    elements = tuple(ce.enumerate_tilde_d(m))
    numeric = np.stack([z.to_numeric() for z in elements])
    return elements, numeric


def snap_against(
    z: SpinNumeric,
    candidates: list[ce.ExactSpinElement],
    tol: float,
) -> tuple[ce.ExactSpinElement, float]:
    """Snap to the nearest of an explicit candidate list."""
    best = None
    best_err = np.inf
    for candidate in candidates:
        err = float(np.max(np.abs(z.coeffs - candidate.to_numeric())))
        if err < best_err:
            best, best_err = candidate, err
    if best is None or best_err > tol:
        raise SnapError(f"no exact element within {tol} (best {best_err:.3e})")
    return best, best_err


def snap_to_exact(z: SpinNumeric, tol: float = 1e-6) -> tuple[ce.ExactSpinElement, float]:
    """Snap to the nearest element of the double cover of D_m."""
    elements, numeric = _exact_table(z.m)
    errs = np.max(np.abs(numeric - z.coeffs[None, :]), axis=1)
    idx = int(np.argmin(errs))
    if errs[idx] > tol:
        raise SnapError(f"no exact element within {tol} (best {errs[idx]:.3e})")
    return elements[idx], float(errs[idx])
