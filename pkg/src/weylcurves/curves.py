"""Explicit locally convex curves on spheres and their Frenet frames.

The spiral family combines circles at distinct positive frequencies (plus a
constant coordinate when the sphere dimension is even, so the component count
comes out to n+1).  With positive amplitudes of unit square-sum and distinct
positive frequencies these curves are positive locally convex, which makes
them a reusable source of honest Frenet-frame paths: Wronskian positivity,
the tridiagonal-logarithm characterization of Frenet paths, endpoint germs
for the chop verification, time reversal and duality at the curve level, and
the accelerated-curve construction all live here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy.linalg import expm

from . import bruhat as br
from . import signed_perm as sp
from . import spin_numeric as sn

__all__ = [
    "CurveSpec",
    "TridiagonalLog",
    "FastCurveReport",
    "evaluate",
    "derivative_matrix",
    "wronskian",
    "frenet",
    "frame_path",
    "lift_spec_endpoint",
    "frenet_log_residual",
    "germ_frame",
    "verify_chop",
    "curve_tr",
    "curve_ad",
    "fast_curve_check",
    "fast_curve_demo",
    "random_spec",
    "standard_spec",
    "random_log",
]

WRONSKIAN_FLOOR = 1e-12
MP_PIVOT_THRESHOLD = 1e-8


@dataclass(frozen=True)
class CurveSpec:
    """Parameters of a spiral curve on the n-sphere.

    For even n the curve is (c[0], c[1]cos(a[0]t), c[1]sin(a[0]t), ...) with
    n/2 frequency pairs after the constant; for odd n there is no constant
    and (n+1)/2 pairs.  Amplitudes are positive with unit square-sum;
    frequencies are positive and pairwise distinct.
    """

    n: int
    c: tuple[float, ...]
    a: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("sphere dimension must be at least 2")
        object.__setattr__(self, "c", tuple(float(x) for x in self.c))
        object.__setattr__(self, "a", tuple(float(x) for x in self.a))
        pairs = self.n // 2 if self.n % 2 == 0 else (self.n + 1) // 2
        want_c = pairs + 1 if self.includes_constant else pairs
        if len(self.a) != pairs:
            raise ValueError(f"expected {pairs} frequencies for n={self.n}")
        if len(self.c) != want_c:
            raise ValueError(f"expected {want_c} amplitudes for n={self.n}")
        if any(x <= 0 for x in self.c) or any(x <= 0 for x in self.a):
            raise ValueError("amplitudes and frequencies must be positive")
        if len(set(self.a)) != len(self.a):
            raise ValueError("frequencies must be pairwise distinct")
        if abs(sum(x * x for x in self.c) - 1.0) > 1e-9:
            raise ValueError("amplitudes must have unit square-sum")

    @property
    def includes_constant(self) -> bool:
        return self.n % 2 == 0

    @property
    def m(self) -> int:
        return self.n + 1

    def to_json_dict(self) -> dict:
        return {"n": self.n, "c": list(self.c), "a": list(self.a)}

    @staticmethod
    def from_json_dict(data: dict) -> "CurveSpec":
        return CurveSpec(int(data["n"]), tuple(data["c"]), tuple(data["a"]))


def standard_spec(n: int) -> CurveSpec:
    """Deterministic spec with frequencies 1, 2, ... and equal amplitudes."""
    pairs = n // 2 if n % 2 == 0 else (n + 1) // 2
    n_amp = pairs + 1 if n % 2 == 0 else pairs
    c = tuple(1.0 / np.sqrt(n_amp) for _ in range(n_amp))
    a = tuple(float(i + 1) for i in range(pairs))
    return CurveSpec(n, c, a)


def random_spec(n: int, rng: np.random.Generator) -> CurveSpec:
    pairs = n // 2 if n % 2 == 0 else (n + 1) // 2
    n_amp = pairs + 1 if n % 2 == 0 else pairs
    c = rng.uniform(0.2, 1.0, size=n_amp)
    c = c / np.sqrt(np.sum(c * c))
    while True:
        a = np.sort(rng.uniform(0.5, 6.0, size=pairs))
        if pairs < 2 or np.min(np.diff(a)) > 1e-3:
            break
    return CurveSpec(n, tuple(c), tuple(a))


def evaluate(spec: CurveSpec, t: float, order: int = 0) -> np.ndarray:
    """Order-th derivative of the curve at t, in closed form."""
    if order < 0 or order > spec.n:
        raise ValueError("derivative order out of range")
    out = np.empty(spec.m)
    pos = 0
    c = spec.c
    if spec.includes_constant:
        out[0] = c[0] if order == 0 else 0.0
        pos = 1
        c = spec.c[1:]
    shift = order * np.pi / 2
    for ci, ai in zip(c, spec.a):
        amp = ci * ai**order
        out[pos] = amp * np.cos(ai * t + shift)
        out[pos + 1] = amp * np.sin(ai * t + shift)
        pos += 2
    return out


def derivative_matrix(spec: CurveSpec, t: float) -> np.ndarray:
    """Columns (curve, curve', ..., curve^(n)) at t."""
    return np.column_stack([evaluate(spec, t, k) for k in range(spec.n + 1)])


def wronskian(spec: CurveSpec, t: float) -> float:
    return float(np.linalg.det(derivative_matrix(spec, t)))


@lru_cache(maxsize=None)
def _initial_correction(spec: CurveSpec) -> np.ndarray:
    f, _ = br.positive_qr(derivative_matrix(spec, 0.0))
    return f.T


def frenet(spec: CurveSpec, t: float, standard_start: bool = True) -> np.ndarray:
    """Frenet frame: positive-diagonal orthogonalization of the derivative
    matrix, left-corrected so the frame at t=0 is the identity."""
    mat = derivative_matrix(spec, t)
    if abs(np.linalg.det(mat)) < WRONSKIAN_FLOOR:
        raise ValueError(f"Wronskian below {WRONSKIAN_FLOOR} at t={t}")
    f, _ = br.positive_qr(mat)
    if standard_start:
        f = _initial_correction(spec) @ f
    return f


def frame_path(spec: CurveSpec, samples: int | None = None) -> sn.FramePath:
    """Sampled Frenet-frame path on [0, 1] satisfying the lifting step guard."""
    if samples is None:
        samples = max(64, int(48 * (1 + max(spec.a))))
    times = np.linspace(0.0, 1.0, samples + 1)
    frames = np.array([frenet(spec, t) for t in times])
    return sn.FramePath(times, frames)


def lift_spec_endpoint(spec: CurveSpec, samples: int | None = None) -> sn.SpinNumeric:
    """Endpoint of the spin lift of the curve's Frenet-frame path."""
    path = frame_path(spec, samples)
    lifted = sn.lift_path(path, sn.SpinNumeric.one(spec.m))
    return lifted.lifts[-1]


def frenet_log_residual(
    spec: CurveSpec, t: float, step: float = 1e-6
) -> tuple[float, float]:
    """Finite-difference check of the Frenet-path characterization.

    Returns (max off-tridiagonal magnitude, min subdiagonal entry) of the
    finite-difference logarithmic derivative F(t)^T F'(t).  A genuine Frenet
    path has tridiagonal skew log-derivative with positive subdiagonal.
    """
    f0 = frenet(spec, t)
    f1 = frenet(spec, t + step)
    log = f0.T @ (f1 - f0) / step
    log = 0.5 * (log - log.T)
    m = spec.m
    off = 0.0
    for i in range(m):
        for j in range(m):
            if abs(i - j) > 1:
                off = max(off, abs(log[i, j]))
    sub = min(log[i + 1, i] for i in range(m - 1))
    return off, sub


@dataclass(frozen=True)
class TridiagonalLog:
    """Skew-symmetric tridiagonal matrix with positive subdiagonal entries,
    the logarithmic-derivative shape that characterizes Frenet paths."""

    m: int
    sub: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sub", tuple(float(x) for x in self.sub))
        if len(self.sub) != self.m - 1:
            raise ValueError("need m-1 subdiagonal entries")
        if any(x <= 0 for x in self.sub):
            raise ValueError("subdiagonal entries must be strictly positive")

    def matrix(self) -> np.ndarray:
        mat = np.zeros((self.m, self.m))
        for i, x in enumerate(self.sub):
            mat[i + 1, i] = x
            mat[i, i + 1] = -x
        return mat

    @staticmethod
    def ones(m: int) -> "TridiagonalLog":
        return TridiagonalLog(m, (1.0,) * (m - 1))


def random_log(m: int, rng: np.random.Generator) -> TridiagonalLog:
    return TridiagonalLog(m, tuple(np.exp(rng.uniform(np.log(0.1), np.log(10.0), m - 1))))


def germ_frame(q: sp.SignedPermutation, h: float, log: TridiagonalLog) -> np.ndarray:
    """Frenet frame slightly before an endpoint with frame Q: Q exp(-h L).

    Running the Frenet equation backwards from Q by time h with constant
    tridiagonal logarithm L gives an exact member of the admissible frame
    class, so its Bruhat cell is the cell any locally convex curve ending at
    Q occupies just before the endpoint.
    """
    if h <= 0 or h > 1e-2:
        raise ValueError("germ step must satisfy 0 < h <= 1e-2")
    return np.asarray(q.matrix(), dtype=np.float64) @ expm(-h * log.matrix())


def _mp_expm(mat: np.ndarray, terms: int = 80) -> np.ndarray:
    """Matrix exponential of a small object-dtype mpmath matrix by series."""
    m = mat.shape[0]
    result = np.array(
        [[mpmath.mpf(1) if i == j else mpmath.mpf(0) for j in range(m)] for i in range(m)],
        dtype=object,
    )
    term = result.copy()
    for k in range(1, terms):
        term = term @ mat / k
        result = result + term
        if max(abs(x) for x in term.ravel()) < mpmath.mpf("1e-45"):
            return result
    raise ValueError("matrix exponential series did not converge")


def _germ_cell_mp(q: sp.SignedPermutation, h: float, log: TridiagonalLog) -> sp.SignedPermutation:
    """Bruhat cell of the germ frame in arbitrary precision (used when the
    germ's pivots decay below double-precision resolution)."""
    with mpmath.workdps(50):
        skew = np.array(
            [[-mpmath.mpf(h) * x for x in row] for row in log.matrix()], dtype=object
        )
        germ = np.asarray(q.matrix(), dtype=object) @ _mp_expm(skew)
        factors = br.decompose(germ, pivot_floor=mpmath.mpf("1e-40"), check=False)
    return factors.q0


def verify_chop(
    q: sp.SignedPermutation, h: float, log: TridiagonalLog
) -> tuple[sp.SignedPermutation, sp.SignedPermutation]:
    """Bruhat cell of the endpoint germ versus the combinatorial chop.

    Returns (cell of germ frame, chop representative Delta(Q) A); agreement of
    the two is the numerical content of the chop formula.  Switches to
    arbitrary-precision elimination when the smallest expected pivot
    (of order h^(m-1)/(m-1)!) is too small for double precision.
    """
    m = q.m
    smallest_pivot = h ** (m - 1) / math.factorial(m - 1)
    if smallest_pivot < MP_PIVOT_THRESHOLD:
        cell = _germ_cell_mp(q, h, log)
    else:
        germ = germ_frame(q, h, log)
        cell = br.decompose(germ, pivot_floor=smallest_pivot * 1e-3, check=False).q0
    return cell, sp.chop_rep(q)


def curve_tr(path: sn.FramePath) -> sn.FramePath:
    """Time reversal at the frame level.

    If F is the Frenet path of a curve ending with frame Q, the reversed
    curve's Frenet path is t -> J+ Q^T F(1-t) J+, again a Frenet path with
    standard initial frame, ending at TR(Q).
    """
    m = path.m
    j = np.diag(np.asarray(sp.j_plus_signs(m), dtype=np.float64))
    q_end = path.frames[-1]
    frames = np.array([j @ q_end.T @ f @ j for f in path.frames[::-1]])
    times = 1.0 - path.times[::-1]
    return sn.FramePath(times, frames)


def curve_ad(path: sn.FramePath) -> sn.FramePath:
    """Projective duality at the frame level: t -> A^T F(t) A.

    Conjugation by A maps tridiagonal skew logarithms with positive
    subdiagonal to themselves, so the result is again a Frenet path; its
    endpoint is AD of the original endpoint.
    """
    m = path.m
    a = np.asarray(sp.make_a(m).matrix(), dtype=np.float64)
    frames = np.array([a.T @ f @ a for f in path.frames])
    return sn.FramePath(path.times.copy(), frames)


@dataclass(frozen=True)
class FastCurveReport:
    """Result of sampling the accelerated curve alpha(t) * base(N t)."""

    n: int
    speedup: int
    min_wronskian: float
    max_frame_distance: float

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "speedup": self.speedup,
            "min_wronskian": self.min_wronskian,
            "max_frame_distance": self.max_frame_distance,
        }


def fast_curve_check(
    skew: np.ndarray, spec: CurveSpec, speedup: int, samples: int = 64
) -> FastCurveReport:
    """Check local convexity of the curve t -> exp(t*skew) * base(N t).

    The base curve is the spec's spiral (with standard initial frame); the
    rotation path exp(t*skew) is differentiated in closed form, so the
    Wronskian of the product curve is exact up to rounding.  Also reports the
    largest sampled distance between the product curve's Frenet frame and the
    rotated base frame, which shrinks as the speedup N grows.
    """
    skew = np.asarray(skew, dtype=np.float64)
    m = spec.m
    if skew.shape != (m, m) or np.max(np.abs(skew + skew.T)) > 1e-12:
        raise ValueError("alpha generator must be an m x m skew matrix")
    if speedup < 1:
        raise ValueError("speedup must be at least 1")
    corr = _initial_correction(spec)
    powers = [np.eye(m)]
    for _ in range(spec.n):
        powers.append(powers[-1] @ skew)
    binom = np.zeros((spec.n + 1, spec.n + 1))
    for k in range(spec.n + 1):
        binom[k, 0] = 1.0
        for j in range(1, k + 1):
            binom[k, j] = binom[k - 1, j - 1] + (binom[k - 1, j] if j <= k - 1 else 0.0)
    min_w = np.inf
    max_dist = 0.0
    for t in np.linspace(0.0, 1.0, samples + 1):
        alpha = expm(t * skew)
        base = corr @ derivative_matrix(spec, speedup * t)
        cols = np.empty((m, m))
        for k in range(spec.n + 1):
            col = np.zeros(m)
            for j in range(k + 1):
                col += binom[k, j] * (alpha @ powers[j]) @ (
                    speedup ** (k - j) * base[:, k - j]
                )
            cols[:, k] = col
        w = float(np.linalg.det(cols))
        min_w = min(min_w, w)
        if w > 0:
            f, _ = br.positive_qr(cols)
            base_frame, _ = br.positive_qr(base)
            max_dist = max(max_dist, float(np.max(np.abs(f - alpha @ base_frame))))
        else:
            max_dist = np.inf
    return FastCurveReport(spec.n, speedup, min_w, max_dist)


def fast_curve_demo(
    n: int, max_exponent: int = 20, samples: int = 64
) -> list[FastCurveReport]:
    """Double the speedup until the sampled Wronskian turns positive, then
    continue a few doublings to exhibit the shrinking frame distance."""
    spec = standard_spec(n)
    m = n + 1
    # A rotation running against the base curve, strong enough to destroy
    # local convexity at small speedups.
    skew = np.zeros((m, m))
    skew[1, 0], skew[0, 1] = -4.0, 4.0
    reports = []
    speedup = 1
    extra = 0
    while speedup <= 2**max_exponent:
        report = fast_curve_check(skew, spec, speedup, samples)
        reports.append(report)
        if report.min_wronskian > 0:
            extra += 1
            if extra >= 4:
                break
        speedup *= 2
    return reports
