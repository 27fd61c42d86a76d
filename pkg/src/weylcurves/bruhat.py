"""Bruhat decomposition Q = U1 Q0 U2 of special-orthogonal matrices.

Every Q in SO(m) factors uniquely as an upper-triangular matrix with positive
diagonal, times a signed permutation matrix Q0 of determinant +1, times
another upper-triangular matrix with positive diagonal.  Q0 labels the Bruhat
cell of Q.  The module also implements the unipotent action B(U, Q) = U Q U'
whose orbits are the cells, and the computation of exact spin-level cell
representatives by lifting a within-cell homotopy from Q to Q0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import clifford_exact as ce
from . import signed_perm as sp
from . import spin_numeric as sn

__all__ = [
    "BruhatFactors",
    "CellBoundaryError",
    "decompose",
    "bruhat_action",
    "decompose_spin",
    "positive_qr",
    "random_so",
    "random_unipotent",
    "check_orthogonal",
    "parse_float_matrix",
    "matrix_to_json",
    "matrix_from_json",
    "DEFAULT_PIVOT_FLOOR",
    "ORTHO_TOL",
]

DEFAULT_PIVOT_FLOOR = 1e-10
ORTHO_TOL = 1e-8


class CellBoundaryError(ValueError):
    """All candidate pivots fell below the floor: the input is numerically on
    the boundary between Bruhat cells and its cell label is unreliable."""


@dataclass(frozen=True)
class BruhatFactors:
    """The triple (U1, Q0, U2) with Q = U1 * Q0 * U2."""

    u1: np.ndarray
    q0: sp.SignedPermutation
    u2: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.u1 @ np.asarray(self.q0.matrix(), dtype=self.u1.dtype) @ self.u2

    def residual(self, q: np.ndarray) -> float:
        diff = self.reconstruct() - np.asarray(q, dtype=self.u1.dtype)
        return float(max(abs(float(x)) for x in diff.ravel()))


def check_orthogonal(q: np.ndarray, tol: float = ORTHO_TOL) -> None:
    q = np.asarray(q, dtype=np.float64)
    m = q.shape[0]
    if q.shape != (m, m):
        raise ValueError("matrix must be square")
    if np.max(np.abs(q.T @ q - np.eye(m))) > tol:
        raise ValueError(f"matrix is not orthogonal within {tol}")
    if np.linalg.det(q) < 0:
        raise ValueError("matrix must have determinant +1")


def decompose(
    q: np.ndarray,
    pivot_floor: float = DEFAULT_PIVOT_FLOOR,
    check: bool = True,
) -> BruhatFactors:
    """Bruhat-decompose a special-orthogonal matrix.

    Sweeps columns left to right; in each column the pivot is the lowest row
    not yet consumed whose entry exceeds ``pivot_floor`` in magnitude.  The
    pivot row is cleared upward and rightward by unipotent row/column
    operations, with positive scalings absorbed into the triangular factors.

    The elimination runs in the dtype of ``q``: pass an object array of
    ``mpmath.mpf`` entries (and a suitably small ``pivot_floor``) when the
    pivots decay below double-precision resolution, as they do for endpoint
    germs with very small time offsets.
    """
    q = np.asarray(q)
    if check and q.dtype != object:
        check_orthogonal(q)
    m = q.shape[0]
    work = q.copy()
    if work.dtype != object:
        work = work.astype(np.float64)
    one = work.flat[0] * 0 + 1
    u1 = np.zeros_like(work)
    u2 = np.zeros_like(work)
    for i in range(m):
        u1[i, i] = one
        u2[i, i] = one

    consumed = [False] * m
    word = [0] * m
    for j in range(m):
        pivot_row = -1
        for i in range(m - 1, -1, -1):
            if not consumed[i] and abs(work[i, j]) > pivot_floor:
                pivot_row = i
                break
        if pivot_row < 0:
            raise CellBoundaryError(
                f"no pivot above {pivot_floor} in column {j + 1}"
            )
        i = pivot_row
        consumed[i] = True
        pivot = work[i, j]
        sign = 1 if pivot > 0 else -1
        word[i] = sign * (j + 1)
        # Scale the pivot row so the pivot becomes exactly +-1.
        scale = abs(pivot)
        work[i, :] = work[i, :] / scale
        u1[:, i] = u1[:, i] * scale
        # Clear upward in column j (left-multiplication by unipotent uppers).
        for ip in range(i):
            c = work[ip, j] / work[i, j]
            if c != 0:
                work[ip, :] = work[ip, :] - c * work[i, :]
                u1[:, i] = u1[:, i] + c * u1[:, ip]
        # Clear rightward in row i (right-multiplication by unipotent uppers).
        for jp in range(j + 1, m):
            c = work[i, jp] / work[i, j]
            if c != 0:
                work[:, jp] = work[:, jp] - c * work[:, j]
                u2[j, :] = u2[j, :] + c * u2[jp, :]
    q0 = sp.SignedPermutation(tuple(word))
    if not q0.in_d():
        raise CellBoundaryError("elimination produced a determinant -1 pattern")
    return BruhatFactors(u1, q0, u2)


def positive_qr(mat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Factor mat = F R with F special-orthogonal and R upper triangular with
    strictly positive diagonal (column-wise Gram-Schmidt orientation)."""
    f, r = np.linalg.qr(np.asarray(mat, dtype=np.float64))
    signs = np.sign(np.diag(r))
    if np.any(signs == 0):
        raise ValueError("input matrix is singular")
    f = f * signs[None, :]
    r = r * signs[:, None]
    return f, r


def bruhat_action(u: np.ndarray, q: np.ndarray) -> np.ndarray:
    """B(U, Q) = U Q U' where U' is the unique upper-triangular matrix with
    positive diagonal making the product special-orthogonal again."""
    u = np.asarray(u, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    x = u @ q
    # (X U')^T (X U') = I  <=>  U' = L^{-T} with X^T X = L L^T.
    gram = x.T @ x
    chol = np.linalg.cholesky(gram)
    u_prime = np.linalg.inv(chol).T
    return x @ u_prime


def random_so(m: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random element of SO(m) via QR of a Gaussian matrix."""
    f, _ = positive_qr(rng.normal(size=(m, m)))
    if np.linalg.det(f) < 0:
        f[:, -1] = -f[:, -1]
    return f


def random_unipotent(m: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    u = np.eye(m)
    idx = np.triu_indices(m, k=1)
    u[idx] = rng.normal(scale=scale, size=len(idx[0]))
    return u


def _cell_homotopy(factors: BruhatFactors, max_depth: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Adaptively sampled frames F(s) = positive-QR of U1(s) Q0 U2(s), where
    U_i(s) = (1-s) U_i + s I.  Every frame stays in the cell of Q0; the path
    runs from the decomposed matrix at s=0 to the representative at s=1.
    Segments are bisected until consecutive frames satisfy the lifting step
    guard (the homotopy can be extremely non-uniform when the triangular
    factors are large)."""
    m = factors.q0.m
    q0_mat = np.asarray(factors.q0.matrix(), dtype=np.float64)
    eye = np.eye(m)

    def frame(s: float) -> np.ndarray:
        mat = ((1 - s) * factors.u1 + s * eye) @ q0_mat @ ((1 - s) * factors.u2 + s * eye)
        f, _ = positive_qr(mat)
        return f

    def angle(f0: np.ndarray, f1: np.ndarray) -> float:
        gap = np.linalg.norm(f0.T @ f1 - eye, 2)
        return 2 * np.arcsin(min(1.0, gap / 2))

    guard = 0.8 * sn.STEP_GUARD
    samples = [(k / 16, frame(k / 16)) for k in range(17)]
    out = [samples[0]]
    stack = list(zip(samples[:-1], samples[1:]))[::-1]
    depth = {0.0: 0}
    while stack:
        (s0, f0), (s1, f1) = stack.pop()
        if angle(f0, f1) < guard:
            out.append((s1, f1))
            continue
        d = depth.get(s0, 0)
        if d >= max_depth:
            raise sn.StepGuardError("cell homotopy refinement exceeded depth limit")
        mid = 0.5 * (s0 + s1)
        fm = frame(mid)
        depth[s0] = d + 1
        depth[mid] = d + 1
        stack.append(((mid, fm), (s1, f1)))
        stack.append(((s0, f0), (mid, fm)))
    times = np.array([s for s, _ in out])
    frames = np.array([f for _, f in out])
    return times, frames


def decompose_spin(
    z: sn.SpinNumeric,
    pivot_floor: float = DEFAULT_PIVOT_FLOOR,
    snap_tol: float = 1e-6,
) -> ce.ExactSpinElement:
    """Exact spin-level representative of the Bruhat cell of Pi(z).

    Decomposes the projection, deforms it to the cell representative along the
    straight-line triangular homotopy (which never leaves the cell), lifts the
    resulting frame path starting at z, and snaps the endpoint against the two
    exact lifts of Q0.
    """
    q = z.so_matrix()
    factors = decompose(q, pivot_floor=pivot_floor)
    lift_plus = ce.lift_signed_perm(factors.q0)
    candidates = [lift_plus, ce.neg(lift_plus)]
    times, frames = _cell_homotopy(factors)
    path = sn.FramePath(times, frames)
    lifted = sn.lift_path(path, z)
    exact, _ = sn.snap_against(lifted.lifts[-1], candidates, snap_tol)
    return exact


def parse_float_matrix(text: str) -> np.ndarray:
    rows = [line.split() for line in text.strip().splitlines() if line.strip()]
    m = len(rows)
    if any(len(row) != m for row in rows):
        raise ValueError("matrix rows must all have length equal to the row count")
    return np.array([[float(x) for x in row] for row in rows])


def matrix_to_json(q: np.ndarray) -> str:
    return json.dumps({"matrix": np.asarray(q, dtype=np.float64).tolist()})


def matrix_from_json(text: str) -> np.ndarray:
    return np.array(json.loads(text)["matrix"], dtype=np.float64)
