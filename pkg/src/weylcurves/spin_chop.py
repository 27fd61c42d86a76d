"""Spin-level chop: exact cell representative of the pre-endpoint germ.

Downstairs, the Bruhat cell a locally convex curve occupies just before an
endpoint with frame Q has representative Delta(Q) A.  The same procedure
makes sense one level up: lift the germ path Q exp(-sigma h L) starting from
a lift z of Q, then take the exact spin-level cell representative of the
germ's endpoint.  That defines chop on the double cover, and with it
delta(z) = chop(z) * chop(one)^{-1}, the spin-level diagonal map.

Computing the germ for every element would be wasteful: chop commutes with
left multiplication by diagonal lifts (the germ frames and the within-cell
homotopy are both left-equivariant) and with the antipode.  So the module
computes one germ per underlying permutation (a coset representative) and
extends by exact single-blade products.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from . import bruhat as br
from . import clifford_exact as ce
from . import signed_perm as sp
from . import spin_numeric as sn

__all__ = ["chop_spin", "delta_spin", "chop_spin_direct", "a_element"]

GERM_H = 0.1
GERM_STEPS = 8
GERM_PIVOT_FLOOR = 1e-12


def chop_spin_direct(z: ce.ExactSpinElement) -> ce.ExactSpinElement:
    """Chop by running the germ procedure from scratch (no coset reuse)."""
    q = ce.pi(z)
    if not isinstance(q, sp.SignedPermutation):
        raise ValueError("chop is defined on lifts of signed permutations")
    m = z.m
    log = np.zeros((m, m))
    for i in range(m - 1):
        log[i + 1, i], log[i, i + 1] = 1.0, -1.0
    q_mat = np.asarray(q.matrix(), dtype=np.float64)
    sigmas = np.linspace(0.0, 1.0, GERM_STEPS + 1)
    frames = np.array([q_mat @ expm(-s * GERM_H * log) for s in sigmas])
    path = sn.FramePath(sigmas, frames)
    lifted = sn.lift_path(path, sn.SpinNumeric.from_exact(z))
    return br.decompose_spin(lifted.lifts[-1], pivot_floor=GERM_PIVOT_FLOOR)


def _coset_rep(perm: tuple[int, ...]) -> sp.SignedPermutation:
    """The all-positive signing of a permutation, with the last sign flipped
    when needed to land in D_m."""
    q = sp.SignedPermutation(perm)
    if q.in_d():
        return q
    word = list(perm)
    word[-1] = -word[-1]
    return sp.SignedPermutation(tuple(word))


class _ChopTable:
    """Per-size cache: one direct germ per underlying permutation."""

    def __init__(self, m: int):
        self.m = m
        self._by_perm: dict[tuple[int, ...], tuple[ce.ExactSpinElement, ce.ExactSpinElement]] = {}

    def lookup(self, perm: tuple[int, ...]) -> tuple[ce.ExactSpinElement, ce.ExactSpinElement]:
        entry = self._by_perm.get(perm)
        if entry is None:
            rep = _coset_rep(perm)
            z_rep = ce.lift_signed_perm(rep)
            entry = (z_rep, chop_spin_direct(z_rep))
            self._by_perm[perm] = entry
        return entry


@lru_cache(maxsize=None)
def _table(m: int) -> _ChopTable:
    return _ChopTable(m)


def chop_spin(
    z: ce.ExactSpinElement, projection: sp.SignedPermutation | None = None
) -> ce.ExactSpinElement:
    """Exact spin-level chop of an element of the double cover.

    ``projection`` may supply a precomputed Pi(z) to skip the projection
    (useful in bulk enumeration where the downstairs element is known).
    """
    q = ce.pi(z) if projection is None else projection
    if not isinstance(q, sp.SignedPermutation):
        raise ValueError("chop is defined on lifts of signed permutations")
    perm = tuple(abs(x) for x in q.word)
    z_rep, chopped_rep = _table(z.m).lookup(perm)
    # Write z = +- d~ z_rep with d~ the lift of a diagonal; chop commutes
    # with both the diagonal factor and the sign.
    diag = sp.compose(q, sp.inverse(ce.pi(z_rep)))
    d_lift = ce.lift_signed_perm(diag)
    candidate = ce.mul(d_lift, z_rep)
    if candidate == z:
        return ce.mul(d_lift, chopped_rep)
    if ce.neg(candidate) == z:
        return ce.neg(ce.mul(d_lift, chopped_rep))
    raise AssertionError("element does not match either lift of its projection")


@lru_cache(maxsize=None)
def a_element(m: int) -> ce.ExactSpinElement:
    """chop(one): the distinguished exact lift of the matrix A."""
    return chop_spin(ce.one(m))


def delta_spin(
    z: ce.ExactSpinElement, projection: sp.SignedPermutation | None = None
) -> ce.ExactSpinElement:
    """Spin-level diagonal map: chop(z) times the inverse of chop(one)."""
    return ce.mul(chop_spin(z, projection), ce.reverse(a_element(z.m)))
