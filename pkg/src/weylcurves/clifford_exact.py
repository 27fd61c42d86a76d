"""Exact arithmetic in the Clifford algebra of R^m and the double cover of D_m.

Conventions, pinned by the numerical path-lifting oracle in
:mod:`weylcurves.spin_numeric`:

* generators square to +1 and anticommute: e_i e_j = -e_j e_i;
* the covering map acts by conjugation, Pi(z): v -> z v z^{-1}, which makes
  Pi a group homomorphism;
* under these choices the rotation by theta taking e_i toward e_j lifts to
  exp((theta/2) e_j e_i), so the half-turn block path endpoint w(m, s) is the
  blade product of e_2 e_1, e_4 e_3, ...

Coefficients live in the ring {(a + b*sqrt2) / 2**k : a, b integers}, which
is closed under the group operations of the double cover.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from . import _kernels
from . import signed_perm as sp
from .signed_perm import SignedPermutation, SizeGuardError

__all__ = [
    "ExactCoefficient",
    "ExactSpinElement",
    "one",
    "neg_one",
    "blade",
    "mul",
    "neg",
    "reverse",
    "pi",
    "w",
    "j_hat",
    "a_lift",
    "lift_signed_perm",
    "enumerate_tilde_d",
    "tr_spin",
    "ad_spin",
    "chop_spin",
    "delta_spin",
    "s_spin",
]

SQRT2 = np.sqrt(2.0)
SPIN_ENUMERATION_GUARD = 7


@dataclass(frozen=True)
class ExactCoefficient:
    """Value (a + b*sqrt2) / 2**k in canonical (minimal k) form."""

    a: int
    b: int
    k: int = 0

    def __post_init__(self) -> None:
        a, b, k = _kernels.pure.normalize_coef(self.a, self.b, self.k)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "k", k)

    def __add__(self, other: "ExactCoefficient") -> "ExactCoefficient":
        k = max(self.k, other.k)
        return ExactCoefficient(
            (self.a << (k - self.k)) + (other.a << (k - other.k)),
            (self.b << (k - self.k)) + (other.b << (k - other.k)),
            k,
        )

    def __neg__(self) -> "ExactCoefficient":
        return ExactCoefficient(-self.a, -self.b, self.k)

    def __sub__(self, other: "ExactCoefficient") -> "ExactCoefficient":
        return self + (-other)

    def __mul__(self, other: "ExactCoefficient") -> "ExactCoefficient":
        return ExactCoefficient(
            self.a * other.a + 2 * self.b * other.b,
            self.a * other.b + self.b * other.a,
            self.k + other.k,
        )

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def value(self) -> float:
        return (self.a + self.b * SQRT2) / (1 << self.k)

    def __str__(self) -> str:
        return f"({self.a}{self.b:+d}*sqrt2)/2^{self.k}"


ZERO = ExactCoefficient(0, 0, 0)
ONE_COEF = ExactCoefficient(1, 0, 0)
HALF_SQRT2 = ExactCoefficient(0, 1, 1)  # sqrt2 / 2 = 1 / sqrt2


def _grade_reverse_sign(mask: int) -> int:
    g = mask.bit_count()
    return -1 if (g * (g - 1) // 2) % 2 else 1


class ExactSpinElement:
    """Sparse exact Clifford element, stored as sorted blade masks + (a,b,k)."""

    __slots__ = ("m", "masks", "coef")

    def __init__(self, m: int, masks: np.ndarray, coef: np.ndarray):
        self.m = int(m)
        self.masks = np.asarray(masks, dtype=np.int64)
        self.coef = np.asarray(coef, dtype=np.int64).reshape(-1, 3)
        if self.masks.size and int(self.masks.max()) >= (1 << self.m):
            raise ValueError("blade mask out of range for m")

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_blades(m: int, blades: dict[int, ExactCoefficient]) -> "ExactSpinElement":
        items = sorted((mask, c) for mask, c in blades.items() if not c.is_zero())
        masks = np.array([mask for mask, _ in items], dtype=np.int64)
        coef = np.array([(c.a, c.b, c.k) for _, c in items], dtype=np.int64)
        return ExactSpinElement(m, masks, coef.reshape(-1, 3))

    def blades(self) -> dict[int, ExactCoefficient]:
        return {
            int(mask): ExactCoefficient(int(a), int(b), int(k))
            for mask, (a, b, k) in zip(self.masks, self.coef)
        }

    # -- structure ----------------------------------------------------

    def is_even(self) -> bool:
        return all(int(mask).bit_count() % 2 == 0 for mask in self.masks)

    def key(self) -> tuple:
        return (self.m, self.masks.tobytes(), self.coef.tobytes())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExactSpinElement) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        terms = []
        for mask, c in self.blades().items():
            axes = [str(i + 1) for i in range(self.m) if (mask >> i) & 1]
            name = "e" + "e".join(axes) if axes else "1"
            terms.append(f"{c}*{name}")
        return f"ExactSpinElement(m={self.m}: " + (" + ".join(terms) or "0") + ")"

    # -- numerics -----------------------------------------------------

    def to_numeric(self) -> np.ndarray:
        dense = np.zeros(1 << self.m)
        for mask, (a, b, k) in zip(self.masks, self.coef):
            dense[int(mask)] = (int(a) + int(b) * SQRT2) / (1 << int(k))
        return dense

    # -- serialization ------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "blades": [
                {"mask": int(mask), "a": int(a), "b": int(b), "k": int(k)}
                for mask, (a, b, k) in zip(self.masks, self.coef)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())

    @staticmethod
    def from_json_dict(data: dict) -> "ExactSpinElement":
        blades = {
            int(item["mask"]): ExactCoefficient(item["a"], item["b"], item["k"])
            for item in data["blades"]
        }
        return ExactSpinElement.from_blades(int(data["m"]), blades)

    @staticmethod
    def from_json(text: str) -> "ExactSpinElement":
        return ExactSpinElement.from_json_dict(json.loads(text))


def one(m: int) -> ExactSpinElement:
    return ExactSpinElement.from_blades(m, {0: ONE_COEF})


def neg_one(m: int) -> ExactSpinElement:
    return ExactSpinElement.from_blades(m, {0: -ONE_COEF})


def blade(m: int, axes: tuple[int, ...], coeff: ExactCoefficient = ONE_COEF) -> ExactSpinElement:
    """Single blade e_{axes[0]} e_{axes[1]} ... with the axes given in order."""
    element = ExactSpinElement.from_blades(m, {0: coeff})
    for axis in axes:
        if not 1 <= axis <= m:
            raise ValueError(f"axis {axis} out of range 1..{m}")
        element = mul(element, ExactSpinElement.from_blades(m, {1 << (axis - 1): ONE_COEF}))
    return element


def mul(x: ExactSpinElement, y: ExactSpinElement) -> ExactSpinElement:
    if x.m != y.m:
        raise ValueError(f"size mismatch: {x.m} != {y.m}")
    masks, coef = _kernels.exact_mul(x.masks, x.coef, y.masks, y.coef)
    return ExactSpinElement(x.m, masks, coef)


def neg(z: ExactSpinElement) -> ExactSpinElement:
    coef = z.coef.copy()
    coef[:, 0] *= -1
    coef[:, 1] *= -1
    return ExactSpinElement(z.m, z.masks.copy(), coef)


def reverse(z: ExactSpinElement) -> ExactSpinElement:
    coef = z.coef.copy()
    for idx, mask in enumerate(z.masks):
        if _grade_reverse_sign(int(mask)) < 0:
            coef[idx, 0] *= -1
            coef[idx, 1] *= -1
    return ExactSpinElement(z.m, z.masks.copy(), coef)


def is_unit(z: ExactSpinElement) -> bool:
    return mul(z, reverse(z)) == one(z.m)


def pi(z: ExactSpinElement):
    """Covering map: conjugation on basis vectors, v -> z v z^{-1}.

    Returns a :class:`SignedPermutation` when the image is one, otherwise a
    float matrix.
    """
    if not is_unit(z):
        raise ValueError("pi requires a unit element (z * reverse(z) = 1)")
    rev = reverse(z)
    m = z.m
    columns = []
    for j in range(1, m + 1):
        e_j = ExactSpinElement.from_blades(m, {1 << (j - 1): ONE_COEF})
        columns.append(mul(mul(z, e_j), rev))
    word = [0] * m
    exact = True
    for j, col in enumerate(columns, start=1):
        blades_j = col.blades()
        if len(blades_j) == 1:
            (mask, c), = blades_j.items()
            if mask.bit_count() == 1 and c in (ONE_COEF, -ONE_COEF):
                i = mask.bit_length()  # row index, 1-based
                word[i - 1] = j if c == ONE_COEF else -j
                continue
        exact = False
        break
    if exact:
        return SignedPermutation(tuple(word))
    mat = np.zeros((m, m))
    for j, col in enumerate(columns):
        for mask, c in col.blades().items():
            if mask.bit_count() != 1:
                raise ValueError("pi image is not a rotation matrix")
            mat[mask.bit_length() - 1, j] = c.value()
    return mat


def w(m: int, s: int) -> ExactSpinElement:
    """Endpoint of the lifted block-rotation path: Pi(w(m, s)) = M^m_s."""
    if abs(s) > m or (m - s) % 4:
        raise ValueError(f"need |s| <= m and s == m (mod 4), got m={m}, s={s}")
    element = one(m)
    for i in range((m - s) // 4):
        element = mul(element, blade(m, (2 * i + 2, 2 * i + 1)))
    return element


@lru_cache(maxsize=None)
def j_hat(m: int) -> ExactSpinElement:
    """Blade product over the axes negated by J_+ = diag(1, -1, 1, ...)."""
    axes = tuple(range(2, m + 1, 2))
    return blade(m, axes)


def lift_signed_perm(q: SignedPermutation) -> ExactSpinElement:
    """A deterministic exact lift of q in D_m; the other lift is its negative."""
    if not q.in_d():
        raise sp.NotInDError("only determinant +1 elements lift to the spin group")
    m = q.m
    word = list(q.word)
    rotors_inv: list[ExactSpinElement] = []

    def rotate_quarter(p: int, r: int) -> None:
        # Left-multiply by the rotation R: e_p -> e_r, e_r -> -e_p.
        # Its lift is (1 + e_r e_p)/sqrt2.
        word[r - 1], word[p - 1] = word[p - 1], -word[r - 1]
        rotor = ExactSpinElement.from_blades(
            m, {0: HALF_SQRT2, (1 << (p - 1)) | (1 << (r - 1)): _ordered_coeff(r, p)}
        )
        rotors_inv.append(reverse(rotor))

    def rotate_half(p: int, r: int) -> None:
        # Left-multiply by the half-turn in the (p, r) plane; lift e_r e_p.
        word[p - 1] = -word[p - 1]
        word[r - 1] = -word[r - 1]
        rotor = ExactSpinElement.from_blades(
            m, {(1 << (p - 1)) | (1 << (r - 1)): _ordered_blade_unit(r, p)}
        )
        rotors_inv.append(reverse(rotor))

    for i in range(1, m):
        r = next(idx + 1 for idx, x in enumerate(word) if abs(x) == i)
        if r != i:
            rotate_quarter(i, r)
            r = next(idx + 1 for idx, x in enumerate(word) if abs(x) == i)
            assert r == i
        if word[i - 1] == -i:
            rotate_half(i, i + 1)
    assert word == list(range(1, m + 1)), f"reduction failed: {word}"

    lift = one(m)
    for rotor in rotors_inv:
        lift = mul(lift, rotor)
    return lift


def _ordered_coeff(first: int, second: int) -> ExactCoefficient:
    # Coefficient of the canonical blade for e_first e_second times sqrt2/2.
    return HALF_SQRT2 if first < second else -HALF_SQRT2


def _ordered_blade_unit(first: int, second: int) -> ExactCoefficient:
    return ONE_COEF if first < second else -ONE_COEF


@lru_cache(maxsize=None)
def a_lift(m: int) -> ExactSpinElement:
    """The deterministic exact lift of the anti-diagonal matrix A."""
    return lift_signed_perm(sp.make_a(m))


def enumerate_tilde_d(m: int, force: bool = False) -> Iterator[ExactSpinElement]:
    """Yield all 2**m * m! elements of the double cover of D_m."""
    if m > SPIN_ENUMERATION_GUARD and not force:
        raise SizeGuardError(f"m={m} exceeds guard {SPIN_ENUMERATION_GUARD}; pass force=True")
    for q in sp.enumerate_d(m, force=force):
        z = lift_signed_perm(q)
        yield z
        yield neg(z)


def tr_spin(z: ExactSpinElement) -> ExactSpinElement:
    """Lift of time reversal: conjugate the reverse by the J_+ blade."""
    jh = j_hat(z.m)
    return mul(mul(jh, reverse(z)), reverse(jh))


def ad_spin(z: ExactSpinElement) -> ExactSpinElement:
    """Lift of Arnold duality: conjugation by either exact lift of A."""
    ah = a_lift(z.m)
    return mul(mul(reverse(ah), z), ah)


def chop_spin(z: ExactSpinElement) -> ExactSpinElement:
    """Spin-level chop: exact representative of the pre-endpoint Bruhat cell."""
    from . import spin_chop

    return spin_chop.chop_spin(z)


def delta_spin(z: ExactSpinElement) -> ExactSpinElement:
    """Spin-level Delta: chop_spin(z) times the inverse of a = chop_spin(1)."""
    from . import spin_chop

    return spin_chop.delta_spin(z)


def s_spin(z: ExactSpinElement) -> int:
    """s value of z: trace of the projection of delta_spin(z)."""
    image = pi(delta_spin(z))
    assert isinstance(image, SignedPermutation)
    return sp.s_invariant(image)
