"""Signed permutation matrices and the Delta/s/TR/AD/chop calculus.

A signed permutation of size m is stored as a word of m signed 1-based
integers: ``word[i] = +-j`` means the matrix has entry ``+-1`` at row i+1,
column j.  Elements of the Weyl group D_m are exactly the words with
determinant +1; words with determinant -1 are representable but rejected
by the D_m-specific operations.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "SignedPermutation",
    "DiagonalSigns",
    "identity",
    "compose",
    "inverse",
    "transpose",
    "ne",
    "sw",
    "delta",
    "s_invariant",
    "tr",
    "ad",
    "chop_rep",
    "enumerate_d",
    "cell_dimension",
    "make_m",
    "make_a",
    "j_plus_signs",
    "parse_word",
    "parse_matrix",
    "NotInDError",
    "SizeGuardError",
]

ENUMERATION_GUARD = 8


class NotInDError(ValueError):
    """Raised when an operation requires determinant +1 and gets -1."""


class SizeGuardError(ValueError):
    """Raised when an enumeration guard is exceeded without override."""


def _perm_parity(perm: Sequence[int]) -> int:
    """Parity (+1/-1) of a permutation given in one-line 1-based form."""
    n = len(perm)
    seen = [False] * n
    sign = 1
    for i in range(n):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j] - 1
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class SignedPermutation:
    """Element of the signed permutation group on m letters."""

    word: tuple[int, ...]

    def __post_init__(self) -> None:
        word = tuple(int(x) for x in self.word)
        object.__setattr__(self, "word", word)
        m = len(word)
        if m == 0:
            raise ValueError("empty word")
        if sorted(abs(x) for x in word) != list(range(1, m + 1)):
            raise ValueError(f"not a signed permutation word: {word}")

    @property
    def m(self) -> int:
        return len(self.word)

    def det(self) -> int:
        perm = [abs(x) for x in self.word]
        sign = 1
        for x in self.word:
            if x < 0:
                sign = -sign
        return sign * _perm_parity(perm)

    def in_d(self) -> bool:
        """Membership in the Weyl group D_m (determinant +1)."""
        return self.det() == 1

    def is_diagonal(self) -> bool:
        return all(abs(x) == i + 1 for i, x in enumerate(self.word))

    def matrix(self, dtype=np.int64) -> np.ndarray:
        q = np.zeros((self.m, self.m), dtype=dtype)
        for i, x in enumerate(self.word):
            q[i, abs(x) - 1] = 1 if x > 0 else -1
        return q

    def column(self, j: int) -> tuple[int, int]:
        """Return (i, sign) of the nonzero entry in 1-based column j."""
        for i, x in enumerate(self.word):
            if abs(x) == j:
                return i + 1, (1 if x > 0 else -1)
        raise ValueError(f"column {j} out of range")

    def __str__(self) -> str:
        return "[" + ",".join(str(x) for x in self.word) + "]"


@dataclass(frozen=True)
class DiagonalSigns:
    """Element of Diag_m: diagonal +-1 matrix with determinant +1."""

    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        signs = tuple(int(x) for x in self.signs)
        object.__setattr__(self, "signs", signs)
        if not signs or any(x not in (-1, 1) for x in signs):
            raise ValueError(f"signs must be +-1: {signs}")
        prod = 1
        for x in signs:
            prod *= x
        if prod != 1:
            raise ValueError(f"not in Diag_m (determinant -1): {signs}")

    @property
    def m(self) -> int:
        return len(self.signs)

    def trace(self) -> int:
        return sum(self.signs)

    def to_perm(self) -> SignedPermutation:
        return SignedPermutation(tuple(s * (i + 1) for i, s in enumerate(self.signs)))

    def matrix(self, dtype=np.int64) -> np.ndarray:
        return np.diag(np.array(self.signs, dtype=dtype))

    def __str__(self) -> str:
        return "diag(" + ",".join(f"{x:+d}" for x in self.signs) + ")"


def identity(m: int) -> SignedPermutation:
    return SignedPermutation(tuple(range(1, m + 1)))


def compose(p: SignedPermutation, q: SignedPermutation) -> SignedPermutation:
    """Signed permutation of the matrix product P @ Q."""
    if p.m != q.m:
        raise ValueError(f"size mismatch: {p.m} != {q.m}")
    word = []
    for x in p.word:
        y = q.word[abs(x) - 1]
        word.append(y if x > 0 else -y)
    return SignedPermutation(tuple(word))


def inverse(q: SignedPermutation) -> SignedPermutation:
    word = [0] * q.m
    for i, x in enumerate(q.word):
        word[abs(x) - 1] = (i + 1) if x > 0 else -(i + 1)
    return SignedPermutation(tuple(word))


def transpose(q: SignedPermutation) -> SignedPermutation:
    # For orthogonal matrices the transpose is the inverse.
    return inverse(q)


def ne(q: SignedPermutation, i: int, j: int) -> int:
    """Number of nonzero entries strictly northeast of position (i, j)."""
    if abs(q.word[i - 1]) != j:
        raise ValueError(f"({i},{j}) is not the nonzero position of row {i}")
    return sum(1 for x in q.word[: i - 1] if abs(x) > j)


def sw(q: SignedPermutation, i: int, j: int) -> int:
    if abs(q.word[i - 1]) != j:
        raise ValueError(f"({i},{j}) is not the nonzero position of row {i}")
    return ne(transpose(q), j, i)


def delta(q: SignedPermutation) -> DiagonalSigns:
    """Diagonal-sign map: delta_i = entry(i, j) * (-1)**NE(i, j)."""
    if not q.in_d():
        raise NotInDError(f"delta requires determinant +1, got {q}")
    return DiagonalSigns(tuple(_delta_signs(q.word)))


def _delta_signs(word: Sequence[int]) -> list[int]:
    signs = []
    for i, x in enumerate(word):
        j = abs(x)
        count = sum(1 for y in word[:i] if abs(y) > j)
        sign = 1 if x > 0 else -1
        if count % 2:
            sign = -sign
        signs.append(sign)
    return signs


def s_invariant(q: SignedPermutation) -> int:
    """s(Q) = trace(Delta(Q))."""
    return delta(q).trace()


def tr(q: SignedPermutation) -> SignedPermutation:
    """Time reversal: transpose and flip signs of entries with i+j odd."""
    word = [0] * q.m
    for i, x in enumerate(q.word):
        j = abs(x)
        sign = 1 if x > 0 else -1
        if (i + 1 + j) % 2:
            sign = -sign
        word[j - 1] = sign * (i + 1)
    return SignedPermutation(tuple(word))


def ad(q: SignedPermutation) -> SignedPermutation:
    """Arnold duality: rotate by a half-turn, flip signs at odd i+j."""
    m = q.m
    word = [0] * m
    for i, x in enumerate(q.word):
        j = abs(x)
        sign = 1 if x > 0 else -1
        if (i + 1 + j) % 2:
            sign = -sign
        word[m - 1 - i] = sign * (m + 1 - j)
    return SignedPermutation(tuple(word))


def chop_rep(q: SignedPermutation) -> SignedPermutation:
    """Cell representative just before the endpoint: Delta(Q) @ A."""
    return compose(delta(q).to_perm(), make_a(q.m))


def make_a(m: int) -> SignedPermutation:
    """Anti-diagonal matrix with entries (A)_{i, m+1-i} = (-1)**(i+1)."""
    word = tuple((1 if i % 2 == 0 else -1) * (m - i) for i in range(m))
    return SignedPermutation(word)


def j_plus_signs(m: int) -> tuple[int, ...]:
    """Diagonal of J_+ = diag(1, -1, 1, -1, ...); may have determinant -1."""
    return tuple(1 if i % 2 == 0 else -1 for i in range(m))


def make_m(m: int, s: int) -> SignedPermutation:
    """Diagonal matrix with the first (m-s)/2 entries equal to -1.

    Lies in SO(m) exactly when s == m (mod 4); query via ``.in_d()``.
    """
    if abs(s) > m or (m - s) % 2:
        raise ValueError(f"need |s| <= m and s == m (mod 2), got m={m}, s={s}")
    k = (m - s) // 2
    return SignedPermutation(tuple(-(i + 1) if i < k else (i + 1) for i in range(m)))


def cell_dimension(q: SignedPermutation) -> int:
    """Inversions of the signless permutation (paper's cell dimension)."""
    word = [abs(x) for x in q.word]
    return sum(
        1
        for i in range(len(word))
        for k in range(i + 1, len(word))
        if word[i] > word[k]
    )


def enumerate_d(m: int, force: bool = False) -> Iterator[SignedPermutation]:
    """Yield all elements of D_m: 2**(m-1) * m! words with determinant +1.

    Permutations in lexicographic order, sign patterns in binary counter
    order (bit i set means row i+1 negative), filtered to determinant +1.
    """
    if m > ENUMERATION_GUARD and not force:
        raise SizeGuardError(f"m={m} exceeds guard {ENUMERATION_GUARD}; pass force=True")
    for perm in itertools.permutations(range(1, m + 1)):
        parity = _perm_parity(perm)
        for bits in range(2**m):
            nneg = bits.bit_count()
            sign_prod = -1 if nneg % 2 else 1
            if sign_prod * parity != 1:
                continue
            word = tuple(-perm[i] if (bits >> i) & 1 else perm[i] for i in range(m))
            yield SignedPermutation(word)


_WORD_RE = re.compile(r"^\[\s*(-?\d+\s*(?:,\s*-?\d+\s*)*)\]$")


def parse_word(text: str) -> SignedPermutation:
    """Parse the bracketed signed-word format, e.g. ``[2,-1,3]``."""
    match = _WORD_RE.match(text.strip())
    if not match:
        raise ValueError(f"malformed signed word: {text!r}")
    return SignedPermutation(tuple(int(x) for x in match.group(1).split(",")))


def parse_matrix(text: str) -> SignedPermutation:
    """Parse m lines of m whitespace-separated integers in {-1, 0, 1}."""
    rows = [line.split() for line in text.strip().splitlines() if line.strip()]
    m = len(rows)
    word = []
    for i, row in enumerate(rows):
        if len(row) != m:
            raise ValueError(f"row {i + 1} has {len(row)} entries, expected {m}")
        entries = [int(x) for x in row]
        if any(x not in (-1, 0, 1) for x in entries):
            raise ValueError(f"row {i + 1} has entries outside {{-1,0,1}}")
        nonzero = [(j, x) for j, x in enumerate(entries) if x != 0]
        if len(nonzero) != 1:
            raise ValueError(f"row {i + 1} must have exactly one nonzero entry")
        j, x = nonzero[0]
        word.append(x * (j + 1))
    return SignedPermutation(tuple(word))


def from_matrix(mat: np.ndarray) -> SignedPermutation:
    """Build a signed permutation from an exact 0/+-1 matrix."""
    mat = np.asarray(mat)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("expected a square matrix")
    word = []
    for i in range(mat.shape[0]):
        nz = np.nonzero(mat[i])[0]
        if len(nz) != 1 or mat[i, nz[0]] not in (-1, 1):
            raise ValueError(f"row {i + 1} is not a signed-permutation row")
        j = int(nz[0])
        word.append(int(mat[i, j]) * (j + 1))
    return SignedPermutation(tuple(word))
