"""Exhaustive classification of signed permutations and their spin lifts.

The moves are the four homeomorphism generators on curve spaces: time
reversal TR, duality AD, the endpoint chop, and the diagonal map Delta.
Closing the group under these moves partitions it into classes; the class
counts and distinguished representatives (identity lifts, the w(m, s)
elements, and their antipodes) are the library's headline regression targets.

The module also builds the "jump" relation between diagonal lifts (connect
Delta(z') to Delta(TR(z')) as z' ranges over the double cover) and searches
for short jump chains, together with the explicit witnesses: the diagonal
transit witness Q = D1 Delta(P) P and the anti-self-dual block witness with
TR(z) = -z.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from . import clifford_exact as ce
from . import signed_perm as sp
from . import spin_chop as sc

__all__ = [
    "UnionFind",
    "ClassInfo",
    "ClassificationReport",
    "so_classes",
    "spin_classes",
    "transit_witness",
    "block_witness",
    "JumpGraph",
    "jump_graph",
    "spin_transit_chain",
    "TransitError",
    "CLASSIFY_GUARD",
]

CLASSIFY_GUARD = 7
MOVE_LABELS = ("TR", "AD", "CHOP", "DELTA")


class TransitError(ValueError):
    """The requested transit is outside the scope of the jump machinery."""


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        parent = self.parent
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            # Smaller root wins, for deterministic class labels.
            if rj < ri:
                ri, rj = rj, ri
            self.parent[rj] = ri

    def groups(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return out


@dataclass(frozen=True)
class ClassInfo:
    representative: str
    size: int
    s_counts: tuple[tuple[int, int], ...]
    named_reps: tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {
            "rep": self.representative,
            "size": self.size,
            "s_values": [list(pair) for pair in self.s_counts],
            "named_reps": list(self.named_reps),
        }


@dataclass(frozen=True)
class ClassificationReport:
    level: str
    m: int
    group_order: int
    classes: tuple[ClassInfo, ...]
    move_counts: dict[str, int]
    elapsed_ms: float

    def class_count(self) -> int:
        return len(self.classes)

    def to_json_dict(self, include_timing: bool = False) -> dict:
        return {
            "level": self.level,
            "m": self.m,
            "group_order": self.group_order,
            "classes": [c.to_json_dict() for c in self.classes],
            "move_counts": dict(self.move_counts),
            "elapsed_ms": round(self.elapsed_ms, 3) if include_timing else None,
        }

    def to_csv_rows(self) -> list[list]:
        rows = []
        for idx, info in enumerate(self.classes):
            s_values = ";".join(str(s) for s, _ in info.s_counts)
            rows.append(
                [self.m - 1, self.level, idx, info.representative, info.size, s_values]
            )
        return rows


def _word_str(word: tuple[int, ...]) -> str:
    return "[" + ",".join(str(x) for x in word) + "]"


@lru_cache(maxsize=None)
def _all_words(m: int) -> np.ndarray:
    """All of D_m as an (N, m) array of signed words, permutation-major."""
    perms = np.array(list(itertools.permutations(range(1, m + 1))), dtype=np.int64)
    inversions = _kernels.inversions_batch(perms)
    parity = 1 - 2 * (inversions % 2)
    patterns = np.array(list(itertools.product((1, -1), repeat=m)), dtype=np.int64)
    products = np.prod(patterns, axis=1)
    pos = patterns[products == 1]
    neg = patterns[products == -1]
    blocks = []
    for perm, par in zip(perms, parity):
        pats = pos if par == 1 else neg
        blocks.append(perm[None, :] * pats)
    return np.concatenate(blocks, axis=0)


def _encode(words: np.ndarray, m: int) -> np.ndarray:
    """Injective int64 code per word (digits word[i]+m in base 2m+1)."""
    base = 2 * m + 1
    powers = base ** np.arange(m, dtype=np.int64)
    return (words + m) @ powers


def so_classes(m: int, force: bool = False) -> ClassificationReport:
    """Classify D_m under TR, AD, chop, Delta; one class per allowed s."""
    if m > CLASSIFY_GUARD and not force:
        raise sp.SizeGuardError(f"classification guarded at m <= {CLASSIFY_GUARD}")
    start = time.perf_counter()
    words = _all_words(m)
    n = len(words)
    codes = _encode(words, m)
    order = np.argsort(codes, kind="stable")
    sorted_codes = codes[order]

    def locate(target_words: np.ndarray) -> np.ndarray:
        pos = np.searchsorted(sorted_codes, _encode(target_words, m))
        return order[pos]

    moves = {
        "TR": _kernels.tr_batch(words),
        "AD": _kernels.ad_batch(words),
        "CHOP": _kernels.chop_batch(words),
        "DELTA": _kernels.delta_word_batch(words),
    }
    uf = UnionFind(n)
    move_counts = {}
    for label in MOVE_LABELS:
        targets = locate(moves[label])
        move_counts[label] = n
        for i, j in enumerate(targets):
            uf.union(i, int(j))

    s_all = _kernels.s_batch(words)
    named = {}
    for s in range(-m, m + 1):
        if (m - s) % 4 == 0:
            named_word = np.array(sp.make_m(m, s).word, dtype=np.int64)[None, :]
            named[f"M({m},{s})"] = int(locate(named_word)[0])

    classes = []
    for root, members in sorted(uf.groups().items()):
        values, counts = np.unique(s_all[members], return_counts=True)
        names = tuple(
            name for name, idx in sorted(named.items()) if uf.find(idx) == root
        )
        rep = names[0] if names else _word_str(tuple(int(x) for x in words[members[0]]))
        classes.append(
            ClassInfo(
                rep,
                len(members),
                tuple((int(v), int(c)) for v, c in zip(values, counts)),
                names,
            )
        )
    classes.sort(key=lambda c: c.representative)
    elapsed = (time.perf_counter() - start) * 1000
    return ClassificationReport("SO", m, n, tuple(classes), move_counts, elapsed)


def _spin_named(m: int) -> dict[str, ce.ExactSpinElement]:
    """The theorem-listed representatives: the two central elements, the
    w(m, s) for admissible s < m, plus -w(m, -m) in even sizes."""
    named = {"one": ce.one(m), "-one": ce.neg_one(m)}
    for s in range(-m, m):
        if (m - s) % 4 == 0:
            named[f"w({m},{s})"] = ce.w(m, s)
    if m % 2 == 0:
        named[f"-w({m},{-m})"] = ce.neg(ce.w(m, -m))
    return named


def spin_classes(m: int, force: bool = False) -> ClassificationReport:
    """Classify the double cover of D_m under the lifted four moves."""
    if m > CLASSIFY_GUARD and not force:
        raise sp.SizeGuardError(f"classification guarded at m <= {CLASSIFY_GUARD}")
    start = time.perf_counter()
    downstairs = list(sp.enumerate_d(m, force=force))
    rev_a = ce.reverse(sc.a_element(m))

    index: dict[tuple, int] = {}
    keys: list[tuple] = []
    plus_lifts: list[ce.ExactSpinElement] = []
    s_of: list[int] = []
    for q in downstairs:
        z = ce.lift_signed_perm(q)
        s_q = sp.s_invariant(q)
        for elem in (z, ce.neg(z)):
            index[elem.key()] = len(keys)
            keys.append(elem.key())
            s_of.append(s_q)
        plus_lifts.append(z)

    n = len(keys)
    uf = UnionFind(n)
    move_counts = {label: n for label in MOVE_LABELS}
    for q, z in zip(downstairs, plus_lifts):
        i_plus = index[z.key()]
        # Each move commutes with the antipode, so the mirrored element's
        # edges are the negations of these.
        images = {
            "TR": ce.tr_spin(z),
            "AD": ce.ad_spin(z),
            "CHOP": (chop := sc.chop_spin(z, projection=q)),
            "DELTA": ce.mul(chop, rev_a),
        }
        for image in images.values():
            uf.union(i_plus, index[image.key()])
            uf.union(i_plus + 1, index[ce.neg(image).key()])

    named = {
        name: index[elem.key()] for name, elem in sorted(_spin_named(m).items())
    }
    classes = []
    for root, members in sorted(uf.groups().items()):
        s_members = np.array([s_of[i] for i in members])
        values, counts = np.unique(s_members, return_counts=True)
        names = tuple(
            name for name, idx in sorted(named.items()) if uf.find(idx) == root
        )
        rep = names[0] if names else repr(keys[members[0]])
        classes.append(
            ClassInfo(
                rep,
                len(members),
                tuple((int(v), int(c)) for v, c in zip(values, counts)),
                names,
            )
        )
    classes.sort(key=lambda c: c.representative)
    elapsed = (time.perf_counter() - start) * 1000
    return ClassificationReport("Spin", m, n, tuple(classes), move_counts, elapsed)


def transit_witness(d1: sp.DiagonalSigns, d2: sp.DiagonalSigns) -> sp.SignedPermutation:
    """Q with Delta(Q) = D1 and Delta(TR(Q)) = D2, for equal-trace diagonals.

    Built from a permutation carrying each sign of D1 to a matching sign slot
    of D2 (positions matched in order within each sign), as Q = D1 Delta(P) P.
    """
    if d1.m != d2.m:
        raise ValueError("size mismatch")
    if sum(d1.signs) != sum(d2.signs):
        raise TransitError("diagonals have different traces")
    m = d1.m
    slots = {1: [j for j in range(m) if d2.signs[j] == 1],
             -1: [j for j in range(m) if d2.signs[j] == -1]}
    pi_map = [0] * m
    for i in range(m):
        pi_map[i] = slots[d1.signs[i]].pop(0) + 1
    p_word = tuple(pi_map)
    delta_p = sp._delta_signs(p_word)
    word = tuple(
        d1.signs[i] * delta_p[i] * p_word[i] for i in range(m)
    )
    q = sp.SignedPermutation(word)
    assert q.in_d()
    return q


def block_witness(m: int, s: int) -> ce.ExactSpinElement:
    """The anti-self-dual diagonal lift: an exact element z over a diagonal
    with trace s satisfying TR(z) = -z, from the rotation path with
    (m-s)/4 - 1 two-plane blocks and one final three-row block."""
    if (m - s) % 4 != 0 or not (4 - m <= s <= m - 4):
        raise TransitError("need s = m mod 4 and 4-m <= s <= m-4")
    n_small = (m - s) // 4 - 1
    z = ce.one(m)
    for b in range(n_small):
        z = ce.mul(z, ce.blade(m, (2 * b + 2, 2 * b + 1)))
    p = 2 * n_small + 1
    return ce.mul(z, ce.blade(m, (p + 2, p)))


@dataclass(frozen=True)
class JumpGraph:
    """The jump relation on diagonal lifts: x ~ y when some z' in the double
    cover has Delta(z') = x and Delta(TR(z')) = y (symmetrized)."""

    m: int
    nodes: tuple[tuple, ...]
    adjacency: dict[tuple, tuple[tuple, ...]]
    witnesses: dict[tuple[tuple, tuple], ce.ExactSpinElement]
    elements: dict[tuple, ce.ExactSpinElement]


@lru_cache(maxsize=None)
def jump_graph(m: int) -> JumpGraph:
    rev_a = ce.reverse(sc.a_element(m))
    elements: dict[tuple, ce.ExactSpinElement] = {}
    adjacency: dict[tuple, set] = {}
    witnesses: dict[tuple[tuple, tuple], ce.ExactSpinElement] = {}

    def note(x: ce.ExactSpinElement, y: ce.ExactSpinElement, witness: ce.ExactSpinElement):
        kx, ky = x.key(), y.key()
        elements.setdefault(kx, x)
        elements.setdefault(ky, y)
        adjacency.setdefault(kx, set()).add(ky)
        adjacency.setdefault(ky, set()).add(kx)
        witnesses.setdefault((kx, ky), witness)
        witnesses.setdefault((ky, kx), witness)

    for q in sp.enumerate_d(m):
        z = ce.lift_signed_perm(q)
        chop = sc.chop_spin(z, projection=q)
        x = ce.mul(chop, rev_a)
        tz = ce.tr_spin(z)
        y = ce.mul(sc.chop_spin(tz, projection=sp.tr(q)), rev_a)
        note(x, y, z)
        note(ce.neg(x), ce.neg(y), ce.neg(z))
    nodes = tuple(sorted(adjacency))
    return JumpGraph(
        m,
        nodes,
        {k: tuple(sorted(v)) for k, v in adjacency.items()},
        witnesses,
        elements,
    )


def spin_transit_chain(
    z1: ce.ExactSpinElement, z2: ce.ExactSpinElement, max_jumps: int = 3
) -> list[tuple[ce.ExactSpinElement, ce.ExactSpinElement, ce.ExactSpinElement]]:
    """Connect two diagonal lifts by at most ``max_jumps`` jumps.

    Returns a list of (from, witness, to) triples; empty when z1 = z2.
    Raises TransitError when the traces differ, equal +-m, or no short chain
    exists.
    """
    m = z1.m
    q1, q2 = ce.pi(z1), ce.pi(z2)
    for q in (q1, q2):
        if not isinstance(q, sp.SignedPermutation) or any(
            abs(x) != i + 1 for i, x in enumerate(q.word)
        ):
            raise TransitError("inputs must be lifts of diagonal matrices")
    s1, s2 = sp.s_invariant(q1), sp.s_invariant(q2)
    if s1 != s2:
        raise TransitError("trace mismatch")
    if abs(s1) == m:
        raise TransitError("transit fails over the identity diagonal (s = +-m)")
    if z1 == z2:
        return []
    graph = jump_graph(m)
    start, goal = z1.key(), z2.key()
    previous: dict[tuple, tuple | None] = {start: None}
    frontier = [start]
    for _ in range(max_jumps):
        next_frontier = []
        for node in frontier:
            for nbr in graph.adjacency.get(node, ()):
                if nbr not in previous:
                    previous[nbr] = node
                    next_frontier.append(nbr)
        if goal in previous:
            break
        frontier = next_frontier
    if goal not in previous:
        raise TransitError(f"no chain of <= {max_jumps} jumps")
    chain = []
    node = goal
    while previous[node] is not None:
        prev = previous[node]
        chain.append(
            (graph.elements[prev], graph.witnesses[(prev, node)], graph.elements[node])
        )
        node = prev
    chain.reverse()
    return chain
