"""Weights, roots and simple root systems of sl(m|n) and its affinization.

A simple root system is stored as an ordering of the m epsilon weights and
the n delta weights.  Simple roots are differences of adjacent weights; in
the affine case the ordering is read cyclically and node 0 closes the cycle
with a unit multiple of the null root.

Nodes are numbered ``1 .. N-1`` for a finite system and ``0 .. N-1`` for an
affine one (``N = m + n``).  Node ``k >= 1`` sits between positions ``k`` and
``k + 1`` of the ordering (1-based); node 0 sits between positions ``N`` and
``1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

__all__ = [
    "Weight",
    "Root",
    "SimpleRootSystem",
    "CartanMatrix",
    "build_system",
    "bilinear",
    "simple_roots",
    "cartan_matrix",
    "distinguished_cartan_table",
    "dynkin",
    "RootSystemError",
]


class RootSystemError(ValueError):
    """Raised for malformed parity words, node indices or roots."""


class Weight(NamedTuple):
    kind: str  # "e" (epsilon) or "d" (delta)
    index: int

    @property
    def parity(self) -> int:
        return 0 if self.kind == "e" else 1

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"


def _weight_from_label(label: str) -> Weight:
    return Weight(label[0], int(label[1:]))


@dataclass(frozen=True)
class Root:
    """Integer combination of weights plus a multiple of the null root."""

    diff: tuple[tuple[Weight, int], ...] = ()
    delta_mult: int = 0

    @classmethod
    def make(cls, coeffs: dict[Weight, int] | Iterable[tuple[Weight, int]],
             delta_mult: int = 0) -> "Root":
        acc: dict[Weight, int] = {}
        items = coeffs.items() if isinstance(coeffs, dict) else coeffs
        for w, c in items:
            acc[w] = acc.get(w, 0) + c
        diff = tuple(sorted(((w, c) for w, c in acc.items() if c),
                            key=lambda t: (t[0].kind != "e", t[0].index)))
        return cls(diff, delta_mult)

    @classmethod
    def difference(cls, a: Weight, b: Weight, delta_mult: int = 0) -> "Root":
        return cls.make([(a, 1), (b, -1)], delta_mult)

    @property
    def coeffs(self) -> dict[Weight, int]:
        return dict(self.diff)

    @property
    def parity(self) -> int:
        return sum(abs(c) * w.parity for w, c in self.diff) % 2

    def __add__(self, other: "Root") -> "Root":
        return Root.make(list(self.diff) + list(other.diff),
                         self.delta_mult + other.delta_mult)

    def __neg__(self) -> "Root":
        return Root.make([(w, -c) for w, c in self.diff], -self.delta_mult)

    def __sub__(self, other: "Root") -> "Root":
        return self + (-other)

    def __rmul__(self, k: int) -> "Root":
        return Root.make([(w, k * c) for w, c in self.diff], k * self.delta_mult)

    def is_zero(self) -> bool:
        return not self.diff and self.delta_mult == 0

    def __str__(self) -> str:
        parts = []
        for w, c in self.diff:
            sign = "+" if c > 0 else "-"
            mag = "" if abs(c) == 1 else f"{abs(c)}"
            parts.append(f"{sign}{mag}{w}")
        if self.delta_mult:
            c = self.delta_mult
            parts.insert(0, f"{'+' if c > 0 else '-'}{'' if abs(c) == 1 else abs(c)}delta")
        text = "".join(parts) or "0"
        return text[1:] if text.startswith("+") else text


def bilinear(a: Weight | Root, b: Weight | Root) -> Fraction:
    """Invariant form: (e_i, e_j) = delta_ij, (d_i, d_j) = -delta_ij, (e, d) = 0.

    Extended bilinearly to roots; the null root pairs to zero with everything.
    """
    if isinstance(a, Weight) and isinstance(b, Weight):
        if a != b:
            return Fraction(0)
        return Fraction(1 if a.kind == "e" else -1)
    ca = {a: 1} if isinstance(a, Weight) else a.coeffs
    cb = {b: 1} if isinstance(b, Weight) else b.coeffs
    total = Fraction(0)
    for w, c in ca.items():
        if w in cb:
            total += c * cb[w] * bilinear(w, w)
    return total


@dataclass(frozen=True)
class SimpleRootSystem:
    ordering: tuple[Weight, ...]
    affine: bool = False

    def __post_init__(self):
        kinds = [w.kind for w in self.ordering]
        m, n = kinds.count("e"), kinds.count("d")
        if m + n != len(kinds) or m == 0 or n == 0:
            raise RootSystemError("ordering must contain both epsilon and delta weights")
        expected = {Weight("e", i) for i in range(1, m + 1)} | {Weight("d", j) for j in range(1, n + 1)}
        if set(self.ordering) != expected or len(set(self.ordering)) != len(self.ordering):
            raise RootSystemError(f"ordering {self.labels()} is not a permutation of e1..e{m}, d1..d{n}")

    @cached_property
    def m(self) -> int:
        return sum(1 for w in self.ordering if w.kind == "e")

    @cached_property
    def n(self) -> int:
        return sum(1 for w in self.ordering if w.kind == "d")

    @property
    def size(self) -> int:
        return len(self.ordering)

    @cached_property
    def parity_word(self) -> str:
        return "".join(str(w.parity) for w in self.ordering)

    @property
    def nodes(self) -> tuple[int, ...]:
        start = 0 if self.affine else 1
        return tuple(range(start, self.size))

    def labels(self) -> list[str]:
        return [str(w) for w in self.ordering]

    def positions(self, i: int) -> tuple[int, int]:
        """0-based ordering positions (left, right) joined by node ``i``."""
        self.check_node(i)
        if i == 0:
            return self.size - 1, 0
        return i - 1, i

    def check_node(self, i: int) -> None:
        if i not in self.nodes:
            raise RootSystemError(f"node {i} is not a simple-root position of {self.describe()}")

    def simple_root(self, i: int) -> Root:
        a, b = self.positions(i)
        return Root.difference(self.ordering[a], self.ordering[b], 1 if i == 0 else 0)

    def node_parity(self, i: int) -> int:
        a, b = self.positions(i)
        return (self.ordering[a].parity + self.ordering[b].parity) % 2

    def neighbours(self, i: int) -> tuple[int, ...]:
        """Distinct nodes adjacent to ``i`` in the chain or cycle."""
        self.check_node(i)
        out = []
        for j in (i - 1, i + 1):
            if self.affine:
                j %= self.size
            if j in self.nodes and j != i and j not in out:
                out.append(j)
        return tuple(out)

    @property
    def theta(self) -> Root:
        return Root.difference(self.ordering[0], self.ordering[-1])

    @property
    def null_root(self) -> Root:
        return Root((), 1)

    def describe(self) -> str:
        return f"{'affine ' if self.affine else ''}sl({self.m}|{self.n}) [{self.parity_word}]"

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "affine": self.affine,
            "parity_word": self.parity_word,
            "ordering": self.labels(),
            "simple_roots": [
                {
                    "node": i,
                    "diff": {str(w): c for w, c in self.simple_root(i).diff},
                    "delta_mult": self.simple_root(i).delta_mult,
                    "parity": self.node_parity(i),
                }
                for i in self.nodes
            ],
            "cartan": cartan_matrix(self).entries.tolist(),
        }


@lru_cache(maxsize=4096)
def build_system(parity_word: str, affine: bool = False) -> SimpleRootSystem:
    """Canonical system for a parity word: 0 -> epsilon, 1 -> delta, indices increasing."""
    if not parity_word:
        raise RootSystemError("empty parity word")
    if set(parity_word) - {"0", "1"}:
        raise RootSystemError(f"parity word {parity_word!r} must be over the letters 0 and 1")
    m, n = parity_word.count("0"), parity_word.count("1")
    if m == 0 or n == 0:
        raise RootSystemError(
            f"parity word {parity_word!r} has m = {m}, n = {n}; both must be positive")
    ordering, ie, idl = [], 0, 0
    for ch in parity_word:
        if ch == "0":
            ie += 1
            ordering.append(Weight("e", ie))
        else:
            idl += 1
            ordering.append(Weight("d", idl))
    return SimpleRootSystem(tuple(ordering), affine)


def system_from_labels(labels: Iterable[str], affine: bool = False) -> SimpleRootSystem:
    return SimpleRootSystem(tuple(_weight_from_label(s) for s in labels), affine)


def simple_roots(sys: SimpleRootSystem) -> tuple[Root, ...]:
    return tuple(sys.simple_root(i) for i in sys.nodes)


class CartanMatrix:
    """Integer Gram matrix of the simple roots, indexed by node label."""

    def __init__(self, nodes: tuple[int, ...], entries: np.ndarray):
        self.nodes = tuple(nodes)
        self.entries = np.asarray(entries, dtype=np.int64)
        self._pos = {v: k for k, v in enumerate(self.nodes)}
        self.entries.setflags(write=False)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return int(self.entries[self._pos[i], self._pos[j]])

    def __eq__(self, other) -> bool:
        return (isinstance(other, CartanMatrix) and self.nodes == other.nodes
                and np.array_equal(self.entries, other.entries))

    def __repr__(self) -> str:
        return f"CartanMatrix(nodes={self.nodes}, entries={self.entries.tolist()})"

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.entries, self.entries.T))


def cartan_matrix(sys: SimpleRootSystem) -> CartanMatrix:
    roots = simple_roots(sys)
    gram = np.zeros((len(roots), len(roots)), dtype=np.int64)
    for a, ra in enumerate(roots):
        for b, rb in enumerate(roots):
            v = bilinear(ra, rb)
            assert v.denominator == 1
            gram[a, b] = int(v)
    return CartanMatrix(sys.nodes, gram)


def distinguished_cartan_table(m: int, n: int, affine: bool = False) -> CartanMatrix:
    """Closed-form Cartan entries for the distinguished order e1..em, d1..dn.

    Uses p(k) = parity of the k-th weight (1-based, cyclic with p(0) = p(N)):
    a_kk = (-1)^p(k) + (-1)^p(k+1) and a_k,k+1 = -(-1)^p(k+1).  Node 0 reads
    its two weights as (N, 1), which yields corner entries a_0,N-1 = 1.
    """
    size = m + n

    def p(k: int) -> int:
        k = ((k - 1) % size) + 1
        return 0 if k <= m else 1

    def s(k: int) -> int:
        return -1 if p(k) else 1

    nodes = tuple(range(0 if affine else 1, size))
    table = np.zeros((len(nodes), len(nodes)), dtype=np.int64)
    pos = {v: k for k, v in enumerate(nodes)}
    for i in nodes:
        left = size if i == 0 else i
        table[pos[i], pos[i]] = s(left) + s(left + 1)
        for j in nodes:
            if j == i:
                continue
            if (j - i) % size == 1 and (affine or j == i + 1):
                table[pos[i], pos[j]] = -s(left + 1)
            elif (i - j) % size == 1 and (affine or i == j + 1):
                table[pos[i], pos[j]] = -s(left)
    return CartanMatrix(nodes, table)


def dynkin(sys: SimpleRootSystem, format: str = "ascii") -> str:
    """Dynkin diagram: ``o`` for a white (even) node, ``x`` for a grey (odd) one."""
    cm = cartan_matrix(sys)
    nodes = sys.nodes
    mark = {i: ("x" if sys.node_parity(i) else "o") for i in nodes}
    if format == "ascii":
        order = list(nodes[1:]) + [0] if sys.affine else list(nodes)
        if len(order) == 1:
            return mark[order[0]]
        pieces = [f"{mark[order[0]]}{order[0]}"]
        for a, b in zip(order, order[1:]):
            pieces.append("-" if cm[a, b] else " ")
            pieces.append(f"{mark[b]}{b}")
        if sys.affine:
            pieces.append("-" if cm[order[-1], order[0]] else " ")
            pieces.append(f"({mark[order[0]]}{order[0]})")
        return "".join(pieces)
    if format == "dot":
        lines = ["graph dynkin {", "  node [shape=circle, style=filled];"]
        for i in nodes:
            colour = "grey" if mark[i] == "x" else "white"
            lines.append(f'  n{i} [label="{i}", fillcolor={colour}];')
        for a_idx, a in enumerate(nodes):
            for b in nodes[a_idx + 1:]:
                if cm[a, b]:
                    lines.append(f'  n{a} -- n{b} [label="{cm[a, b]}"];')
        lines.append("}")
        return "\n".join(lines)
    raise RootSystemError(f"unknown diagram format {format!r} (expected 'ascii' or 'dot')")
