"""Even and odd reflections, orbit graphs of the Weyl groupoid, shortest reflection words."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .rootspace import Root, RootSystemError, SimpleRootSystem, bilinear, build_system

__all__ = [
    "is_root",
    "reflect_root",
    "reflect_system",
    "ReflectionWord",
    "GroupoidGraph",
    "orbit",
    "shortest_path",
    "DEFAULT_ORBIT_BOUND",
]

DEFAULT_ORBIT_BOUND = 9


def is_root(sys: SimpleRootSystem, lam: Root) -> bool:
    """Membership in the root set {w_a - w_b + k*delta} (plus k*delta, k != 0, when affine)."""
    coeffs = lam.coeffs
    if not sys.affine and lam.delta_mult:
        return False
    if not coeffs:
        return sys.affine and lam.delta_mult != 0
    vals = sorted(coeffs.values())
    return vals == [-1, 1]


def _is_real_root(sys: SimpleRootSystem, lam: Root) -> bool:
    return is_root(sys, lam) and bool(lam.coeffs)


def reflect_root(sys: SimpleRootSystem, i: int, lam: Root) -> Root:
    """Image of a real root under the simple reflection at node ``i``.

    Even nodes use lam - 2(lam, a)/(a, a) a.  Odd nodes follow the
    non-linear rule: a -> -a, lam -> lam + a when that is a root, else lam.
    """
    alpha = sys.simple_root(i)
    if not _is_real_root(sys, lam):
        raise RootSystemError(f"{lam} is not a real root of {sys.describe()}")
    if sys.node_parity(i) == 0:
        k = Fraction(2) * bilinear(lam, alpha) / bilinear(alpha, alpha)
        assert k.denominator == 1
        return lam - int(k) * alpha
    if lam == alpha:
        return -alpha
    if lam == -alpha:
        return alpha
    shifted = lam + alpha
    member = is_root(sys, shifted)
    if lam in set(sys.simple_root(j) for j in sys.nodes):
        # for simple lam the membership test agrees with the form test
        assert member == (bilinear(lam, alpha) != 0), (str(lam), str(alpha))
    return shifted if member else lam


def reflect_system(sys: SimpleRootSystem, i: int) -> SimpleRootSystem:
    """Swap the two weights joined by node ``i`` (cyclically for node 0)."""
    a, b = sys.positions(i)
    order = list(sys.ordering)
    order[a], order[b] = order[b], order[a]
    return SimpleRootSystem(tuple(order), sys.affine)


def edge_parity(sys: SimpleRootSystem, i: int) -> str:
    return "odd" if sys.node_parity(i) else "even"


@dataclass(frozen=True)
class ReflectionWord:
    start: SimpleRootSystem
    nodes: tuple[int, ...] = ()
    steps: tuple[tuple[SimpleRootSystem, int], ...] = field(init=False)

    def __post_init__(self):
        steps, cur = [], self.start
        for i in self.nodes:
            cur.check_node(i)
            steps.append((cur, i))
            cur = reflect_system(cur, i)
        object.__setattr__(self, "steps", tuple(steps))

    @property
    def parity_trace(self) -> tuple[str, ...]:
        return tuple(edge_parity(s, i) for s, i in self.steps)

    @property
    def end(self) -> SimpleRootSystem:
        if not self.steps:
            return self.start
        s, i = self.steps[-1]
        return reflect_system(s, i)

    def __len__(self) -> int:
        return len(self.nodes)

    def to_json(self) -> dict:
        return {
            "start": self.start.parity_word,
            "end": self.end.parity_word,
            "steps": [{"from": s.parity_word, "node": i, "parity": edge_parity(s, i)}
                      for s, i in self.steps],
        }


def _necklace(word: str) -> str:
    return min(word[k:] + word[:k] for k in range(len(word)))


@dataclass(frozen=True)
class GroupoidGraph:
    """Orbit graph; ``view`` is "parity", "full" (weight orderings) or "necklace" (affine)."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, int, str], ...]
    affine: bool
    view: str

    def to_json(self) -> dict:
        return {
            "view": self.view,
            "affine": self.affine,
            "vertices": list(self.vertices),
            "edges": [{"from": a, "to": b, "node": i, "parity": p} for a, b, i, p in self.edges],
        }

    def to_dot(self) -> str:
        lines = ["graph groupoid {"]
        for v in self.vertices:
            lines.append(f'  "{v}";')
        for a, b, i, p in self.edges:
            style = "solid" if p == "odd" else "dashed"
            lines.append(f'  "{a}" -- "{b}" [label="{i}", style={style}];')
        lines.append("}")
        return "\n".join(lines)

    def neighbours(self, v: str) -> set[str]:
        out = set()
        for a, b, _, _ in self.edges:
            if a == v:
                out.add(b)
            if b == v:
                out.add(a)
        return out


def _key(sys: SimpleRootSystem, view: str) -> str:
    if view == "full":
        return ",".join(sys.labels())
    if view == "necklace":
        return _necklace(sys.parity_word)
    return sys.parity_word


def orbit(seed: SimpleRootSystem, bound: int = DEFAULT_ORBIT_BOUND,
          view: str = "parity") -> GroupoidGraph:
    """BFS closure of ``seed`` under all simple reflections."""
    if seed.size > bound:
        raise RootSystemError(f"m+n = {seed.size} exceeds the orbit bound {bound}")
    if view not in ("parity", "full", "necklace"):
        raise RootSystemError(f"unknown orbit view {view!r}")
    if view == "necklace" and not seed.affine:
        raise RootSystemError("the necklace view applies to affine systems only")

    def canon(s: SimpleRootSystem) -> SimpleRootSystem:
        return s if view == "full" else build_system(s.parity_word, s.affine)

    start = canon(seed)
    seen = {_key(start, view): start}
    order = [_key(start, view)]
    edges: dict[tuple, tuple[str, str, int, str]] = {}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        ck = _key(cur, view)
        for i in cur.nodes:
            nxt = canon(reflect_system(cur, i))
            nk = _key(nxt, view)
            a, b = sorted((ck, nk))
            edges.setdefault((a, b, i), (a, b, i, edge_parity(cur, i)))
            if nk not in seen:
                seen[nk] = nxt
                order.append(nk)
                queue.append(nxt)
    return GroupoidGraph(tuple(order), tuple(sorted(edges.values())), seed.affine, view)


def shortest_path(a: SimpleRootSystem, b: SimpleRootSystem) -> ReflectionWord:
    """Minimal reflection word from ``a`` to a system with the parity word of ``b``.

    BFS with node indices expanded in increasing order, so the first path
    found to each word is the lexicographically smallest among the shortest.
    """
    if (a.m, a.n, a.affine) != (b.m, b.n, b.affine):
        raise RootSystemError(f"{a.describe()} and {b.describe()} lie in different orbits")
    target = b.parity_word
    parent: dict[str, tuple[str, int] | None] = {a.parity_word: None}
    queue = deque([a])
    while queue:
        cur = queue.popleft()
        if cur.parity_word == target:
            break
        for i in cur.nodes:
            nxt = reflect_system(cur, i)
            w = nxt.parity_word
            if w not in parent:
                parent[w] = (cur.parity_word, i)
                queue.append(nxt)
    if target not in parent:
        raise RootSystemError(f"{b.describe()} is not reachable from {a.describe()}")
    path, w = [], target
    while parent[w] is not None:
        prev, i = parent[w]
        path.append(i)
        w = prev
    return ReflectionWord(a, tuple(reversed(path)))
