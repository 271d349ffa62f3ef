"""Matrix realization of sl(m|n) and its centrally extended loop algebra.

Every simple root system gets Chevalley generators built from matrix units in
the grading induced by its weight ordering.  The classical reflection maps are
expressed as bracket expressions in the source generators; their sign factors
are found by exhaustive search against exact matrix relation checks.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable

from .groupoid import reflect_root, reflect_system
from .rootspace import SimpleRootSystem, cartan_matrix

__all__ = [
    "SuperMatrix",
    "sbracket",
    "supertrace_form",
    "GeneratorSet",
    "generators",
    "RelationCheck",
    "Report",
    "check_relations",
    "check_relations_classical",
    "GeneratorAssignment",
    "classical_reflection",
    "identity_assignment",
    "evaluate",
    "check_assignment",
    "resolve_and_verify",
    "sign_candidates",
    "DEFAULT_LOOP_WINDOW",
]

DEFAULT_LOOP_WINDOW = 3


class SuperMatrix:
    """Sparse Z2-graded matrix with Laurent loop degrees and a central coefficient."""

    __slots__ = ("grading", "entries", "central")

    def __init__(self, grading: tuple[int, ...], entries: dict | None = None, central=0):
        self.grading = tuple(grading)
        self.entries: dict[tuple[int, int, int], Fraction] = {
            k: Fraction(v) for k, v in (entries or {}).items() if v
        }
        self.central = Fraction(central)

    @classmethod
    def unit(cls, grading, row: int, col: int, deg: int = 0, coeff=1) -> "SuperMatrix":
        return cls(grading, {(row, col, deg): coeff})

    @classmethod
    def zero(cls, grading) -> "SuperMatrix":
        return cls(grading)

    @property
    def size(self) -> int:
        return len(self.grading)

    def entry_parity(self, r: int, c: int) -> int:
        return (self.grading[r] + self.grading[c]) % 2

    def is_zero(self) -> bool:
        return not self.entries and self.central == 0

    def parity(self) -> int | None:
        """0 or 1 for homogeneous matrices (zero and central counts as even), else None."""
        ps = {self.entry_parity(r, c) for r, c, _ in self.entries}
        if self.central:
            ps.add(0)
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def parts(self) -> dict[int, "SuperMatrix"]:
        out: dict[int, dict] = {0: {}, 1: {}}
        for (r, c, d), v in self.entries.items():
            out[self.entry_parity(r, c)][(r, c, d)] = v
        return {0: SuperMatrix(self.grading, out[0], self.central),
                1: SuperMatrix(self.grading, out[1])}

    def degrees(self) -> set[int]:
        return {d for _, _, d in self.entries}

    def at_degree(self, deg: int) -> "SuperMatrix":
        return SuperMatrix(self.grading, {(r, c, 0): v for (r, c, d), v in self.entries.items() if d == deg})

    def supertrace(self, deg: int = 0) -> Fraction:
        return sum((v * (-1) ** self.grading[r] for (r, c, d), v in self.entries.items()
                    if r == c and d == deg), Fraction(0))

    def _combine(self, other: "SuperMatrix", sign: int) -> "SuperMatrix":
        acc = dict(self.entries)
        for k, v in other.entries.items():
            acc[k] = acc.get(k, 0) + sign * v
        return SuperMatrix(self.grading, acc, self.central + sign * other.central)

    def __add__(self, other: "SuperMatrix") -> "SuperMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "SuperMatrix") -> "SuperMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "SuperMatrix":
        return Fraction(-1) * self

    def __rmul__(self, k) -> "SuperMatrix":
        k = Fraction(k)
        return SuperMatrix(self.grading, {key: k * v for key, v in self.entries.items()}, k * self.central)

    def loop_product(self, other: "SuperMatrix") -> "SuperMatrix":
        """Associative product of the loop parts (central parts are dropped)."""
        by_row: dict[int, list] = {}
        for (r, c, d), v in other.entries.items():
            by_row.setdefault(r, []).append((c, d, v))
        acc: dict[tuple[int, int, int], Fraction] = {}
        for (r, k, d1), v1 in self.entries.items():
            for c, d2, v2 in by_row.get(k, ()):
                key = (r, c, d1 + d2)
                acc[key] = acc.get(key, 0) + v1 * v2
        return SuperMatrix(self.grading, acc)

    def max_degree(self) -> int:
        return max((abs(d) for _, _, d in self.entries), default=0)

    def __eq__(self, other) -> bool:
        return isinstance(other, SuperMatrix) and (self - other).is_zero()

    def __hash__(self):
        return hash((self.grading, frozenset(self.entries.items()), self.central))

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for (r, c, d), v in sorted(self.entries.items()):
            loop = "" if d == 0 else f"t^{d}"
            terms.append(f"{v}*E{r + 1}{c + 1}{loop}")
        if self.central:
            terms.append(f"{self.central}*c")
        return " + ".join(terms)


def supertrace_form(a: SuperMatrix, b: SuperMatrix) -> Fraction:
    """str(ab) for degree-zero matrices."""
    return a.loop_product(b).supertrace(0)


def sbracket(a: SuperMatrix, b: SuperMatrix,
             form: Callable[[SuperMatrix, SuperMatrix], Fraction] = supertrace_form) -> SuperMatrix:
    """Super bracket with the loop cocycle s * delta(s+u, 0) * form(a, b) * c."""
    if a.grading != b.grading:
        raise ValueError("sbracket needs matrices with the same grading")
    total = SuperMatrix.zero(a.grading)
    pa_parts, pb_parts = a.parts(), b.parts()
    for pa, x in pa_parts.items():
        if not x.entries:
            continue
        for pb, y in pb_parts.items():
            if not y.entries:
                continue
            sign = -1 if pa * pb else 1
            total = total + x.loop_product(y) - sign * y.loop_product(x)
    central = Fraction(0)
    for s in a.degrees():
        if s == 0 or -s not in b.degrees():
            continue
        central += s * form(a.at_degree(s), b.at_degree(-s))
    return SuperMatrix(a.grading, total.entries, central)


def loop_shift(x: SuperMatrix, mu) -> SuperMatrix:
    """Conjugation by diag(t^mu): E_ab t^s -> E_ab t^(s + mu_a - mu_b).

    The centre picks up str(diag(mu) x_0), which keeps the cocycle intact.
    """
    entries = {(r, c, d + mu[r] - mu[c]): v for (r, c, d), v in x.entries.items()}
    extra = sum((v * mu[r] * (-1) ** x.grading[r] for (r, c, d), v in x.entries.items()
                 if r == c and d == 0), Fraction(0))
    return SuperMatrix(x.grading, entries, x.central + extra)


def degree_derivation(x: SuperMatrix) -> SuperMatrix:
    """Action of d: a t^s -> s a t^s, killing the centre."""
    return SuperMatrix(x.grading, {(r, c, d): d * v for (r, c, d), v in x.entries.items()})


@dataclass(frozen=True)
class GeneratorSet:
    sys: SimpleRootSystem
    x_plus: dict
    x_minus: dict
    h: dict
    has_d: bool = False
    basis: tuple | None = None  # weight ordering of the matrix basis (default: sys.ordering)

    @property
    def weights(self) -> tuple:
        return self.basis if self.basis is not None else self.sys.ordering

    @property
    def grading(self) -> tuple[int, ...]:
        return tuple(w.parity for w in self.weights)

    def get(self, kind: str, node: int) -> SuperMatrix:
        return {"xp": self.x_plus, "xm": self.x_minus, "h": self.h}[kind][node]


def generators(sys: SimpleRootSystem) -> GeneratorSet:
    """Chevalley generators: x+ = E_ab, x- = (-1)^p(a) E_ba, h = [x+, x-]."""
    if sys.m == sys.n:
        warnings.warn(f"{sys.describe()} has m = n; the supertrace form is degenerate on the identity",
                      stacklevel=2)
    grading = tuple(w.parity for w in sys.ordering)
    xp, xm, hh = {}, {}, {}
    for i in sys.nodes:
        a, b = sys.positions(i)
        deg = 1 if i == 0 else 0
        xp[i] = SuperMatrix.unit(grading, a, b, deg)
        xm[i] = SuperMatrix.unit(grading, b, a, -deg, (-1) ** grading[a])
        hh[i] = sbracket(xp[i], xm[i])
    return GeneratorSet(sys, xp, xm, hh, sys.affine)


@dataclass
class RelationCheck:
    id: str
    instance: str
    passed: bool
    residual: SuperMatrix | None = None

    def to_json(self) -> dict:
        return {"id": self.id, "instance": self.instance,
                "status": "pass" if self.passed else "fail",
                "residual_norm_is_zero": self.passed}


@dataclass
class Report:
    relations: list[RelationCheck] = field(default_factory=list)
    resolved_signs: list[int] = field(default_factory=list)
    status: str = "resolved"
    sign_names: list[str] = field(default_factory=list)
    bijective: bool | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.relations) and self.status != "failed"

    def failures(self) -> list[RelationCheck]:
        return [r for r in self.relations if not r.passed]

    def to_json(self) -> dict:
        out = {
            "status": self.status,
            "relations": [r.to_json() for r in self.relations],
            "resolved_signs": list(self.resolved_signs),
        }
        if self.sign_names:
            out["sign_names"] = list(self.sign_names)
        if self.bijective is not None:
            out["bijective"] = self.bijective
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _ad_power(x: SuperMatrix, y: SuperMatrix, k: int) -> SuperMatrix:
    for _ in range(k):
        y = sbracket(x, y)
    return y


def relation_instances(sys: SimpleRootSystem, gen: Callable[[str, int], SuperMatrix],
                       with_d: bool | None = None) -> Iterable[tuple[str, str, Callable[[], SuperMatrix]]]:
    """Yield (family, instance, residual thunk) for every defining relation of ``sys``.

    ``gen(kind, node)`` returns the matrix standing for generator ``kind`` at
    ``node``; kinds are "xp", "xm", "h".
    """
    cm = cartan_matrix(sys)
    nodes = sys.nodes
    signs = {"xp": 1, "xm": -1}
    for a_idx, i in enumerate(nodes):
        for j in nodes[a_idx:]:
            yield "hh", f"[h{i},h{j}]", lambda i=i, j=j: sbracket(gen("h", i), gen("h", j))
    for i in nodes:
        for j in nodes:
            for kind, s in signs.items():
                yield ("hx", f"[h{i},{kind}{j}]",
                       lambda i=i, j=j, kind=kind, s=s:
                       sbracket(gen("h", i), gen(kind, j)) - (s * cm[i, j]) * gen(kind, j))
    for i in nodes:
        for j in nodes:
            def cross(i=i, j=j):
                r = sbracket(gen("xp", i), gen("xm", j))
                return r - gen("h", i) if i == j else r
            yield "cross", f"[xp{i},xm{j}]", cross
    for i in nodes:
        for j in nodes:
            if i == j:
                continue
            k = 1 + abs(cm[i, j])
            for kind in signs:
                yield ("serre", f"ad({kind}{i})^{k}({kind}{j})",
                       lambda i=i, j=j, k=k, kind=kind: _ad_power(gen(kind, i), gen(kind, j), k))
    for i in nodes:
        if sys.node_parity(i) != 1:
            continue
        for kind in signs:
            yield "odd_square", f"[{kind}{i},{kind}{i}]", lambda i=i, kind=kind: sbracket(gen(kind, i), gen(kind, i))
        left, right = _chain_neighbours(sys, i)
        if left is None or right is None:
            continue
        for kind in signs:
            yield ("odd_quartic", f"[[{kind}{left},{kind}{i}],[{kind}{i},{kind}{right}]]",
                   lambda i=i, l=left, r=right, kind=kind: sbracket(
                       sbracket(gen(kind, l), gen(kind, i)), sbracket(gen(kind, i), gen(kind, r))))
    if with_d if with_d is not None else sys.affine:
        for i in nodes:
            yield "degree", f"[d,h{i}]", lambda i=i: degree_derivation(gen("h", i))
            for kind, s in signs.items():
                yield ("degree", f"[d,{kind}{i}]",
                       lambda i=i, kind=kind, s=s:
                       degree_derivation(gen(kind, i)) - (s if i == 0 else 0) * gen(kind, i))


def _chain_neighbours(sys: SimpleRootSystem, i: int) -> tuple[int | None, int | None]:
    """Left and right neighbours of node i, cyclic for affine systems.

    A three-node cycle has no quartic relation: both neighbours of a node are
    adjacent to each other there.
    """
    if sys.affine:
        size = sys.size
        if size < 4:
            return None, None
        return (i - 1) % size, (i + 1) % size
    left = i - 1 if i - 1 in sys.nodes else None
    right = i + 1 if i + 1 in sys.nodes else None
    return left, right


def check_relations(sys: SimpleRootSystem, gen: Callable[[str, int], SuperMatrix],
                    stop_on_failure: bool = False, loop_window: int = DEFAULT_LOOP_WINDOW,
                    first: tuple[str, ...] = ()) -> list[RelationCheck]:
    """Evaluate all relation instances; families named in ``first`` are checked first."""
    instances = list(relation_instances(sys, gen))
    if first:
        instances.sort(key=lambda t: t[0] not in first)
    out = []
    for family, instance, thunk in instances:
        residual = thunk()
        if residual.max_degree() > loop_window:
            raise ValueError(f"relation {instance} leaves the loop window |deg| <= {loop_window}")
        passed = residual.is_zero()
        out.append(RelationCheck(family, instance, passed, None if passed else residual))
        if stop_on_failure and not passed:
            break
    return out


def check_relations_classical(sys: SimpleRootSystem, gens: GeneratorSet | None = None,
                              loop_window: int = DEFAULT_LOOP_WINDOW) -> Report:
    """Evaluate every defining relation of ``sys`` on a generator set (default: its own)."""
    if gens is None:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            gens = generators(sys)
    checks = check_relations(sys, gens.get, loop_window=loop_window)
    rep = Report(checks)
    rep.status = "pass" if rep.ok else "failed"
    return rep


# --- bracket expressions over a generator set ---------------------------------
# ("g", kind, node) | ("br", e1, e2) | ("lin", ((coeff, e), ...)) | ("shift", mu, e)

def evaluate(expr, gen: Callable[[str, int], SuperMatrix], basis=None) -> SuperMatrix:
    """Evaluate a bracket expression; ``basis`` (weight ordering) is needed for shifts."""
    tag = expr[0]
    if tag == "g":
        return gen(expr[1], expr[2])
    if tag == "br":
        return sbracket(evaluate(expr[1], gen, basis), evaluate(expr[2], gen, basis))
    if tag == "shift":
        weight_mu = dict(expr[1])
        return loop_shift(evaluate(expr[2], gen, basis), tuple(weight_mu[w] for w in basis))
    if tag == "lin":
        total = None
        for coeff, sub in expr[1]:
            term = Fraction(coeff) * evaluate(sub, gen, basis)
            total = term if total is None else total + term
        return total
    raise ValueError(f"unknown expression tag {tag!r}")


def render(expr) -> str:
    tag = expr[0]
    if tag == "g":
        return f"{expr[1]}{expr[2]}"
    if tag == "br":
        return f"[{render(expr[1])},{render(expr[2])}]"
    if tag == "shift":
        return "shift{" + ",".join(f"{w}:{k}" for w, k in expr[1] if k) + "}(" + render(expr[2]) + ")"
    return " + ".join(f"{c}*{render(e)}" for c, e in expr[1])


@dataclass(frozen=True)
class GeneratorAssignment:
    """Images of the target generators as signed bracket expressions in the source ones.

    ``images[(kind, node)] = (sign_name or None, expression)``.
    """

    source: SimpleRootSystem
    target: SimpleRootSystem
    node: int | None
    images: dict
    sign_names: tuple[str, ...] = ()
    guess: tuple[int, ...] = ()
    signs: tuple[int, ...] | None = None
    status: str = "unresolved"

    def sign_values(self, signs: tuple[int, ...] | None = None) -> dict[str, int]:
        signs = self.signs if signs is None else signs
        if signs is None:
            raise ValueError("assignment has no sign values; resolve it first")
        return dict(zip(self.sign_names, signs))

    def image_matrix(self, kind: str, node: int, source_gens: GeneratorSet,
                     signs: tuple[int, ...] | None = None) -> SuperMatrix:
        name, expr = self.images[(kind, node)]
        value = evaluate(expr, source_gens.get, source_gens.weights)
        if name is None:
            return value
        return self.sign_values(signs)[name] * value

    def with_signs(self, signs: tuple[int, ...], status: str = "resolved") -> "GeneratorAssignment":
        return replace(self, signs=tuple(signs), status=status)

    def flip(self, name: str) -> "GeneratorAssignment":
        values = self.sign_values()
        values[name] = -values[name]
        return replace(self, signs=tuple(values[n] for n in self.sign_names), status="unresolved")

    def describe(self) -> dict:
        return {f"{k}{n}": (f"{s}*" if s else "") + render(e) for (k, n), (s, e) in sorted(self.images.items())}


def _g(kind, node):
    return ("g", kind, node)


def classical_reflection(sys: SimpleRootSystem, i: int) -> GeneratorAssignment:
    """Reflection map at node ``i``: target = reflected system, images over ``sys``.

    Reflected node: x+ -> c+ x-, x- -> c- x+, h -> -h.  Neighbour j
    (nonzero Cartan entry): x(+/-) -> s(+/-) (+/-)[x_i, x_j] for an even node,
    (+/-)[x_j, x_i] for an odd node, h_j -> h_j + h_i.  Other nodes are fixed.
    Each signed image carries a free sign; the initial guess follows the
    published tables.  When the reflected roots carry different multiples of
    the null root than the target's own simple roots (reflections touching
    node 0), every image is composed with the loop shift that realigns them.
    """
    target = reflect_system(sys, i)
    mu = _realigning_shift(sys, i, target)
    cm = cartan_matrix(sys)
    odd = sys.node_parity(i) == 1
    images: dict = {}
    names: list[str] = []
    guess: list[int] = []
    for j in sys.nodes:
        if j == i:
            images[("xp", j)] = (f"c+{j}", _g("xm", i))
            images[("xm", j)] = (f"c-{j}", _g("xp", i))
            images[("h", j)] = (None, ("lin", ((-1, _g("h", i)),)))
            names += [f"c+{j}", f"c-{j}"]
            guess += [-1, -1]
        elif cm[i, j] != 0:
            for kind, s in (("xp", 1), ("xm", -1)):
                pair = (_g(kind, j), _g(kind, i)) if odd else (_g(kind, i), _g(kind, j))
                images[(kind, j)] = (f"s{'+' if s > 0 else '-'}{j}", ("lin", ((s, ("br",) + pair),)))
            images[("h", j)] = (None, ("lin", ((1, _g("h", j)), (1, _g("h", i)))))
            names += [f"s+{j}", f"s-{j}"]
            guess += [1, 1]
        else:
            for kind in ("xp", "xm", "h"):
                images[(kind, j)] = (None, _g(kind, j))
    if any(k for _, k in mu):
        images = {key: (name, ("shift", mu, expr)) for key, (name, expr) in images.items()}
    return GeneratorAssignment(sys, target, i, images, tuple(names), tuple(guess))


def _realigning_shift(sys: SimpleRootSystem, i: int, target: SimpleRootSystem) -> tuple:
    """Integer mu per weight with image-root + (mu_a - mu_b) delta = target root."""
    if not sys.affine:
        return tuple((w, 0) for w in sys.ordering)
    gap = {}
    for j in target.nodes:
        image = reflect_root(sys, i, sys.simple_root(j))
        want = target.simple_root(j)
        if image.diff != want.diff:
            raise AssertionError(f"reflected root {image} does not match target node {j}: {want}")
        gap[j] = want.delta_mult - image.delta_mult
    weight_mu = {target.ordering[0]: 0}
    for k in range(1, target.size):
        # target node k joins target positions k-1 and k
        weight_mu[target.ordering[k]] = weight_mu[target.ordering[k - 1]] - gap[k]
    a, b = target.positions(0)
    assert weight_mu[target.ordering[a]] - weight_mu[target.ordering[b]] == gap[0]
    values = [weight_mu[w] for w in sys.ordering]
    base = max(set(values), key=lambda v: (values.count(v), -abs(v)))
    return tuple((w, weight_mu[w] - base) for w in sys.ordering)


def identity_assignment(sys: SimpleRootSystem) -> GeneratorAssignment:
    images = {(k, j): (None, _g(k, j)) for j in sys.nodes for k in ("xp", "xm", "h")}
    return GeneratorAssignment(sys, sys, None, images, (), (), (), "resolved")


def sign_candidates(guess: tuple[int, ...]) -> Iterable[tuple[int, ...]]:
    """All sign vectors by Hamming distance from ``guess``; ties flip later entries first."""
    k = len(guess)
    for r in range(k + 1):
        flip_sets = sorted(itertools.combinations(range(k), r), key=lambda S: tuple(-x for x in reversed(S)))
        for S in flip_sets:
            yield tuple(-g if idx in S else g for idx, g in enumerate(guess))


def _unsigned_images(assignment: GeneratorAssignment, source_gens: GeneratorSet) -> dict:
    return {key: evaluate(expr, source_gens.get, source_gens.weights)
            for key, (_, expr) in assignment.images.items()}


def _image_gen(assignment: GeneratorAssignment, source_gens: GeneratorSet, signs,
               unsigned: dict | None = None) -> Callable:
    unsigned = unsigned if unsigned is not None else _unsigned_images(assignment, source_gens)
    values = assignment.sign_values(signs) if assignment.sign_names else {}
    cache: dict = {}

    def gen(kind, node):
        key = (kind, node)
        if key not in cache:
            name = assignment.images[key][0]
            cache[key] = unsigned[key] if name is None else values[name] * unsigned[key]
        return cache[key]
    return gen


def check_assignment(assignment: GeneratorAssignment, source: GeneratorSet | None = None,
                     loop_window: int = DEFAULT_LOOP_WINDOW) -> Report:
    """Check the target relations on the images at the assignment's current signs."""
    source = source or _quiet_generators(assignment.source)
    checks = check_relations(assignment.target, _image_gen(assignment, source, assignment.signs),
                             loop_window=loop_window)
    rep = Report(checks, list(assignment.signs or ()), sign_names=list(assignment.sign_names))
    rep.status = "resolved" if rep.ok else "failed"
    return rep


def _quiet_generators(sys: SimpleRootSystem) -> GeneratorSet:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return generators(sys)


def _search(assignment: GeneratorAssignment, source: GeneratorSet, loop_window: int):
    best = None
    unsigned = _unsigned_images(assignment, source)
    for signs in sign_candidates(assignment.guess):
        checks = check_relations(assignment.target, _image_gen(assignment, source, signs, unsigned),
                                 stop_on_failure=True, loop_window=loop_window, first=("cross",))
        if all(c.passed for c in checks):
            return signs, None
        if best is None:
            best = signs
    return None, best


def _composes_to_identity(forward: GeneratorAssignment, source: GeneratorSet,
                          loop_window: int) -> tuple[bool, tuple[int, ...] | None]:
    """Find signs for the reverse reflection so that reverse after forward is the identity."""
    if forward.node is None:
        return True, ()
    backward = classical_reflection(forward.target, forward.node)
    assert backward.target == forward.source
    forward_gen = _image_gen(forward, source, forward.signs)
    # generator set of the intermediate system, realised inside the source algebra
    mid = GeneratorSet(forward.target,
                       {j: forward_gen("xp", j) for j in forward.target.nodes},
                       {j: forward_gen("xm", j) for j in forward.target.nodes},
                       {j: forward_gen("h", j) for j in forward.target.nodes},
                       forward.target.affine, basis=source.weights)
    # each sign multiplies exactly one image, so the signs can be fixed one at a time
    unsigned = _unsigned_images(backward, mid)
    chosen: dict[str, int] = {}
    for (kind, j), (name, _) in backward.images.items():
        value, want = unsigned[(kind, j)], source.get(kind, j)
        if name is None:
            if value != want:
                return False, None
        elif value == want:
            chosen[name] = 1
        elif -value == want:
            chosen[name] = -1
        else:
            return False, None
    return True, tuple(chosen[n] for n in backward.sign_names)


def resolve_and_verify(assignment: GeneratorAssignment, source: GeneratorSet | None = None,
                       target_sys: SimpleRootSystem | None = None,
                       loop_window: int = DEFAULT_LOOP_WINDOW) -> tuple[GeneratorAssignment, Report]:
    """Search the sign space; return the resolved (or failed) assignment and its report."""
    source = source or _quiet_generators(assignment.source)
    if target_sys is not None and target_sys != assignment.target:
        raise ValueError("target system does not match the assignment")
    signs, best = _search(assignment, source, loop_window)
    if signs is None:
        failed = assignment.with_signs(best, status="failed")
        rep = check_assignment(failed, source, loop_window)
        rep.status = "failed"
        return failed, rep
    resolved = assignment.with_signs(signs)
    rep = check_assignment(resolved, source, loop_window)
    rep.bijective, back_signs = _composes_to_identity(resolved, source, loop_window)
    if back_signs:
        rep.notes.append(f"reverse reflection signs {list(back_signs)}")
    if not rep.bijective:
        rep.status = "failed"
    return resolved, rep
