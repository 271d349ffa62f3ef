"""Yangian presentations built from a Cartan matrix, and quantum reflection maps."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import NamedTuple

from .groupoid import reflect_system
from .liesuper import classical_reflection, resolve_and_verify, sign_candidates
from .rewrite import (
    Anti, Br, FreeElement, Lin, Prod, Sym, expand, lin, render, rules_from, complete,
    symbol_str, verify_image, DEFAULT_LEVEL_BOUND,
)
from .rootspace import RootSystemError, SimpleRootSystem, cartan_matrix

__all__ = [
    "GeneratorSymbol",
    "Relation",
    "Definition",
    "Presentation",
    "GeneratorMap",
    "minimalistic",
    "drinfeld",
    "presentation_from_cartan",
    "quantum_reflection",
    "identity_map",
    "resolve_signs",
    "KINDS",
]

KINDS = ("x_plus", "x_minus", "h", "h_tilde", "d")


class GeneratorSymbol(NamedTuple):
    kind: str
    node: int
    level: int
    parity: int

    def __str__(self) -> str:
        return symbol_str(self)


@dataclass(frozen=True)
class Relation:
    id: str
    family: str
    instance: tuple
    expr: object

    @property
    def element(self) -> FreeElement:
        return expand(self.expr)

    def to_json(self) -> dict:
        return {"id": self.id, "family": self.family, "terms": self.element.to_json()}


@dataclass(frozen=True)
class Definition:
    """A defined symbol (h-tilde) or a level-raising rule; not a relation."""

    symbol: GeneratorSymbol
    expr: object
    kind: str = "definition"

    def to_json(self) -> dict:
        return {"symbol": str(self.symbol), "kind": self.kind, "expansion": render(self.expr)}


@dataclass(frozen=True)
class Presentation:
    nodes: tuple[int, ...]
    cartan: dict
    parity: dict
    flavor: str
    level_bound: int
    alphabet: tuple[GeneratorSymbol, ...]
    relations: tuple[Relation, ...]
    definitions: tuple[Definition, ...]
    system: SimpleRootSystem | None = None
    with_d: bool = False

    def sym(self, kind: str, node: int, level: int = 0) -> GeneratorSymbol:
        if kind == "d":
            if not self.with_d:
                raise ValueError("this presentation has no derivation d")
            return GeneratorSymbol("d", 0, 0, 0)
        if node not in self.nodes:
            raise ValueError(f"node {node} is not in {self.nodes}")
        p = self.parity[node] if kind in ("x_plus", "x_minus") else 0
        return GeneratorSymbol(kind, node, level, p)

    def x(self, sign: int, node: int, level: int = 0) -> Sym:
        return Sym(self.sym("x_plus" if sign > 0 else "x_minus", node, level))

    def h(self, node: int, level: int = 0) -> Sym:
        return Sym(self.sym("h", node, level))

    def ht(self, node: int, level: int = 1) -> Sym:
        return Sym(self.sym("h_tilde", node, level))

    def a(self, i: int, j: int) -> int:
        return self.cartan[(i, j)]

    def family_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.relations:
            out[r.family] = out.get(r.family, 0) + 1
        return out

    def parse(self, text: str):
        return _Parser(self, text).parse()

    def describe(self) -> str:
        if self.system is not None:
            return f"{self.flavor} presentation of {self.system.describe()}"
        return f"{self.flavor} presentation on nodes {list(self.nodes)}"

    def to_json(self) -> dict:
        return {
            "flavor": self.flavor,
            "level_bound": self.level_bound,
            "nodes": list(self.nodes),
            "parity": {str(k): v for k, v in sorted(self.parity.items())},
            "cartan": [[self.cartan[(i, j)] for j in self.nodes] for i in self.nodes],
            "alphabet": [str(s) for s in self.alphabet],
            "relations": [r.to_json() for r in self.relations],
            "definitions": [d.to_json() for d in self.definitions],
        }


def _neighbours_in_chain(nodes, i, cyclic):
    pos = nodes.index(i)
    n = len(nodes)
    if cyclic:
        if n < 4:
            return None
        return nodes[(pos - 1) % n], nodes[(pos + 1) % n]
    if 0 < pos < n - 1:
        return nodes[pos - 1], nodes[pos + 1]
    return None


def _alphabet(nodes, parity, levels, with_d, tilde_levels):
    out = []
    for i in nodes:
        for r in levels:
            out.append(GeneratorSymbol("h", i, r, 0))
            out.append(GeneratorSymbol("x_minus", i, r, parity[i]))
            out.append(GeneratorSymbol("x_plus", i, r, parity[i]))
        for r in tilde_levels:
            out.append(GeneratorSymbol("h_tilde", i, r, 0))
    if with_d:
        out.append(GeneratorSymbol("d", 0, 0, 0))
    return tuple(out)


def _tilde_definitions(p: Presentation, levels) -> list[Definition]:
    defs = []
    for i in p.nodes:
        if 1 in levels:
            defs.append(Definition(p.sym("h_tilde", i, 1),
                                   lin((1, 0, p.h(i, 1)), (Fraction(-1, 2), 1, Prod((p.h(i), p.h(i)))))))
        if 2 in levels:
            defs.append(Definition(p.sym("h_tilde", i, 2),
                                   lin((1, 0, p.h(i, 2)), (-1, 1, Prod((p.h(i), p.h(i, 1)))),
                                       (Fraction(1, 3), 2, Prod((p.h(i), p.h(i), p.h(i)))))))
    return defs


def _ad_power(x, y, k):
    out = y
    for _ in range(k):
        out = Br(x, out)
    return out


def _sign_tag(s):
    return "+" if s > 0 else "-"


def _minimalistic_relations(p: Presentation, cyclic: bool) -> list[Relation]:
    rels: list[Relation] = []
    N = p.nodes
    hs = [(i, r) for i in N for r in (0, 1)]
    for (i, r), (j, s) in itertools.combinations(hs, 2):
        rels.append(Relation(f"hh({i}_{r},{j}_{s})", "hh", (i, r, j, s), Br(p.h(i, r), p.h(j, s))))
    for i in N:
        for j in N:
            e = Br(p.x(1, i), p.x(-1, j))
            if i == j:
                e = lin((1, 0, e), (-1, 0, p.h(i)))
            rels.append(Relation(f"cross({i},{j})", "cross", (i, j), e))
    for i in N:
        for j in N:
            for r, s in ((1, 0), (0, 1)):
                e = Br(p.x(1, i, r), p.x(-1, j, s))
                if i == j:
                    e = lin((1, 0, e), (-1, 0, p.h(i, 1)))
                rels.append(Relation(f"cross1({i}_{r},{j}_{s})", "cross1", (i, r, j, s), e))
    for i in N:
        for j in N:
            for r in (0, 1):
                for sg in (1, -1):
                    e = lin((1, 0, Br(p.h(i), p.x(sg, j, r))), (-sg * p.a(i, j), 0, p.x(sg, j, r)))
                    rels.append(Relation(f"hx({i},{j}_{r},{_sign_tag(sg)})", "hx", (i, j, r, sg), e))
    for i in N:
        for j in N:
            for sg in (1, -1):
                e = lin((1, 0, Br(p.x(sg, i, 1), p.x(sg, j))), (-1, 0, Br(p.x(sg, i), p.x(sg, j, 1))),
                        (Fraction(-sg * p.a(i, j), 2), 1, Anti(p.x(sg, i), p.x(sg, j))))
                rels.append(Relation(f"shift({i},{j},{_sign_tag(sg)})", "shift", (i, j, sg), e))
    for i in N:
        for j in N:
            for sg in (1, -1):
                e = lin((1, 0, Br(p.ht(i), p.x(sg, j))), (-sg * p.a(i, j), 0, p.x(sg, j, 1)))
                rels.append(Relation(f"tilde({i},{j},{_sign_tag(sg)})", "tilde", (i, j, sg), e))
    for i in N:
        for j in N:
            if i == j:
                continue
            for sg in (1, -1):
                e = _ad_power(p.x(sg, i), p.x(sg, j), 1 + abs(p.a(i, j)))
                rels.append(Relation(f"serre({i},{j},{_sign_tag(sg)})", "serre", (i, j, sg), e))
    for i in N:
        if not p.parity[i]:
            continue
        for sg in (1, -1):
            rels.append(Relation(f"odd_square({i},{_sign_tag(sg)})", "odd_square", (i, sg),
                                 Br(p.x(sg, i), p.x(sg, i))))
        nb = _neighbours_in_chain(list(N), i, cyclic)
        if nb is not None:
            lo, hi = nb
            for sg in (1, -1):
                e = Br(Br(p.x(sg, lo), p.x(sg, i)), Br(p.x(sg, i), p.x(sg, hi)))
                rels.append(Relation(f"odd_quartic({i},{_sign_tag(sg)})", "odd_quartic", (i, sg), e))
    if p.with_d:
        rels.extend(_degree_relations(p, (0, 1)))
    return rels


def _degree_relations(p: Presentation, levels) -> list[Relation]:
    d = Sym(p.sym("d", 0))
    rels = []
    for i in p.nodes:
        for r in levels:
            rels.append(Relation(f"degree(h{i}_{r})", "degree", ("h", i, r), Br(d, p.h(i, r))))
            for sg in (1, -1):
                coeff = -sg if i == 0 else 0
                e = Br(d, p.x(sg, i, r)) if not coeff else lin((1, 0, Br(d, p.x(sg, i, r))), (coeff, 0, p.x(sg, i, r)))
                rels.append(Relation(f"degree(x{_sign_tag(sg)}{i}_{r})", "degree", ("x", i, r, sg), e))
    return rels


def _system_data(sys: SimpleRootSystem):
    cm = cartan_matrix(sys)
    nodes = tuple(sys.nodes)
    cartan = {(i, j): int(cm[i, j]) for i in nodes for j in nodes}
    parity = {i: sys.node_parity(i) for i in nodes}
    return nodes, cartan, parity


def _check_affine(sys: SimpleRootSystem):
    if sys.affine and (sys.m == sys.n or min(sys.m, sys.n) < 2):
        raise RootSystemError(
            f"affine presentations need m != n and m, n >= 2; got sl({sys.m}|{sys.n})")


def presentation_from_cartan(cartan: dict, parity: dict, nodes=None, cyclic: bool = False,
                             system: SimpleRootSystem | None = None,
                             with_d: bool = False) -> Presentation:
    """Minimalistic presentation for an explicit Cartan matrix (used for toy systems too)."""
    nodes = tuple(nodes if nodes is not None else sorted(parity))
    p = Presentation(nodes, dict(cartan), dict(parity), "minimalistic", 1,
                     _alphabet(nodes, parity, (0, 1), with_d, (1,)), (), (), system, with_d)
    defs = _tilde_definitions(p, (1,))
    p = replace(p, definitions=tuple(defs))
    return replace(p, relations=tuple(_minimalistic_relations(p, cyclic)))


def minimalistic(sys: SimpleRootSystem, with_d: bool = False) -> Presentation:
    """Generators of levels 0 and 1 with the finite list of relation families."""
    if with_d and not sys.affine:
        raise RootSystemError("the derivation d exists only for affine systems")
    _check_affine(sys)
    nodes, cartan, parity = _system_data(sys)
    return presentation_from_cartan(cartan, parity, nodes, cyclic=sys.affine, system=sys, with_d=with_d)


def _raising_partner(p: Presentation, i: int, cyclic: bool) -> int:
    pos = p.nodes.index(i)
    if cyclic or pos + 1 < len(p.nodes):
        return p.nodes[(pos + 1) % len(p.nodes)]
    return p.nodes[pos - 1]


def drinfeld(sys: SimpleRootSystem, R: int, with_d: bool = False) -> Presentation:
    """Generators of all levels up to ``R`` with the full relation families."""
    if R < 1:
        raise RootSystemError("the level bound of a Drinfeld presentation must be at least 1")
    if with_d and not sys.affine:
        raise RootSystemError("the derivation d exists only for affine systems")
    nodes, cartan, parity = _system_data(sys)
    cyclic = sys.affine
    levels = tuple(range(R + 1))
    tilde_levels = tuple(l for l in (1, 2) if l <= R)
    p = Presentation(nodes, cartan, parity, "drinfeld", R,
                     _alphabet(nodes, parity, levels, with_d, tilde_levels), (), (), sys, with_d)
    defs = _tilde_definitions(p, tilde_levels)
    for i in nodes:
        k = _raising_partner(p, i, cyclic)
        for r in range(1, R):
            for sg in (1, -1):
                e = lin((Fraction(sg, p.a(k, i)), 0, Br(p.ht(k), p.x(sg, i, r))))
                defs.append(Definition(p.sym("x_plus" if sg > 0 else "x_minus", i, r + 1), e, "raising"))
            defs.append(Definition(p.sym("h", i, r + 1), Br(p.x(1, i, r + 1), p.x(-1, i)), "raising"))
    p = replace(p, definitions=tuple(defs))

    rels: list[Relation] = []
    hs = [(i, r) for i in nodes for r in levels]
    for (i, r), (j, s) in itertools.combinations(hs, 2):
        rels.append(Relation(f"hh({i}_{r},{j}_{s})", "hh", (i, r, j, s), Br(p.h(i, r), p.h(j, s))))
    for i in nodes:
        for j in nodes:
            for s in levels:
                for sg in (1, -1):
                    e = lin((1, 0, Br(p.h(i), p.x(sg, j, s))), (-sg * p.a(i, j), 0, p.x(sg, j, s)))
                    rels.append(Relation(f"hx({i},{j}_{s},{_sign_tag(sg)})", "hx", (i, j, s, sg), e))
    for i in nodes:
        for j in nodes:
            for r in levels:
                for s in levels:
                    if r + s > R:
                        continue
                    e = Br(p.x(1, i, r), p.x(-1, j, s))
                    if i == j:
                        e = lin((1, 0, e), (-1, 0, p.h(i, r + s)))
                    rels.append(Relation(f"cross({i}_{r},{j}_{s})", "cross", (i, r, j, s), e))
    for i in nodes:
        for j in nodes:
            for r in range(R):
                for s in range(R):
                    for sg in (1, -1):
                        half = Fraction(-sg * p.a(i, j), 2)
                        e = lin((1, 0, Br(p.h(i, r + 1), p.x(sg, j, s))), (-1, 0, Br(p.h(i, r), p.x(sg, j, s + 1))),
                                (half, 1, Anti(p.h(i, r), p.x(sg, j, s))))
                        rels.append(Relation(f"hshift({i}_{r},{j}_{s},{_sign_tag(sg)})", "hshift",
                                             (i, r, j, s, sg), e))
                        e = lin((1, 0, Br(p.x(sg, i, r + 1), p.x(sg, j, s))),
                                (-1, 0, Br(p.x(sg, i, r), p.x(sg, j, s + 1))),
                                (half, 1, Anti(p.x(sg, i, r), p.x(sg, j, s))))
                        rels.append(Relation(f"xshift({i}_{r},{j}_{s},{_sign_tag(sg)})", "xshift",
                                             (i, r, j, s, sg), e))
    for i in nodes:
        for j in nodes:
            if i == j:
                continue
            n = 1 + abs(p.a(i, j))
            for rs in itertools.combinations_with_replacement(levels, n):
                for s in levels:
                    for sg in (1, -1):
                        terms = []
                        for perm in itertools.permutations(rs):
                            e = p.x(sg, j, s)
                            for r in reversed(perm):
                                e = Br(p.x(sg, i, r), e)
                            terms.append((1, 0, e))
                        tag = ",".join(map(str, rs))
                        rels.append(Relation(f"serre({i}_{tag},{j}_{s},{_sign_tag(sg)})", "serre",
                                             (i, rs, j, s, sg), lin(*terms)))
    for i in nodes:
        if not parity[i]:
            continue
        for r, s in itertools.combinations_with_replacement(levels, 2):
            for sg in (1, -1):
                rels.append(Relation(f"odd_square({i}_{r},{i}_{s},{_sign_tag(sg)})", "odd_square",
                                     (i, r, s, sg), Br(p.x(sg, i, r), p.x(sg, i, s))))
        nb = _neighbours_in_chain(list(nodes), i, cyclic)
        if nb is None:
            continue
        lo, hi = nb
        for r in levels:
            for s in levels:
                for sg in (1, -1):
                    e = Br(Br(p.x(sg, lo, r), p.x(sg, i)), Br(p.x(sg, i), p.x(sg, hi, s)))
                    rels.append(Relation(f"odd_quartic({i};{r},0,0,{s},{_sign_tag(sg)})", "odd_quartic",
                                         (i, r, s, sg), e))
    if with_d:
        rels.extend(_degree_relations(p, levels))
    return replace(p, relations=tuple(rels))


# -- expression parser --------------------------------------------------------

_TOKEN = re.compile(r"\s*(ht\d+_\d+|x[+-]\d+_\d+|h\d+_\d+|hbar|d|\d+/\d+|\d+|[\[\]{}(),+\-*^])")


class _Parser:
    """Grammar: sums of products of brackets [a,b], anticommutators {a,b},
    symbols (x+1_0, x-2_1, h1_0, ht1_1, d), hbar and rational numbers."""

    def __init__(self, pres: Presentation, text: str):
        self.pres = pres
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ValueError(f"cannot parse {text[pos:]!r}")
            self.tokens.append(m.group(1))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, want=None):
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise ValueError(f"expected {want!r}, found {tok!r}")
        self.i += 1
        return tok

    def parse(self):
        e = self.sum()
        if self.peek() is not None:
            raise ValueError(f"unexpected token {self.peek()!r}")
        return e

    def sum(self):
        entries = []
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
        entries.append(self.product(sign))
        while self.peek() in ("+", "-"):
            sign = -1 if self.take() == "-" else 1
            entries.append(self.product(sign))
        return Lin(tuple(entries)) if len(entries) > 1 or entries[0][:2] != (1, 0) else entries[0][2]

    def product(self, sign):
        coeff, hb, factors = Fraction(sign), 0, []
        while True:
            tok = self.peek()
            if tok is None or tok in ("+", "-", ",", "]", "}", ")"):
                break
            if tok == "*":
                self.take()
                continue
            if re.fullmatch(r"\d+(/\d+)?", tok):
                coeff *= Fraction(self.take())
            elif tok == "hbar":
                self.take()
                power = 1
                if self.peek() == "^":
                    self.take()
                    power = int(self.take())
                hb += power
            else:
                factors.append(self.atom())
        body = factors[0] if len(factors) == 1 else Prod(tuple(factors))
        return (coeff, hb, body)

    def atom(self):
        tok = self.take()
        if tok == "[":
            a = self.sum()
            self.take(",")
            b = self.sum()
            self.take("]")
            return Br(a, b)
        if tok == "{":
            a = self.sum()
            self.take(",")
            b = self.sum()
            self.take("}")
            return Anti(a, b)
        if tok == "(":
            a = self.sum()
            self.take(")")
            return a
        if tok == "d":
            return Sym(self.pres.sym("d", 0))
        m = re.fullmatch(r"(ht|x\+|x-|h)(\d+)_(\d+)", tok)
        if not m:
            raise ValueError(f"unexpected token {tok!r}")
        kind = {"ht": "h_tilde", "x+": "x_plus", "x-": "x_minus", "h": "h"}[m.group(1)]
        s = self.pres.sym(kind, int(m.group(2)), int(m.group(3)))
        if s not in self.pres.alphabet:
            raise ValueError(f"symbol {tok} is outside the alphabet")
        return Sym(s)


# -- generator maps -----------------------------------------------------------

@dataclass(frozen=True)
class GeneratorMap:
    """Images of the source symbols as signed expressions over the target alphabet.

    ``images[symbol] = (sign_name or None, expression)``.
    """

    source: Presentation
    target: Presentation
    images: dict
    node: int | None = None
    variant: str = "corrected"
    sign_names: tuple[str, ...] = ()
    guess: tuple[int, ...] = ()
    signs: tuple[int, ...] | None = None
    status: str = "unresolved"
    notes: tuple[str, ...] = ()

    @property
    def map_id(self) -> str:
        sys = self.target.system
        base = sys.parity_word + ("^" if sys.affine else "") if sys is not None else "toy"
        if self.node is None:
            return f"id[{base}]"
        return f"T{self.node}[{base}]" + ("" if self.variant == "corrected" else f"/{self.variant}")

    def sign_values(self, signs=None) -> dict[str, int]:
        signs = self.signs if signs is None else signs
        if signs is None:
            raise ValueError("generator map has no sign values; resolve it first")
        return dict(zip(self.sign_names, signs))

    def image_elements(self, signs=None) -> dict:
        values = self.sign_values(signs) if self.sign_names else {}
        out = {}
        for s, (name, expr) in self.images.items():
            el = expand(expr)
            out[s] = el if name is None else el.scale(values[name])
        return out

    def with_signs(self, signs, status: str = "resolved") -> "GeneratorMap":
        return replace(self, signs=tuple(signs), status=status)

    def flip(self, name: str) -> "GeneratorMap":
        values = self.sign_values()
        values[name] = -values[name]
        return replace(self, signs=tuple(values[n] for n in self.sign_names), status="flipped")

    def describe(self) -> dict[str, str]:
        return {str(s): (f"{n}*" if n else "") + "(" + render(e) + ")" for s, (n, e) in self.images.items()}

    def to_json(self) -> dict:
        return {
            "map_id": self.map_id,
            "node": self.node,
            "variant": self.variant,
            "status": self.status,
            "signs": dict(zip(self.sign_names, self.signs)) if self.signs is not None else None,
            "images": self.describe(),
        }


def identity_map(pres: Presentation) -> GeneratorMap:
    images = {s: (None, Sym(s)) for s in pres.alphabet}
    return GeneratorMap(pres, pres, images, None, "identity", (), (), (), "resolved")


def quantum_reflection(sys: SimpleRootSystem, i: int, variant: str = "corrected") -> GeneratorMap:
    """Quantum reflection at node ``i``.

    Source: presentation of the reflected system; target: presentation of
    ``sys``, where images live and reductions happen.  Level-0 images follow
    the classical reflection map; level-1 images raise the reflected node
    (``x_i,1``) or the neighbour (``x_j,1``).  Variant "literal" drops the
    hbar correction of the reflected node's level-1 image at odd nodes.
    """
    if variant not in ("corrected", "literal"):
        raise ValueError(f"unknown variant {variant!r}")
    sys.check_node(i)
    beta = reflect_system(sys, i)
    target = minimalistic(sys)
    source = minimalistic(beta)
    odd = sys.node_parity(i) == 1
    classical = classical_reflection(sys, i)
    names = list(classical.sign_names)
    guess = list(classical.guess)
    T, S = target, source
    half = Fraction(1, 2)
    images: dict = {}
    for j in beta.nodes:
        a_ij = T.a(i, j)
        if j == i:
            for sg, kind in ((1, "x_plus"), (-1, "x_minus")):
                tag = _sign_tag(sg)
                images[S.sym(kind, j, 0)] = (f"c{tag}{j}", T.x(-sg, i))
                lvl1 = T.x(-sg, i, 1)
                if not (odd and variant == "literal"):
                    lvl1 = lin((1, 0, lvl1), (-half, 1, Anti(T.h(i), T.x(-sg, i))))
                images[S.sym(kind, j, 1)] = (f"c{tag}{j}@1", lvl1)
            images[S.sym("h", j, 0)] = (None, lin((-1, 0, T.h(i))))
            ht = lin((-1, 0, T.ht(i)), (Fraction(-T.a(i, i), 2), 1, Anti(T.x(1, i), T.x(-1, i))))
            names += [f"c+{j}@1", f"c-{j}@1"]
        elif a_ij != 0:
            for sg, kind in ((1, "x_plus"), (-1, "x_minus")):
                tag = _sign_tag(sg)
                for r in (0, 1):
                    pair = (T.x(sg, j, r), T.x(sg, i)) if odd else (T.x(sg, i), T.x(sg, j, r))
                    name = f"s{tag}{j}" + ("@1" if r else "")
                    images[S.sym(kind, j, r)] = (name, lin((sg, 0, Br(*pair))))
            images[S.sym("h", j, 0)] = (None, lin((1, 0, T.h(j)), (1, 0, T.h(i))))
            ht = lin((1, 0, T.ht(j)), (1, 0, T.ht(i)), (Fraction(-a_ij, 2), 1, Anti(T.x(1, i), T.x(-1, i))))
            names += [f"s+{j}@1", f"s-{j}@1"]
        else:
            for kind in ("x_plus", "x_minus", "h"):
                for r in (0, 1):
                    images[S.sym(kind, j, r)] = (None, Sym(T.sym(kind, j, r)))
            images[S.sym("h_tilde", j, 1)] = (None, T.ht(j))
            continue
        images[S.sym("h_tilde", j, 1)] = (None, ht)
        h0 = images[S.sym("h", j, 0)][1]
        images[S.sym("h", j, 1)] = (None, lin((1, 0, ht), (half, 1, Prod((h0, h0)))))
    level1 = names[len(classical.sign_names):]
    guess += [0] * len(level1)
    return GeneratorMap(source, target, images, i, variant, tuple(names), tuple(guess))


def _check_families(gmap, families, rs, signs, level=None):
    out = []
    for rel in gmap.source.relations:
        if rel.family not in families:
            continue
        if level is not None and _relation_level(rel) > level:
            continue
        out.append(verify_image(gmap, rel, rs, signs))
    return out


def _relation_level(rel: Relation) -> int:
    return max(sum(s.level for s in w) for (w, _) in rel.element.raw)


def resolve_signs(gmap: GeneratorMap, classical=None, degree_bound: int = 4,
                  level_bound: int = DEFAULT_LEVEL_BOUND) -> GeneratorMap:
    """Fix level-0 signs from the classical map, then search the level-1 signs.

    ``classical`` is a resolved classical assignment (or a plain sign tuple
    in its parameter order); by default it is computed.  The level-1 signs
    are searched nearest-first from the level-0 values until the images of
    the cross and h-x relation families reduce to zero.
    """
    if gmap.node is None:
        return replace(gmap, signs=(), status="resolved")
    sys = gmap.target.system
    if classical is None:
        classical, report = resolve_and_verify(classical_reflection(sys, gmap.node))
        if not report.ok:
            return replace(gmap, status="failed", notes=("classical resolution failed",))
    level0 = tuple(classical.signs) if hasattr(classical, "signs") else tuple(classical)
    n0 = len(level0)
    rs = complete(rules_from(gmap.target, degree_bound, level_bound))
    names0 = dict(zip(gmap.sign_names[:n0], level0))
    guess1 = tuple(names0[n.split("@")[0]] for n in gmap.sign_names[n0:])
    witnesses: list = []
    first = level0 + guess1
    bad = [o for o in _check_families(gmap, ("cross", "hx"), rs, first, level=0) if not o.verified]
    if bad:
        notes = tuple(f"{o.relation_id}: residual {o.residual}" for o in bad[:4])
        return replace(gmap, signs=first, status="failed", notes=notes)
    for cand in sign_candidates(guess1):
        signs = level0 + cand
        outcomes = _check_families(gmap, ("cross", "cross1", "hx"), rs, signs)
        bad = [o for o in outcomes if not o.verified]
        if not bad:
            return replace(gmap, signs=signs, status="resolved")
        if not witnesses:
            witnesses = [f"{o.relation_id}: residual {o.residual}" for o in bad[:4]]
    return replace(gmap, signs=first, status="failed", notes=tuple(witnesses))
