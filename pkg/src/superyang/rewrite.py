"""Free superalgebra over Q[hbar] and a bounded straightening engine.

Elements are finite sums of words in generator symbols with coefficients in
Q[hbar].  Brackets are expanded into associative words.  Reduction brings a
word into the triangular shape ``h* x-* x+* d*`` with pair rules oriented from
the presentation, then reduces each same-sign block against an exact echelon
basis of the same-sign relation ideal in its (weight, length, level) component.

Anything that would need a generator outside the level bound, a word longer
than the degree bound, or a pair with no oriented rule stops the reduction and
the outcome is reported as inconclusive, never as false.
"""

from __future__ import annotations

import itertools
import os
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "FreeElement",
    "Sym",
    "Br",
    "Anti",
    "Lin",
    "Prod",
    "expand",
    "render",
    "bracket",
    "anticommutator",
    "Rule",
    "RewriteSystem",
    "BoundExceeded",
    "VerificationOutcome",
    "rules_from",
    "reduce",
    "complete",
    "substitute",
    "verify_image",
    "word_key",
    "DEFAULT_DEGREE_BOUND",
    "DEFAULT_LEVEL_BOUND",
]

DEFAULT_DEGREE_BOUND = 6
DEFAULT_LEVEL_BOUND = 1
STEP_CEILING = 2_000_000

KIND_RANK = {"h": 0, "x_minus": 1, "x_plus": 2, "d": 3, "h_tilde": 4}
KIND_CODE = {"x_plus": "x+", "x_minus": "x-", "h": "h", "h_tilde": "ht", "d": "d"}


def symbol_str(s) -> str:
    if s.kind == "d":
        return "d"
    return f"{KIND_CODE[s.kind]}{s.node}_{s.level}"


def letter_key(s) -> tuple:
    return (KIND_RANK[s.kind], s.node, s.level)


def word_key(word) -> tuple:
    """Graded lexicographic key: longer words are greater, then letter by letter."""
    return (len(word), tuple(letter_key(s) for s in word))


def _term_key(term) -> tuple:
    word, k = term
    return (word_key(word), -k)


def word_parity(word) -> int:
    return sum(s.parity for s in word) % 2


def _clean(d: dict) -> dict:
    return {key: v for key, v in d.items() if v}


class FreeElement:
    """Immutable sum of (coefficient in Q, hbar power, word) terms."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        data: dict = {}
        for (word, k), v in (terms or {}).items():
            if k < 0:
                raise ValueError("negative hbar power")
            key = (tuple(word), int(k))
            data[key] = data.get(key, 0) + Fraction(v)
        self._terms = _clean(data)
        self._hash = None

    @classmethod
    def symbol(cls, s) -> "FreeElement":
        return cls({((s,), 0): 1})

    @classmethod
    def scalar(cls, c=1, hbar: int = 0) -> "FreeElement":
        return cls({((), hbar): c})

    @classmethod
    def zero(cls) -> "FreeElement":
        return cls()

    @property
    def raw(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: _term_key(kv[0]), reverse=True)

    @property
    def terms(self) -> list[tuple[dict[int, Fraction], tuple]]:
        """(hbar polynomial as {power: coeff}, word) pairs, greatest word first."""
        grouped: dict = {}
        for (word, k), v in self._terms.items():
            grouped.setdefault(word, {})[k] = v
        return [(dict(sorted(grouped[w].items())), w)
                for w in sorted(grouped, key=word_key, reverse=True)]

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def parity(self) -> int | None:
        ps = {word_parity(w) for (w, _) in self._terms}
        if len(ps) > 1:
            raise ValueError(f"element is not parity-homogeneous: {self}")
        return ps.pop() if ps else None

    def max_length(self) -> int:
        return max((len(w) for (w, _) in self._terms), default=0)

    def leading(self):
        """Greatest (word, hbar power) term under the graded order."""
        return max(self._terms, key=_term_key)

    def __add__(self, other: "FreeElement") -> "FreeElement":
        out = dict(self._terms)
        for key, v in other._terms.items():
            out[key] = out.get(key, 0) + v
        return FreeElement(out)

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        return self + (-other)

    def __neg__(self) -> "FreeElement":
        return FreeElement({key: -v for key, v in self._terms.items()})

    def scale(self, c, hbar: int = 0) -> "FreeElement":
        c = Fraction(c)
        return FreeElement({(w, k + hbar): c * v for (w, k), v in self._terms.items()})

    def __rmul__(self, c) -> "FreeElement":
        return self.scale(c)

    def __mul__(self, other) -> "FreeElement":
        if not isinstance(other, FreeElement):
            return self.scale(other)
        out: dict = {}
        for (w1, k1), v1 in self._terms.items():
            for (w2, k2), v2 in other._terms.items():
                key = (w1 + w2, k1 + k2)
                out[key] = out.get(key, 0) + v1 * v2
        return FreeElement(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeElement) and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (word, k), v in self.items():
            coeff = "" if v in (1, -1) and (word or k) else str(abs(v))
            hb = "" if k == 0 else ("hbar" if k == 1 else f"hbar^{k}")
            body = " ".join(x for x in [coeff, hb, " ".join(map(symbol_str, word))] if x)
            parts.append(("- " if v < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[1:]

    __repr__ = __str__

    def to_json(self) -> list[dict]:
        return [{"coeff": {str(k): str(v) for k, v in poly.items()},
                 "word": [symbol_str(s) for s in word]} for poly, word in self.terms]


def bracket(a: FreeElement, b: FreeElement) -> FreeElement:
    """Graded commutator ab - (-1)^{p(a)p(b)} ba."""
    if a.is_zero() or b.is_zero():
        return FreeElement()
    s = -1 if a.parity * b.parity else 1
    return a * b - (b * a).scale(s)


def anticommutator(a: FreeElement, b: FreeElement) -> FreeElement:
    """ab + (-1)^{p(a)p(b)} ba."""
    if a.is_zero() or b.is_zero():
        return FreeElement()
    s = -1 if a.parity * b.parity else 1
    return a * b + (b * a).scale(s)


# -- bracket expressions ------------------------------------------------------

@dataclass(frozen=True)
class Sym:
    symbol: object


@dataclass(frozen=True)
class Br:
    left: object
    right: object


@dataclass(frozen=True)
class Anti:
    left: object
    right: object


@dataclass(frozen=True)
class Lin:
    """Linear combination; entries are (rational coefficient, hbar power, expression)."""

    entries: tuple


@dataclass(frozen=True)
class Prod:
    factors: tuple


def lin(*entries) -> Lin:
    return Lin(tuple((Fraction(c), k, e) for c, k, e in entries))


def expand(expr, alphabet: Iterable | None = None) -> FreeElement:
    """Fully associative expansion of a bracket expression."""
    allowed = set(alphabet) if alphabet is not None else None
    cache: dict = {}

    def go(e) -> FreeElement:
        if isinstance(e, FreeElement):
            if allowed is not None:
                for (w, _) in e.raw:
                    for s in w:
                        if s not in allowed:
                            raise ValueError(f"symbol {symbol_str(s)} is outside the alphabet")
            return e
        if e in cache:
            return cache[e]
        if isinstance(e, Sym):
            if allowed is not None and e.symbol not in allowed:
                raise ValueError(f"symbol {symbol_str(e.symbol)} is outside the alphabet")
            out = FreeElement.symbol(e.symbol)
        elif isinstance(e, Br):
            out = bracket(go(e.left), go(e.right))
        elif isinstance(e, Anti):
            out = anticommutator(go(e.left), go(e.right))
        elif isinstance(e, Lin):
            out = FreeElement()
            for c, k, sub in e.entries:
                out = out + go(sub).scale(c, k)
        elif isinstance(e, Prod):
            out = FreeElement.scalar(1)
            for f in e.factors:
                out = out * go(f)
        else:
            raise TypeError(f"not a bracket expression: {e!r}")
        cache[e] = out
        return out

    return go(expr)


def render(expr) -> str:
    if isinstance(expr, FreeElement):
        return str(expr)
    if isinstance(expr, Sym):
        return symbol_str(expr.symbol)
    if isinstance(expr, Br):
        return f"[{render(expr.left)}, {render(expr.right)}]"
    if isinstance(expr, Anti):
        return f"{{{render(expr.left)}, {render(expr.right)}}}"
    if isinstance(expr, Prod):
        return " ".join(render(f) for f in expr.factors) or "1"
    parts = []
    for c, k, e in expr.entries:
        hb = "" if k == 0 else ("hbar " if k == 1 else f"hbar^{k} ")
        mag = "" if abs(c) == 1 else f"{abs(c)} "
        parts.append(("- " if c < 0 else "+ ") + mag + hb + render(e))
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[1:]


def summands(expr) -> list:
    """Top-level summands of an expression (the expression itself if not a sum)."""
    if isinstance(expr, Lin):
        return [lin((c, k, e)) for c, k, e in expr.entries]
    return [expr]


# -- rewrite system -----------------------------------------------------------

class BoundExceeded(Exception):
    def __init__(self, word, reason: str):
        super().__init__(f"{reason}: {' '.join(map(symbol_str, word))}")
        self.word = word
        self.reason = reason


@dataclass(frozen=True)
class Rule:
    id: str
    family: str
    lhs: tuple
    rhs: FreeElement


def _out_of_order(a, b) -> bool:
    ra, rb = KIND_RANK[a.kind], KIND_RANK[b.kind]
    if ra != rb:
        return ra > rb
    if a.kind in ("h", "d"):
        return letter_key(a) > letter_key(b)
    return False


def _sign_of(s) -> int:
    return 1 if s.kind == "x_plus" else -1


def _multiset_perms(items: list):
    counts = Counter(items)
    keys = sorted(counts)
    n = len(items)

    def rec(prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                prefix.append(k)
                yield from rec(prefix)
                prefix.pop()
                counts[k] += 1
    yield from rec([])


class _Echelon:
    """Semi-echelon basis of a same-sign component; rows keyed by (word, k)."""

    def __init__(self):
        self.pivots: dict = {}

    def reduce(self, row: dict) -> dict:
        row = dict(row)
        out = {}
        while row:
            lead = max(row, key=_term_key)
            piv = self.pivots.get(lead)
            if piv is None:
                out[lead] = row.pop(lead)
                continue
            f = row[lead]
            for c, v in piv.items():
                x = row.get(c, 0) - f * v
                if x:
                    row[c] = x
                else:
                    row.pop(c, None)
        return out

    def insert(self, row: dict) -> bool:
        red = self.reduce(row)
        if not red:
            return False
        lead = max(red, key=_term_key)
        f = red[lead]
        self.pivots[lead] = {c: v / f for c, v in red.items()}
        return True


def _signature(el: dict):
    """(sign, weight, length, total level) of a homogeneous same-sign element."""
    (word, k) = next(iter(el))
    sign = _sign_of(word[0])
    weight = tuple(sorted(Counter(s.node for s in word).items()))
    return sign, weight, len(word), k + sum(s.level for s in word)


class RewriteSystem:
    """Pair rules, same-sign generating relations and the reduction machinery."""

    def __init__(self, presentation, degree_bound: int = DEFAULT_DEGREE_BOUND,
                 level_bound: int = DEFAULT_LEVEL_BOUND):
        cap = os.environ.get("SUPERYANG_MAX_DEGREE")
        if cap is not None and degree_bound > int(cap):
            raise ValueError(f"degree bound {degree_bound} exceeds SUPERYANG_MAX_DEGREE={cap}")
        if degree_bound < 0 or level_bound < 0:
            raise ValueError("bounds must be nonnegative")
        self.presentation = presentation
        self.degree_bound = degree_bound
        self.level_bound = level_bound
        self.pair_rules: dict = {}
        self.definitions: dict = {}
        self.same_sign: list = []          # (id, element dict)
        self.completion_log: list = []
        self.excluded: list = []
        self.check_only: list = []
        self.steps = 0
        self._memo: dict = {}
        self._partial_memo: dict = {}
        self._components: dict = {}
        self._block_memo: dict = {}

    # -- bookkeeping
    @property
    def rules(self) -> list[Rule]:
        return list(self.pair_rules.values())

    def _invalidate(self):
        self._memo.clear()
        self._components.clear()
        self._block_memo.clear()

    def families(self) -> Counter:
        out = Counter(r.family for r in self.pair_rules.values())
        out.update(f for f, _ in ((i.split(":")[0], e) for i, e in self.same_sign))
        return out

    def _sym(self, kind, node, level):
        return self.presentation.sym(kind, node, level)

    # -- reduction of single words
    def _check_word(self, word):
        if len(word) > self.degree_bound:
            raise BoundExceeded(word, "degree bound exceeded")
        for s in word:
            if s.level > self.level_bound and s.kind != "d":
                raise BoundExceeded(word, "level bound exceeded")

    def _apply(self, word, p, width, rhs: dict, trace: dict, rid: str, nf, *args) -> dict:
        trace[rid] = None
        out: dict = {}
        pre, post = word[:p], word[p + width:]
        for (w2, k2), c in rhs.items():
            sub, sub_trace = nf(pre + w2 + post, *args)
            trace.update(sub_trace)
            for (w3, k3), v in sub.items():
                key = (w3, k2 + k3)
                out[key] = out.get(key, 0) + c * v
        return _clean(out)

    def _nf_word(self, word, rng=None, partial=False):
        """Normal form of a single word: ({(word, hbar power): coeff}, trace dict)."""
        memo = self._partial_memo if partial else self._memo
        if rng is None and word in memo:
            return memo[word]
        self.steps += 1
        if self.steps > STEP_CEILING:
            raise RuntimeError("reduction step ceiling hit")
        trace: dict = {}
        for p, s in enumerate(word):
            if s.kind == "h_tilde":
                rid, rhs = self.definitions[s]
                res = self._apply(word, p, 1, rhs, trace, rid, self._nf_word, rng, partial)
                break
        else:
            if not partial:
                self._check_word(word)
            spots = [p for p in range(len(word) - 1) if _out_of_order(word[p], word[p + 1])]
            if partial:
                spots = [p for p in spots if (word[p], word[p + 1]) in self.pair_rules]
            if spots:
                p = rng.choice(spots) if rng is not None else spots[0]
                rule = self.pair_rules.get((word[p], word[p + 1]))
                if rule is None:
                    raise BoundExceeded(word[p:p + 2], "no oriented rule for pair")
                res = self._apply(word, p, 2, rule.rhs.raw, trace, rule.id, self._nf_word, rng, partial)
            elif partial:
                res = {(word, 0): Fraction(1)}
            else:
                res = self._triangular_nf(word, trace)
        if rng is None:
            memo[word] = (res, trace)
        return res, trace

    def _triangular_nf(self, word, trace: dict) -> dict:
        first = [n for n, s in enumerate(word) if s.kind in ("x_minus", "x_plus", "d")]
        a = first[0] if first else len(word)
        b = a
        while b < len(word) and word[b].kind == "x_minus":
            b += 1
        c = b
        while c < len(word) and word[c].kind == "x_plus":
            c += 1
        head, minus, plus, tail = word[:a], word[a:b], word[b:c], word[c:]
        nm = self._block_nf(minus, trace)
        np_ = self._block_nf(plus, trace)
        out: dict = {}
        for (wm, km), vm in nm.items():
            for (wp, kp), vp in np_.items():
                key = (head + wm + wp + tail, km + kp)
                out[key] = out.get(key, 0) + vm * vp
        return _clean(out)

    # -- same-sign blocks
    def _block_nf(self, block, trace: dict) -> dict:
        if len(block) < 2:
            return {(block, 0): Fraction(1)}
        if block in self._block_memo:
            res, rid = self._block_memo[block]
            if rid:
                trace[rid] = None
            return res
        sign = _sign_of(block[0])
        weight = tuple(sorted(Counter(s.node for s in block).items()))
        level = sum(s.level for s in block)
        ech = self._component(sign, weight, len(block), level)
        res = ech.reduce({(block, 0): Fraction(1)})
        rid = None
        if res != {(block, 0): Fraction(1)}:
            rid = f"block{'+' if sign > 0 else '-'}:{' '.join(map(symbol_str, block))}"
            trace[rid] = None
        self._block_memo[block] = (res, rid)
        return res

    def _component(self, sign, weight, length, level) -> _Echelon:
        key = (sign, weight, length, level)
        if key in self._components:
            return self._components[key]
        kind = "x_plus" if sign > 0 else "x_minus"
        want = Counter(dict(weight))
        ech = _Echelon()
        rows = []
        for _, g in self.same_sign:
            gs, gw, gl, glev = _signature(g)
            if gs != sign or gl > length or glev > level:
                continue
            rest = want.copy()
            rest.subtract(Counter(dict(gw)))
            if any(v < 0 for v in rest.values()):
                continue
            filler_nodes = sorted(rest.elements())
            room = level - glev
            for nodes in _multiset_perms(filler_nodes):
                for levels in itertools.product(range(min(room, self.level_bound) + 1), repeat=len(nodes)):
                    spent = sum(levels)
                    if spent > room:
                        continue
                    filler = tuple(self._sym(kind, n, r) for n, r in zip(nodes, levels))
                    k = room - spent
                    for p in range(len(filler) + 1):
                        u, v = filler[:p], filler[p:]
                        rows.append({(u + w + v, kk + k): c for (w, kk), c in g.items()})
        rows.sort(key=lambda r: max(map(_term_key, r)))
        for r in rows:
            ech.insert(r)
        self._components[key] = ech
        return ech

    # -- public reduction
    def normal_form(self, e: FreeElement, rng=None) -> tuple[FreeElement, list[str]]:
        out: dict = {}
        trace: dict = {}
        for (word, k), c in e.raw.items():
            res, tr = self._nf_word(word, rng)
            trace.update(tr)
            for (w2, k2), v in res.items():
                key = (w2, k + k2)
                out[key] = out.get(key, 0) + c * v
        return FreeElement(out), list(trace)

    def partial_reduce(self, e: FreeElement) -> FreeElement:
        """Apply pair and definition rules where available, leave everything else."""
        out: dict = {}
        for (word, k), c in e.raw.items():
            res, _ = self._nf_word(word, partial=True)
            for (w2, k2), v in res.items():
                key = (w2, k + k2)
                out[key] = out.get(key, 0) + c * v
        return FreeElement(out)

    # -- orientation
    def orient(self, rid: str, family: str, element: FreeElement) -> str:
        """Reduce by existing pair rules, then orient by the leading word."""
        el = self.partial_reduce(element)
        if el.is_zero():
            self.completion_log.append((rid, "redundant"))
            return "redundant"
        (lead, k) = el.leading()
        kinds = {s.kind for s in lead}
        if kinds <= {"x_plus"} or kinds <= {"x_minus"}:
            self.same_sign.append((f"{family}:{rid}", el.raw))
            self._invalidate()
            return "same-sign"
        if len(lead) == 2 and k == 0 and _out_of_order(*lead):
            c = el.raw[(lead, 0)]
            rhs = (el - FreeElement({(lead, 0): c})).scale(-1 / c)
            if (lead[0], lead[1]) in self.pair_rules:
                self.check_only.append((rid, el))
                return "check-only"
            self.pair_rules[(lead[0], lead[1])] = Rule(f"{family}:{' '.join(map(symbol_str, lead))}",
                                                       family, lead, rhs)
            self._partial_memo.clear()
            self._invalidate()
            return "rule"
        self.excluded.append((rid, el))
        return "excluded"

    def to_json(self) -> dict:
        return {
            "degree_bound": self.degree_bound,
            "level_bound": self.level_bound,
            "rules": [{"id": r.id, "family": r.family, "lhs": [symbol_str(s) for s in r.lhs],
                       "rhs": r.rhs.to_json()} for r in sorted(self.pair_rules.values(), key=lambda r: r.id)],
            "same_sign": [rid for rid, _ in self.same_sign],
            "completion_log": [list(map(str, entry)) for entry in self.completion_log],
            "excluded": [rid for rid, _ in self.excluded],
        }


FAMILY_ORDER = ["hh", "hx", "cross", "cross1", "degree", "tilde", "odd_square",
                "serre", "odd_quartic", "shift"]


def rules_from(pres, degree_bound: int = DEFAULT_DEGREE_BOUND,
               level_bound: int = DEFAULT_LEVEL_BOUND) -> RewriteSystem:
    """Orient the relations of a minimalistic presentation into a rewrite system."""
    rs = RewriteSystem(pres, degree_bound, level_bound)
    for d in pres.definitions:
        rs.definitions[d.symbol] = (f"def:{symbol_str(d.symbol)}", expand(d.expr).raw)
    rank = {f: n for n, f in enumerate(FAMILY_ORDER)}
    for rel in sorted(pres.relations, key=lambda r: rank.get(r.family, len(rank))):
        rs.orient(rel.id, rel.family, rel.element)
    return rs


def reduce(e: FreeElement, rs: RewriteSystem, rng: random.Random | None = None) -> "VerificationOutcome":
    """Normal form of ``e``; inconclusive if a bound is hit on the way."""
    try:
        nf, trace = rs.normal_form(e, rng)
    except BoundExceeded as exc:
        return VerificationOutcome("inconclusive", e, [], _bounds(rs), offending=exc.word, reason=exc.reason)
    return VerificationOutcome("verified" if nf.is_zero() else "inconclusive", nf, trace, _bounds(rs))


def _bounds(rs: RewriteSystem) -> dict:
    return {"degree": rs.degree_bound, "level": rs.level_bound}


# -- completion ---------------------------------------------------------------

def _pure_same_sign(el: FreeElement) -> bool:
    for (w, _) in el.raw:
        kinds = {s.kind for s in w}
        if not w or not (kinds <= {"x_plus"} or kinds <= {"x_minus"}):
            return False
    return len({_sign_of(w[0]) for (w, _) in el.raw}) == 1


def complete(rs: RewriteSystem, degree_bound: int | None = None, max_rounds: int = 4) -> RewriteSystem:
    """Resolve overlaps of same-sign relation heads with adjacent letters.

    For a head u of a same-sign relation R and a letter a that straightens
    against it, the word u a (or a u) can be rewritten in two ways; their
    difference is the normal form of R a (or a R).  Nonzero same-sign
    differences are new relations and join the echelon; other nonzero
    differences are kept as check-only identities.  Overlaps between pair
    rules are resolved the same way.  Works in place and returns ``rs``.
    """
    bound = rs.degree_bound if degree_bound is None else degree_bound
    if bound <= 0:
        return rs
    pres = rs.presentation
    alphabet = [s for s in pres.alphabet if s.kind != "h_tilde" and s.level <= rs.level_bound]
    seen: set = set()
    for _ in range(max_rounds):
        added = 0
        for rid, el in list(rs.same_sign):
            if rid in seen:
                continue
            seen.add(rid)
            element = FreeElement(el)
            (lead, lk) = element.leading()
            _, _, length, level = _signature(el)
            if length + 1 > bound:
                continue
            for a in alphabet:
                if level + a.level > rs.level_bound:
                    continue
                for side in ("right", "left"):
                    if side == "right" and not _out_of_order(lead[-1], a):
                        continue
                    if side == "left" and not _out_of_order(a, lead[0]):
                        continue
                    letter = FreeElement.symbol(a)
                    probe = element * letter if side == "right" else letter * element
                    try:
                        nf, _ = rs.normal_form(probe)
                    except BoundExceeded:
                        rs.completion_log.append((rid, symbol_str(a), side, "beyond bounds"))
                        continue
                    if nf.is_zero():
                        continue
                    tag = f"overlap({rid};{symbol_str(a)};{side})"
                    if _pure_same_sign(nf):
                        rs.same_sign.append((f"derived:{tag}", nf.raw))
                        rs._invalidate()
                        rs.completion_log.append((tag, "appended"))
                        added += 1
                    else:
                        rs.check_only.append((tag, nf))
                        rs.completion_log.append((tag, "check-only"))
        if not added:
            break
    _resolve_pair_overlaps(rs, alphabet, bound)
    return rs


def _resolve_pair_overlaps(rs: RewriteSystem, alphabet, bound: int):
    if bound < 3:
        return
    rules = rs.pair_rules
    for (a, b), r1 in sorted(rules.items(), key=lambda kv: kv[1].id):
        for c in alphabet:
            r2 = rules.get((b, c))
            if r2 is None or a.level + b.level + c.level > rs.level_bound + 1:
                continue
            try:
                left, _ = rs.normal_form(r1.rhs * FreeElement.symbol(c))
                right, _ = rs.normal_form(FreeElement.symbol(a) * r2.rhs)
            except BoundExceeded:
                rs.completion_log.append((r1.id, r2.id, "beyond bounds"))
                continue
            diff = left - right
            if not diff.is_zero():
                tag = f"overlap({r1.id};{r2.id})"
                rs.check_only.append((tag, diff))
                rs.completion_log.append((tag, "check-only"))


# -- substitution and verification -------------------------------------------

def substitute(gmap, e: FreeElement, signs: tuple[int, ...] | None = None) -> FreeElement:
    """Replace every letter by its image under ``gmap`` and expand."""
    if signs is None and gmap.status != "resolved":
        raise ValueError(f"generator map is {gmap.status}; resolve its signs first")
    images = gmap.image_elements(signs)
    out = FreeElement()
    for (word, k), c in e.raw.items():
        term = FreeElement.scalar(c, k)
        for s in word:
            if s not in images:
                raise ValueError(f"symbol {symbol_str(s)} has no image")
            term = term * images[s]
        out = out + term
    return out


@dataclass
class VerificationOutcome:
    status: str
    residual: FreeElement
    trace: list
    bounds: dict
    relation_id: str = ""
    map_id: str = ""
    summands: list = field(default_factory=list)
    offending: tuple | None = None
    reason: str = ""

    @property
    def verified(self) -> bool:
        return self.status == "verified"

    def to_json(self) -> dict:
        out = {
            "relation_id": self.relation_id,
            "map_id": self.map_id,
            "status": self.status,
            "bounds": dict(self.bounds),
            "trace": list(self.trace),
            "residual": self.residual.to_json(),
        }
        if self.summands:
            out["summands"] = [{"summand": s, "normal_form": nf.to_json()} for s, nf in self.summands]
        if self.offending is not None:
            out["offending"] = [symbol_str(s) for s in self.offending]
            out["reason"] = self.reason
        return out


def verify_image(gmap, relation, rs: RewriteSystem, signs: tuple[int, ...] | None = None,
                 rng: random.Random | None = None) -> VerificationOutcome:
    """Reduce the image of a relation; verified iff the residual is exactly zero."""
    parts = []
    total = FreeElement()
    try:
        for part in summands(relation.expr):
            image = substitute(gmap, expand(part), signs)
            nf, _ = rs.normal_form(image, rng)
            parts.append((render(part), nf))
            total = total + image
        out = reduce(total, rs, rng)
    except BoundExceeded as exc:
        out = VerificationOutcome("inconclusive", FreeElement(), [], _bounds(rs),
                                  offending=exc.word, reason=exc.reason)
    out.relation_id = relation.id
    out.map_id = gmap.map_id
    out.summands = parts
    return out
