import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from superyang.presentations import minimalistic, presentation_from_cartan, quantum_reflection
from superyang.rewrite import (
    Anti, Br, FreeElement, Prod, RewriteSystem, Sym, bracket, complete, expand, lin, reduce,
    rules_from, substitute, verify_image, word_key,
)
from superyang.rootspace import build_system

SL21 = minimalistic(build_system("001"))


@pytest.fixture(scope="module")
def rs21():
    return complete(rules_from(SL21, 4, 1))


def el(expr):
    return expand(expr)


def test_expand_examples():
    x = SL21.x(1, 2)      # odd
    h = SL21.h(1)
    xm = SL21.x(-1, 2)
    assert el(Br(x, x)) == el(Prod((x, x))).scale(2)
    assert el(Br(h, x)) == el(Prod((h, x))) - el(Prod((x, h)))
    assert el(Anti(x, xm)) == el(Prod((x, xm))) - el(Prod((xm, x)))


def test_expand_is_idempotent_and_bilinear():
    a, b, c = SL21.x(1, 1), SL21.x(1, 2), SL21.x(-1, 2, 1)
    e = el(Br(a, Br(b, c)))
    assert expand(e) == e
    d = SL21.h(1, 1)
    combo = el(Br(lin((2, 0, a), (Fraction(1, 3), 1, d)), c))
    assert combo == el(Br(a, c)).scale(2) + el(Br(d, c)).scale(Fraction(1, 3), 1)


def test_expand_rejects_foreign_symbols():
    other = minimalistic(build_system("00011"))
    with pytest.raises(ValueError, match="outside the alphabet"):
        expand(Br(other.x(1, 4), SL21.x(1, 1)), SL21.alphabet)


def test_term_ordering_is_deterministic():
    e = el(Br(SL21.x(1, 1), Br(SL21.x(1, 2), SL21.x(-1, 1))))
    keys = [word_key(w) for _, w in e.terms]
    assert keys == sorted(keys, reverse=True)
    assert str(e) == str(el(Br(SL21.x(1, 1), Br(SL21.x(1, 2), SL21.x(-1, 1)))))


def test_orientation_examples():
    rs = rules_from(SL21, 4, 1)
    xp, xm = SL21.sym("x_plus", 2, 0), SL21.sym("x_minus", 2, 0)
    rule = rs.pair_rules[(xp, xm)]
    # odd node: x+ x- -> -x- x+ + h
    assert rule.rhs == FreeElement({((xm, xp), 0): -1, ((SL21.sym("h", 2, 0),), 0): 1})
    xp1, xm1 = SL21.sym("x_plus", 1, 0), SL21.sym("x_minus", 1, 0)
    assert rs.pair_rules[(xp1, xm1)].rhs == FreeElement({((xm1, xp1), 0): 1, ((SL21.sym("h", 1, 0),), 0): 1})
    # the order puts h first, so x h is the oriented side of [h, x] = a x
    h1 = SL21.sym("h", 1, 0)
    x21 = SL21.sym("x_plus", 2, 1)
    hx = rs.pair_rules[(x21, h1)]
    assert hx.rhs == FreeElement({((h1, x21), 0): 1, ((x21,), 0): -SL21.a(1, 2)})
    nf, _ = rs.normal_form(FreeElement({((xp, xp), 0): 1}))
    assert nf.is_zero()


def test_rules_decrease_the_order():
    rs = rules_from(minimalistic(build_system("00011", True)), 6, 1)
    for rule in rs.rules:
        for (w, _) in rule.rhs.raw:
            assert word_key(w) < word_key(rule.lhs)
        rule.rhs.parity  # homogeneous
    assert not rs.excluded


def test_reduce_examples(rs21):
    x, xm, h = SL21.x(1, 1), SL21.x(-1, 1), SL21.h(1)
    assert reduce(el(lin((1, 0, Br(x, xm)), (-1, 0, h))), rs21).verified
    assert reduce(el(Br(SL21.h(1), SL21.h(2))), rs21).verified
    out = reduce(el(Br(SL21.h(1, 1), SL21.x(1, 2))), rs21)
    assert out.status == "inconclusive" and not out.residual.is_zero()


def test_bound_overflow_is_inconclusive():
    rs = rules_from(SL21, 3, 1)
    long = el(Prod((SL21.x(1, 1), SL21.x(1, 2), SL21.x(1, 1), SL21.x(1, 2))))
    out = reduce(long, rs)
    assert out.status == "inconclusive" and out.offending is not None
    assert "degree" in out.reason


def test_max_degree_env_cap(monkeypatch):
    monkeypatch.setenv("SUPERYANG_MAX_DEGREE", "4")
    with pytest.raises(ValueError, match="SUPERYANG_MAX_DEGREE"):
        RewriteSystem(SL21, 5, 1)
    RewriteSystem(SL21, 4, 1)


def test_complete_with_zero_bound_is_identity():
    rs = rules_from(SL21, 4, 1)
    before = (dict(rs.pair_rules), list(rs.same_sign), list(rs.completion_log))
    assert complete(rs, 0) is rs
    assert (rs.pair_rules, rs.same_sign, rs.completion_log) == before


def test_sl2_toy_completion_adds_nothing():
    toy = presentation_from_cartan({(1, 1): 2}, {1: 0})
    rs = rules_from(toy, 4, 1)
    rules, same = dict(rs.pair_rules), list(rs.same_sign)
    complete(rs, 4)
    assert rs.pair_rules == rules
    assert rs.same_sign == same
    assert not rs.check_only


def test_completion_derives_consequences_that_reduce_to_zero(rs21):
    derived = [(rid, FreeElement(e)) for rid, e in rs21.same_sign if rid.startswith("derived:")]
    assert derived
    for _, e in derived:
        assert rs21.normal_form(e)[0].is_zero()
    assert not rs21.check_only


def test_relations_of_own_presentation_reduce_to_zero(rs21):
    for rel in SL21.relations:
        assert reduce(rel.element, rs21).verified, rel.id


def random_element(rng, syms, length):
    word = tuple(rng.choice(syms) for _ in range(length))
    return FreeElement({(word, 0): 1})


def test_confluence_under_random_strategies(rs21):
    rng = random.Random(3)
    syms = [s for s in SL21.alphabet if s.kind != "h_tilde"]
    samples = [random_element(rng, syms, rng.randint(2, 4)) for _ in range(25)]
    samples = [s for s in samples if sum(x.level for (w, _) in s.raw for x in w) <= 1]
    for e in samples:
        want, _ = rs21.normal_form(e)
        for seed in range(200):
            got, _ = rs21.normal_form(e, random.Random(seed))
            assert got == want


def test_monotone_in_bounds():
    small = complete(rules_from(SL21, 4, 1))
    for bounds in ((5, 1), (4, 2)):
        big = complete(rules_from(SL21, *bounds))
        for rel in SL21.relations:
            if reduce(rel.element, small).verified:
                assert reduce(rel.element, big).verified, (rel.id, bounds)


# -- bracket identities, before any rules ------------------------------------------

letters = st.sampled_from([s for s in SL21.alphabet if s.kind != "h_tilde"])
monomials = st.lists(letters, min_size=1, max_size=2).map(
    lambda w: FreeElement({(tuple(w), 0): 1}))
homogeneous = st.builds(lambda a, c: a.scale(c), monomials, st.integers(-3, 3).filter(bool))


@settings(max_examples=100, deadline=None)
@given(homogeneous, homogeneous)
def test_graded_skew_symmetry(a, b):
    sign = (-1) ** (a.parity * b.parity)
    assert (bracket(a, b) + bracket(b, a).scale(sign)).is_zero()


@settings(max_examples=100, deadline=None)
@given(homogeneous, homogeneous, homogeneous)
def test_super_jacobi(a, b, c):
    sign = (-1) ** (a.parity * b.parity)
    lhs = bracket(a, bracket(b, c))
    rhs = bracket(bracket(a, b), c) + bracket(b, bracket(a, c)).scale(sign)
    assert (lhs - rhs).is_zero()


# -- substitution ------------------------------------------------------------------

AFF = build_system("00011", True)
T3 = quantum_reflection(AFF, 3)
ALL_PLUS = (1,) * len(T3.sign_names)
source_letters = st.sampled_from([s for s in T3.source.alphabet])
source_monomials = st.lists(source_letters, min_size=1, max_size=2).map(
    lambda w: FreeElement({(tuple(w), 0): 1}))


@settings(max_examples=100, deadline=None)
@given(source_monomials, source_monomials)
def test_substitution_is_a_homomorphism(a, b):
    lhs = substitute(T3, bracket(a, b), ALL_PLUS)
    rhs = bracket(substitute(T3, a, ALL_PLUS), substitute(T3, b, ALL_PLUS))
    assert lhs == rhs


def test_substitution_is_linear():
    s = T3.source
    a = FreeElement.symbol(s.sym("x_plus", 2, 1))
    b = FreeElement.symbol(s.sym("h", 3, 0))
    combo = a.scale(3) + b.scale(Fraction(1, 2), 1)
    assert substitute(T3, combo, ALL_PLUS) == (substitute(T3, a, ALL_PLUS).scale(3)
                                               + substitute(T3, b, ALL_PLUS).scale(Fraction(1, 2), 1))


def test_substitution_examples():
    s, t = T3.source, T3.target
    x = substitute(T3, FreeElement.symbol(s.sym("x_plus", 3, 0)), ALL_PLUS)
    assert x == FreeElement.symbol(t.sym("x_minus", 3, 0))
    h = substitute(T3, FreeElement.symbol(s.sym("h", 2, 0)), ALL_PLUS)
    assert h == el(lin((1, 0, t.h(2)), (1, 0, t.h(3))))


def test_certificate_json(rs21):
    from superyang.presentations import identity_map
    ident = identity_map(SL21)
    rel = SL21.relations[0]
    out = verify_image(ident, rel, rs21)
    data = out.to_json()
    assert data["status"] == "verified" and data["residual"] == []
    assert data["bounds"] == {"degree": 4, "level": 1}
    assert data["relation_id"] == rel.id and data["map_id"].startswith("id[")
    assert set(data) >= {"relation_id", "map_id", "status", "bounds", "trace", "residual"}


def test_free_element_arithmetic():
    a = FreeElement.symbol(SL21.sym("h", 1, 0))
    assert (a - a).is_zero()
    assert (a * FreeElement.scalar(2, 1)) == a.scale(2, 1)
    with pytest.raises(ValueError):
        FreeElement({((), -1): 1})
    mixed = a + FreeElement.symbol(SL21.sym("x_plus", 2, 0))
    with pytest.raises(ValueError, match="homogeneous"):
        mixed.parity
    assert str(FreeElement()) == "0"
    assert FreeElement.symbol(SL21.sym("x_plus", 2, 0)).scale(-1, 2).to_json() == [
        {"coeff": {"2": "-1"}, "word": ["x+2_0"]}]


def test_symbol_expands_to_itself():
    assert expand(Sym(SL21.sym("h", 1, 0))) == FreeElement.symbol(SL21.sym("h", 1, 0))
