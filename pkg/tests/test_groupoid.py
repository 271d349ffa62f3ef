import itertools
from collections import deque
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from superyang.groupoid import (
    ReflectionWord, is_root, orbit, reflect_root, reflect_system, shortest_path,
)
from superyang.rootspace import RootSystemError, bilinear, build_system


def words(m, n):
    return ["".join(p) for p in sorted(set(itertools.permutations("0" * m + "1" * n)))]


def brute_bfs(word, affine=False):
    """Distances over plain strings; swaps of adjacent letters (cyclic when affine)."""
    size = len(word)
    pairs = [(k, k + 1) for k in range(size - 1)] + ([(size - 1, 0)] if affine else [])
    dist = {word: 0}
    queue = deque([word])
    while queue:
        w = queue.popleft()
        for a, b in pairs:
            s = list(w)
            s[a], s[b] = s[b], s[a]
            v = "".join(s)
            if v not in dist:
                dist[v] = dist[w] + 1
                queue.append(v)
    return dist


systems = st.builds(
    lambda m, n, affine, seed: build_system(words(m, n)[seed % comb(m + n, m)], affine),
    st.integers(1, 3), st.integers(1, 3), st.booleans(), st.integers(0, 1000),
).filter(lambda s: not (s.affine and s.size < 3))


def test_odd_reflection_examples():
    sys = build_system("00011")
    # sl(1|2): node 1 is odd and a1 + a2 is a root
    s = build_system("011")
    a1, a2 = s.simple_root(1), s.simple_root(2)
    assert s.node_parity(1) == 1
    assert reflect_root(s, 1, a1) == -a1
    assert reflect_root(s, 1, a2) == a1 + a2
    odd = sys.simple_root(3)
    assert reflect_root(sys, 3, sys.simple_root(2)) == sys.simple_root(2) + odd
    assert reflect_root(sys, 3, odd) == -odd
    far = sys.simple_root(1)
    assert bilinear(far, odd) == 0
    assert reflect_root(sys, 3, far) == far


def test_reflect_root_rejects_non_roots():
    sys = build_system("00011")
    with pytest.raises(RootSystemError):
        reflect_root(sys, 3, sys.simple_root(1) + sys.simple_root(1))


def test_even_reflection_formula():
    sys = build_system("00011")
    a1, a2 = sys.simple_root(1), sys.simple_root(2)
    assert reflect_root(sys, 1, a2) == a1 + a2
    assert reflect_root(sys, 1, a1) == -a1


def test_reflect_system_examples():
    assert reflect_system(build_system("00011"), 3).parity_word == "00101"
    even = reflect_system(build_system("00011"), 1)
    assert even.parity_word == "00011"
    assert even.labels()[:2] == ["e2", "e1"]


def test_affine_reflection_across_node_zero():
    sys = build_system("00011", True)
    assert reflect_system(sys, 0).parity_word == "10010"


@settings(max_examples=150, deadline=None)
@given(systems, st.data())
def test_reflection_is_an_involution(sys, data):
    i = data.draw(st.sampled_from(sys.nodes))
    assert reflect_system(reflect_system(sys, i), i) == sys
    back = reflect_system(sys, i)
    assert (back.m, back.n) == (sys.m, sys.n)


def test_reflected_roots_match_reflected_system():
    for size in range(2, 7):
        for m in range(1, size):
            for word in words(m, size - m):
                for affine in (False, True):
                    if affine and size < 3:
                        continue
                    sys = build_system(word, affine)
                    for i in sys.nodes:
                        target = reflect_system(sys, i)
                        for j in sys.nodes:
                            image = reflect_root(sys, i, sys.simple_root(j))
                            want = target.simple_root(j)
                            if j == i:
                                assert image.diff == want.diff or (-image).diff == want.diff
                            else:
                                assert image.diff == want.diff


def test_root_membership_matches_form_for_odd_nodes():
    for word in words(2, 3) + words(3, 2):
        sys = build_system(word)
        for i in sys.nodes:
            if not sys.node_parity(i):
                continue
            alpha = sys.simple_root(i)
            for j in sys.nodes:
                if j != i:
                    lam = sys.simple_root(j)
                    assert is_root(sys, lam + alpha) == (bilinear(lam, alpha) != 0)


@pytest.mark.parametrize("m,n", [(m, s - m) for s in range(2, 8) for m in range(1, s)])
def test_finite_orbit_is_all_words(m, n):
    graph = orbit(build_system("0" * m + "1" * n))
    assert sorted(graph.vertices) == words(m, n)
    assert len(graph.vertices) == comb(m + n, m)


def test_orbit_examples():
    assert len(orbit(build_system("00011")).vertices) == 10
    # the single odd reflection of sl(1|1) swaps the two weights
    assert orbit(build_system("01")).vertices == ("01", "10")
    aff = orbit(build_system("00011", True))
    assert set(aff.vertices) == set(brute_bfs("00011", affine=True))
    assert len(aff.vertices) == 10


def test_orbit_bound():
    with pytest.raises(RootSystemError, match="9"):
        orbit(build_system("0000011111"))


def test_edges_undirected_and_labelled():
    graph = orbit(build_system("00111"))
    for a, b, i, parity in graph.edges:
        assert a <= b
        differs = sum(x != y for x, y in zip(a, b))
        if parity == "odd":
            assert differs == 2 and sorted(a) == sorted(b)
        else:
            assert a == b
    for v in graph.vertices:
        for u in graph.neighbours(v):
            assert v in graph.neighbours(u)


def test_full_view_counts_weight_orderings():
    graph = orbit(build_system("0011"), view="full")
    # orderings of 2 epsilons and 2 deltas: 4! permutations
    assert len(graph.vertices) == 24


def test_necklace_view():
    graph = orbit(build_system("00011", True), view="necklace")
    assert set(graph.vertices) == {"00011", "00101"}


def test_dot_and_json():
    graph = orbit(build_system("0011"))
    assert graph.to_dot().startswith("graph groupoid {")
    data = graph.to_json()
    assert len(data["vertices"]) == 6 and all({"from", "to", "node", "parity"} <= set(e) for e in data["edges"])


def test_shortest_path_examples():
    a = build_system("00011")
    assert len(shortest_path(a, a)) == 0
    step = shortest_path(a, build_system("00101"))
    assert step.nodes == (3,) and step.parity_trace == ("odd",)
    far = shortest_path(a, build_system("01010"))
    assert len(far) == brute_bfs("00011")["01010"]
    assert far.end.parity_word == "01010"


def test_shortest_path_lengths_match_bfs():
    for word in words(3, 2):
        for target in words(3, 2):
            path = shortest_path(build_system(word), build_system(target))
            assert len(path) == brute_bfs(word)[target]
            assert path.end.parity_word == target


def test_shortest_path_is_lexicographically_smallest():
    a, b = build_system("00011"), build_system("11000")
    path = shortest_path(a, b)
    n = len(path)
    for seq in itertools.product(a.nodes, repeat=n):
        if ReflectionWord(a, seq).end.parity_word == "11000":
            assert path.nodes <= seq


def test_shortest_path_rejects_other_orbits():
    with pytest.raises(RootSystemError):
        shortest_path(build_system("0011"), build_system("00011"))


def test_reflection_word_json():
    w = ReflectionWord(build_system("00011"), (3, 2))
    data = w.to_json()
    assert data["start"] == "00011" and data["end"] == w.end.parity_word
    assert [s["node"] for s in data["steps"]] == [3, 2]
