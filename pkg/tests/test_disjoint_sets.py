from __future__ import annotations

import random

import pytest

from dyckreach.disjoint_sets import DisjointSets, inverse_ackermann
from dyckreach.errors import AlreadyPresent, NotDisjoint, UnknownElement

# Documented amortized constant: parent pointers followed per operation stay
# below STEP_CONSTANT * alpha(n) with union by rank and full path compression.
STEP_CONSTANT = 2


class TestMakeSet:
    def test_singleton(self):
        ds = DisjointSets()
        ds.make_set("a")
        assert ds.find("a") == "a"

    def test_twice(self):
        ds = DisjointSets(["a"])
        with pytest.raises(AlreadyPresent):
            ds.make_set("a")

    def test_many_singletons(self):
        ds = DisjointSets(range(50))
        assert len(ds.groups()) == 50


class TestFind:
    def test_unknown(self):
        with pytest.raises(UnknownElement):
            DisjointSets().find("x")

    def test_after_union(self):
        ds = DisjointSets("abc")
        ds.union({"a", "b"}, "b")
        assert ds.find("a") == "b"
        ds.union({"b", "c"}, "c")
        assert ds.find("a") == "c"


class TestUnion:
    def test_named_after_x(self):
        ds = DisjointSets("ab")
        ds.union({"a", "b"}, "a")
        assert ds.find("b") == "a"

    def test_three_way(self):
        ds = DisjointSets("abc")
        ds.union({"a", "b", "c"}, "c")
        assert ds.find("a") == ds.find("b") == "c"

    def test_same_set_twice(self):
        ds = DisjointSets("a")
        with pytest.raises(NotDisjoint):
            ds.union(["a", "a"], "a")

    def test_x_outside_members(self):
        ds = DisjointSets("abc")
        with pytest.raises(NotDisjoint):
            ds.union({"a", "b"}, "c")

    def test_unknown_member(self):
        with pytest.raises(UnknownElement):
            DisjointSets("a").union({"a", "z"}, "a")

    def test_name_is_independent_of_rank(self):
        # A deep tree absorbing a singleton still takes the singleton's name.
        ds = DisjointSets(range(5))
        ds.union({0, 1}, 0)
        ds.union({0, 2}, 0)
        ds.union({0, 4}, 4)
        assert ds.find(1) == 4
        assert sorted(ds.representatives()) == [3, 4]


def test_inverse_ackermann_values():
    assert [inverse_ackermann(n) for n in (1, 3, 4, 7, 8, 61, 62, 10**9)] == [0, 1, 2, 2, 3, 3, 4, 4]


def _naive_run(n, ops, seed):
    rng = random.Random(seed)
    ds = DisjointSets(range(n))
    sets = [{u} for u in range(n)]
    where = list(range(n))
    for _ in range(ops):
        a, b = rng.randrange(n), rng.randrange(n)
        if where[a] == where[b]:
            assert ds.find(a) == ds.find(b)
            continue
        name = rng.choice((a, b))
        ds.union((ds.find(a), ds.find(b)), ds.find(name))
        keep, gone = where[a], where[b]
        for u in sets[gone]:
            where[u] = keep
        sets[keep] |= sets[gone]
        sets[gone] = set()
        # The merged set is named after the representative of ``name``'s old set.
        assert ds.find(a) == ds.find(b)
    return ds, where


@pytest.mark.parametrize("seed", range(20))
def test_matches_naive_set_lists(seed):
    n = 40
    ds, where = _naive_run(n, 60, seed)
    for u in range(n):
        for v in range(n):
            assert ds.same_set(u, v) == (where[u] == where[v])


@pytest.mark.parametrize("q", [10**4, 10**5, 10**6])
def test_amortized_steps(q):
    n = q // 2
    rng = random.Random(q)
    ds = DisjointSets(range(n))
    for _ in range(q):
        a = rng.randrange(n)
        if rng.random() < 0.5:
            b = rng.randrange(n)
            ra, rb = ds.find(a), ds.find(b)
            if ra != rb:
                ds.union((ra, rb), rng.choice((ra, rb)))
        else:
            ds.find(a)
    assert ds.steps <= STEP_CONSTANT * q * inverse_ackermann(n)
