import random
from itertools import combinations
from math import log2

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vcbound.extremal import hamming_ball, star
from vcbound.setsystem import (
    ParseError,
    SetSystem,
    SetSystemError,
    complement_uniform,
    complete_family,
    elements_of,
    is_shattered,
    k_subsets,
    mask_of,
    parse_system,
    serialize_system,
    shadow,
    system_from_json,
    system_to_json,
    trace,
    vc_dimension,
    vc_le_uniform,
)


def S(*elems):
    return mask_of(elems)


def fam(n, *sets):
    return SetSystem.from_sets(n, sets)


def naive_shattered(F, s):
    """Check every subset of s separately."""
    elems = elements_of(s)
    for r in range(len(elems) + 1):
        for sub in combinations(elems, r):
            want = mask_of(sub)
            if not any(m & s == want for m in F.members):
                return False
    return True


def naive_vc(F):
    if not F.members:
        return -1
    best = -1
    n = F.n
    for r in range(n + 1):
        for combo in combinations(range(1, n + 1), r):
            if naive_shattered(F, mask_of(combo)):
                best = max(best, r)
    return best


families = st.integers(1, 7).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.sets(st.integers(0, (1 << n) - 1), max_size=24),
    )
).map(lambda t: SetSystem(t[0], tuple(sorted(t[1]))))


class TestTrace:
    def test_examples(self):
        assert trace(fam(3, {1, 2}, {2, 3}), S(2)) == {S(2)}
        assert trace(SetSystem(3), S(1)) == set()
        assert trace(complete_family(4, 2), S(1, 2)) == {0, S(1), S(2), S(1, 2)}

    def test_out_of_range(self):
        with pytest.raises(SetSystemError):
            trace(SetSystem(3), S(4))


class TestShattered:
    def test_examples(self):
        assert is_shattered(complete_family(4, 2), S(1, 2))
        assert not is_shattered(fam(3, {1, 2, 3}), S(1))
        assert is_shattered(fam(3, {1}), 0)
        assert not is_shattered(SetSystem(3), 0)

    @given(families, st.data())
    @settings(max_examples=200)
    def test_matches_naive_loop(self, F, data):
        s = data.draw(st.integers(0, (1 << F.n) - 1))
        assert is_shattered(F, s) == naive_shattered(F, s)


class TestVCDimension:
    def test_examples(self):
        assert vc_dimension(SetSystem(4)) == -1
        assert vc_dimension(hamming_ball(5, 2)) == 2
        assert vc_dimension(complete_family(5, 3)) == 2

    @given(families)
    @settings(max_examples=150)
    def test_matches_brute_force(self, F):
        assert vc_dimension(F) == naive_vc(F)

    @given(families)
    @settings(max_examples=150)
    def test_log_bound(self, F):
        if F.members:
            assert vc_dimension(F) <= log2(len(F))

    def test_monotone_under_inclusion(self):
        rng = random.Random(5)
        for _ in range(50):
            n = rng.randint(2, 7)
            pool = list(range(1 << n))
            big = rng.sample(pool, rng.randint(0, len(pool)))
            small = rng.sample(big, rng.randint(0, len(big)))
            assert vc_dimension(SetSystem(n, tuple(small))) <= vc_dimension(SetSystem(n, tuple(big)))


class TestVCLeUniform:
    def test_examples(self):
        assert vc_le_uniform(complete_family(5, 3), 2)
        assert not vc_le_uniform(complete_family(6, 3), 2)
        assert vc_le_uniform(star(6, 2), 2)

    def test_rejects_non_uniform(self):
        with pytest.raises(SetSystemError):
            vc_le_uniform(fam(4, {1, 2}, {1, 2, 3}), 1)

    def test_agrees_with_vc_dimension(self):
        rng = random.Random(11)
        for _ in range(300):
            d = rng.randint(1, 3)
            n = rng.randint(d + 1, 10)
            cands = k_subsets(n, d + 1)
            members = rng.sample(cands, rng.randint(0, min(len(cands), 40)))
            F = SetSystem(n, tuple(members))
            assert vc_le_uniform(F, d) == (vc_dimension(F) <= d)


class TestShadow:
    def test_examples(self):
        assert shadow(fam(3, {1, 2, 3}), 2).members == (S(1, 2), S(1, 3), S(2, 3))
        assert shadow(complete_family(5, 3), 2).members == tuple(k_subsets(5, 2))
        assert len(shadow(star(6, 2), 2)) == 15

    @given(families, st.integers(0, 7))
    def test_nonempty_when_possible(self, F, k):
        if any(bin(m).count("1") >= k for m in F.members):
            assert len(shadow(F, k)) >= 1

    def test_fixed_point_on_uniform(self):
        F = star(7, 2)
        assert set(shadow(F, 3).members) == set(F.members)


class TestComplement:
    def test_examples(self):
        assert len(complement_uniform(complete_family(5, 3), 3)) == 0
        assert len(complement_uniform(SetSystem(4), 2)) == 6
        comp = complement_uniform(star(6, 2), 3)
        assert len(comp) == 10
        assert all(not m & 1 for m in comp)

    def test_rejects_non_uniform(self):
        with pytest.raises(SetSystemError):
            complement_uniform(fam(4, {1}, {1, 2}), 2)


class TestSerialization:
    def test_format(self):
        text = serialize_system(fam(4, {1, 2}, {3}))
        assert text == "n 4\n1 2\n3\n"

    def test_comments_and_blank_lines(self):
        F = parse_system("# a family\nn 5\n\n1 2 3\n# note\n2 4\n")
        assert F.as_lists() == [[1, 2, 3], [2, 4]]

    def test_empty_member(self):
        F = hamming_ball(3, 1)
        assert parse_system(serialize_system(F)) == F

    @pytest.mark.parametrize("text", [
        "",
        "m 4\n1 2\n",
        "n x\n",
        "n 0\n",
        "n 200\n",
        "n 4\n1 5\n",
        "n 4\n0 1\n",
        "n 4\n1 2\n2 1\n",
        "n 4\n1 2\n1 2\n",
        "n 4\n1 1 2\n",
        "n 4\n1 a\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_system(text)

    @given(families)
    def test_round_trip(self, F):
        assert parse_system(serialize_system(F)) == F
        assert system_from_json(system_to_json(F)) == F

    def test_order_preserved(self):
        F = fam(5, {4, 5}, {1}, {2, 3})
        assert parse_system(serialize_system(F)).members == F.members

    def test_json_errors(self):
        with pytest.raises(ParseError):
            system_from_json("{not json")
        with pytest.raises(ParseError):
            system_from_json({"n": 3})
        with pytest.raises(ParseError):
            system_from_json({"n": 3, "members": [[4]]})


def test_ground_cap():
    SetSystem(128, (1 << 127,))
    with pytest.raises(SetSystemError):
        SetSystem(129)
    with pytest.raises(SetSystemError):
        SetSystem(3, (S(1), S(1)))
