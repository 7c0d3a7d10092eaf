import random
from fractions import Fraction
from math import comb

import pytest

from vcbound.extremal import (
    ak_candidate,
    ak_family,
    audit_sweep,
    full_family,
    hamming_ball,
    impossibility_audit,
    orbit_search,
    random_vc_family,
    star,
    verify_structure,
)
from vcbound.polycert import find_witnesses
from vcbound.setsystem import SetSystemError, mask_of, vc_dimension, vc_le_uniform


class TestConstructions:
    def test_star(self):
        assert len(star(6, 2)) == 10
        assert star(3, 1).as_lists() == [[1, 2], [1, 3]]
        for d in range(1, 4):
            for n in range(d + 1, 11):
                F = star(n, d)
                assert len(F) == comb(n - 1, d)
                assert vc_le_uniform(F, d)

    def test_ak_candidate_size(self):
        for n, d in [(6, 2), (7, 2), (8, 2), (8, 3), (10, 3)]:
            assert len(ak_candidate(n, d)) == comb(n - 1, d) + comb(n - 4, d - 2)
        assert len(ak_candidate(6, 2)) == 11
        assert len(ak_candidate(8, 2)) == 22

    def test_ak_candidate_fails_vc_check(self):
        # recorded outcome: the star-plus-{2,3,4} shape shatters {2,3,4}
        for n in (6, 7, 8):
            F = ak_candidate(n, 2)
            assert not vc_le_uniform(F, 2)
            assert vc_dimension(F) == 3

    def test_ak_candidate_range(self):
        with pytest.raises(SetSystemError):
            ak_candidate(5, 2)
        with pytest.raises(SetSystemError):
            ak_candidate(8, 1)

    @pytest.mark.parametrize("n,d", [(6, 2), (7, 2), (8, 2), (9, 2), (9, 3)])
    def test_ak_fallback_matches_size(self, n, d):
        res = ak_family(n, d)
        assert res.source == "orbit-search"
        assert res.matches
        assert len(res.family) == comb(n - 1, d) + comb(n - 4, d - 2)

    def test_orbit_search_beats_star(self):
        F = orbit_search(8, 2)
        assert vc_le_uniform(F, 2)
        assert len(F) > comb(7, 2)

    def test_full_family(self):
        F = full_family(5, 2)
        assert len(F) == 10 and vc_dimension(F) == 2
        F = full_family(3, 1)
        assert len(F) == 3 and vc_dimension(F) == 1
        assert len(full_family(7, 3)) == 35 == comb(7, 3)
        with pytest.raises(SetSystemError):
            full_family(6, 2)

    def test_hamming_ball(self):
        assert len(hamming_ball(5, 2)) == 16
        assert hamming_ball(4, 0).members == (0,)
        assert vc_dimension(hamming_ball(4, 0)) == 0
        with pytest.raises(SetSystemError):
            hamming_ball(3, 4)

    def test_random_vc_family_is_bounded(self):
        rng = random.Random(0)
        for _ in range(100):
            d = rng.randint(1, 3)
            n = rng.randint(d + 1, 9)
            assert vc_le_uniform(random_vc_family(n, d, rng), d)


class TestStructure:
    def test_full_family_vacuous(self):
        rep = verify_structure(find_witnesses(full_family(5, 2), 2))
        assert rep.complement_size == 0
        assert rep.property1 and rep.property2
        assert rep.double_count_holds

    def test_star_fails_property1(self):
        rep = verify_structure(find_witnesses(star(6, 2), 2))
        assert not rep.property1
        assert rep.property2
        assert rep.complement_size == 10
        # Y = {2,3,4}, Z = {} is fine (count 1); Z = {2} has no witness
        bad = {(Y, Z): c for Y, Z, c in rep.property1_violations}
        assert bad[(mask_of((2, 3, 4)), mask_of((2,)))] == 0
        assert (mask_of((2, 3, 4)), 0) not in bad

    def test_property2_for_found_witnesses(self):
        rng = random.Random(8)
        for _ in range(40):
            d = rng.randint(1, 3)
            n = rng.randint(d + 2, 8)
            F = random_vc_family(n, d, rng)
            if not F.members:
                continue
            rep = verify_structure(find_witnesses(F, d))
            assert rep.property2
            assert len(rep.property1_violations) <= 100

    def test_json(self):
        data = verify_structure(find_witnesses(star(6, 2), 2)).to_json()
        assert data["property1"]["holds"] is False
        assert data["property1"]["violations"][0].keys() == {"Y", "Z", "count"}


class TestAudit:
    def test_six_two(self):
        r = impossibility_audit(6, 2)
        assert r.complement_size == 5
        assert r.required == 10
        assert r.forced_shadow == Fraction(5 * 3, 3)
        assert r.confirmed
        assert r.line() == "|Y|=5 required>=10 contradiction=confirmed"

    def test_eight_three(self):
        r = impossibility_audit(8, 3)
        assert (r.complement_size, r.required) == (14, 35)
        assert r.confirmed
        assert r.alpha < 7

    def test_sweep(self):
        reports = audit_sweep(14, 30)
        assert len(reports) == sum(30 - (2 * d + 2) + 1 for d in range(2, 15))
        assert all(r.confirmed for r in reports)
        assert all(r.final_difference < 0 for r in reports)

    def test_range(self):
        with pytest.raises(SetSystemError):
            impossibility_audit(5, 2)
        with pytest.raises(SetSystemError):
            impossibility_audit(10, 1)
