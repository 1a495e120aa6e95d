from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chgldpc import verify
from chgldpc.decoders import decode
from chgldpc.errors import RefusalError
from chgldpc.hybrid import array_layout, place_rows
from chgldpc.verify import (colex_combinations, colex_rank, colex_unrank, exhaustive_count,
                            find_min_failure, verify_gec)


@pytest.fixture(scope="module")
def c2(layout3, rep5):
    return place_rows(layout3, 1, rep5)


@pytest.fixture(scope="module")
def c1(layout3, rep5):
    return place_rows(layout3, 2, rep5)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 8).flatmap(lambda k: st.tuples(st.just(k), st.integers(0, comb(40, k) - 1))))
def test_colex_unrank_inverts_rank(args):
    k, idx = args
    combo = colex_unrank(idx, k)
    assert len(combo) == k and list(combo) == sorted(set(combo))
    assert colex_rank(combo) == idx


@pytest.mark.parametrize("n,k", [(6, 0), (6, 1), (7, 3), (9, 4)])
def test_colex_enumeration_is_complete(n, k):
    combos = list(colex_combinations(n, k))
    assert len(combos) == comb(n, k)
    assert sorted(combos) == sorted(combinations(range(n), k))
    assert [colex_rank(c) for c in combos] == list(range(len(combos)))


def test_colex_slices():
    full = list(colex_combinations(10, 3))
    assert list(colex_combinations(10, 3, 17, 40)) == full[17:40]
    assert list(colex_combinations(10, 3, 200)) == []


def test_exhaustive_count():
    assert exhaustive_count(65, 3) == 65 + 2080 + 43680 == 45825
    assert exhaustive_count(10, 0) == 0


def test_target_zero_passes(c2):
    rep = verify_gec(c2, target_weight=0)
    assert rep.verdict == "pass" and rep.patterns_tested == 0


def test_c2_single_errors_pass_and_pairs_fail(c2):
    one = verify_gec(c2, target_weight=1)
    assert one.verdict == "pass" and one.patterns_tested == 65
    two = verify_gec(c2, target_weight=2)
    assert two.verdict == "fail" and two.failure_count > 0
    assert two.per_weight == {1: 65, 2: 2080}
    # each recorded failure reproduces with the single-word decoder
    for sup in two.failures:
        y = np.zeros(c2.n, dtype=np.uint8)
        y[sup] = 1
        res = decode(c2, y)
        assert not (res.converged and not res.output.any())
    assert two.first_failure == two.failures[0]
    assert len(two.failures) == min(two.failure_count, verify.FAILURE_CAP)


def test_c1_weight3_exhaustive(c1):
    rep = verify_gec(c1, target_weight=3)
    assert rep.verdict == "pass"
    assert rep.patterns_tested == 45825
    assert rep.girth == 8


def test_workers_agree(c2):
    a = verify_gec(c2, target_weight=2, batch=300)
    b = verify_gec(c2, target_weight=2, batch=300, workers=4)
    assert a.to_json() == b.to_json()


def test_checkpoint_resume(c2, tmp_path, monkeypatch):
    path = str(tmp_path / "ck.json")
    full = verify_gec(c2, target_weight=2, batch=500)
    real = verify._scan_range
    calls = {"n": 0}

    def flaky(*args):
        calls["n"] += 1
        if calls["n"] == 3:
            raise KeyboardInterrupt
        return real(*args)

    monkeypatch.setattr(verify, "_scan_range", flaky)
    with pytest.raises(KeyboardInterrupt):
        verify_gec(c2, target_weight=2, batch=500, checkpoint=path)
    monkeypatch.setattr(verify, "_scan_range", real)
    resumed = verify_gec(c2, target_weight=2, batch=500, checkpoint=path)
    assert resumed.to_dict() == full.to_dict()


def test_checkpoint_fingerprint_mismatch(c2, c1, tmp_path):
    path = str(tmp_path / "ck.json")
    verify_gec(c2, target_weight=1, checkpoint=path)
    with pytest.raises(RefusalError):
        verify_gec(c1, target_weight=1, checkpoint=path)


def test_sampled_is_deterministic(c2):
    a = verify_gec(c2, mode="sampled", target_weight=2, n_samples=3000, seed=9)
    b = verify_gec(c2, mode="sampled", target_weight=2, n_samples=3000, seed=9)
    assert a.to_json() == b.to_json()
    assert a.failure_count > 0
    c = verify_gec(c2, mode="sampled", target_weight=2, n_samples=3000, seed=10)
    assert c.failures != a.failures


def test_sampled_supports_are_valid(c1):
    rep = verify_gec(c1, mode="sampled", weights=[4, 5], n_samples=2000, seed=1)
    assert rep.per_weight == {4: 2000, 5: 2000}
    assert rep.verdict == "pass"


def test_refusals(c2):
    big = place_rows(array_layout(3, 31, 31), 0, None)
    with pytest.raises(RefusalError):
        verify_gec(big, target_weight=5)
    with pytest.raises(RefusalError):
        verify_gec(c2, mode="sampled", weights=[70], n_samples=1)
    with pytest.raises(ValueError):
        verify_gec(c2, mode="other")


def test_find_min_failure(c2, c1):
    found = find_min_failure(c2)
    assert found.support is not None and len(found.support) == 2
    assert found.weights_covered == [1]
    gave_up = find_min_failure(c1, start_weight=2, budget=5000)
    assert gave_up.support is None and gave_up.weights_covered == [2]
    assert gave_up.tested == 5000


def test_report_json_fields(c2):
    d = verify_gec(c2, target_weight=1).to_dict()
    for key in ["target_weight", "mode", "decoder", "n", "girth", "patterns_tested",
                "failure_count", "failures", "verdict"]:
        assert key in d
