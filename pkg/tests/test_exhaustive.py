import time

import pytest

from lucaspal.exhaustive import search, search_palindromic, search_two_block
from lucaspal.recurrences import lucas, lucas_upto

LITERATURE = [11, 18, 29, 47, 76, 199, 322]


def intersection_oracle(n_max):
    """Generate every d1^l d2^m d1^l by string building, block lengths independent,
    and intersect with the Lucas numbers of the same length."""
    by_length = {}
    for n, v in enumerate(lucas_upto(n_max)):
        by_length.setdefault(len(str(v)), set()).add(v)
    found = set()
    for length, values in by_length.items():
        candidates = set()
        for ell in range(1, (length - 1) // 2 + 1):
            m = length - 2 * ell
            for d1 in range(1, 10):
                for d2 in range(10):
                    if d1 != d2:
                        candidates.add(int(str(d1) * ell + str(d2) * m + str(d1) * ell))
        found |= values & candidates
    return found


@pytest.mark.parametrize("n_max", [10, 1000, 2000])
def test_no_palindromic_hits(n_max):
    report = search_palindromic(n_max)
    assert report.hits == ()
    assert report.mode == "palindromic"


def test_matcher_agrees_with_intersection_oracle():
    assert intersection_oracle(1000) == set(search_palindromic(1000).values) == set()


def test_oracle_detects_a_planted_palindrome():
    # sanity of the oracle itself: 151 would be found if it were a Lucas number
    assert 151 not in lucas_upto(20)
    assert 4 in {lucas(3)}


def test_two_block_small():
    assert search_two_block(6).values == [11, 18]
    assert search_two_block(15).values == LITERATURE


def test_two_block_literature_list():
    report = search_two_block(1000)
    assert report.values == LITERATURE
    for h in report.hits:
        assert lucas(h.n) == h.value


def test_search_dispatch_and_validation():
    assert search(20, "two-block").values == LITERATURE
    with pytest.raises(ValueError):
        search(20, "other")
    with pytest.raises(ValueError):
        search_palindromic(1)


def test_search_is_deterministic():
    assert search_two_block(500) == search_two_block(500)


def test_runtime():
    t0 = time.perf_counter()
    search_palindromic(1000)
    assert time.perf_counter() - t0 < 5
