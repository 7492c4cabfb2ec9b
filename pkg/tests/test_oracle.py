import itertools
import json
from collections import Counter
from decimal import Decimal, localcontext

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binshape.constructions import square_image
from binshape.grid import BinaryImage
from binshape.oracle import (
    CHECKS,
    EnumerationCapExceeded,
    enumerate_images,
    exhaustive_verify,
    lemma1_sweep,
    min_sum_sqrt,
    naive_distance_field,
    naive_distance_rounds,
    sqrt_sum_key,
    verify_code,
)

from conftest import all_images, img


# --- naive distance ------------------------------------------------------------


def test_naive_distance_3x3():
    d = naive_distance_field(square_image(3))
    assert d.values.tolist() == [[0, 0, 0], [0, 1, 0], [0, 0, 0]]


def test_naive_distance_5x5_closed_form():
    r, c = np.indices((5, 5))
    expected = np.minimum(np.minimum(r, c), np.minimum(4 - r, 4 - c))
    assert np.array_equal(naive_distance_field(square_image(5)).values, expected)


def test_naive_distance_donut(donut):
    d = naive_distance_field(donut).values
    assert (d[donut.array == 1] == 0).all()


@pytest.mark.parametrize("w, h", [(3, 3), (2, 4)])
def test_naive_distance_rounds_bounded(w, h):
    for x in all_images(w, h):
        assert naive_distance_rounds(x) <= w * h


def test_naive_distance_rounds_long_snake():
    x = BinaryImage(np.ones((1, 25), np.uint8))
    assert naive_distance_rounds(x) <= 25


# --- minimum of square-root sums -----------------------------------------------


def _brute(r, lo, hi, total):
    """Independent reference: ordered tuples, 50-digit decimals."""
    with localcontext() as ctx:
        ctx.prec = 50
        best, wits = None, set()
        for tup in itertools.product(range(lo, hi + 1), repeat=r):
            if sum(tup) != total:
                continue
            v = sum(Decimal(k).sqrt() for k in tup)
            if best is None or v < best - Decimal("1e-40"):
                best, wits = v, {tuple(sorted(tup))}
            elif abs(v - best) <= Decimal("1e-40"):
                wits.add(tuple(sorted(tup)))
        return float(best), sorted(wits)


def test_min_sum_sqrt_two_terms():
    res = min_sum_sqrt(2, 0, 5, 5)
    assert res.value == pytest.approx(5**0.5)
    assert res.witnesses == ((0, 5),)


def test_min_sum_sqrt_three_terms():
    res = min_sum_sqrt(3, 1, 4, 6)
    assert res.value == pytest.approx(4.0)
    assert res.witnesses == ((1, 1, 4),)
    assert 4 < 1 + 2**0.5 + 3**0.5 < 3 * 2**0.5


def test_min_sum_sqrt_forced_tuple():
    res = min_sum_sqrt(2, 2, 7, 4)
    assert res.value == pytest.approx(2 * 2**0.5)
    assert res.witnesses == ((2, 2),)


@pytest.mark.parametrize("args", [(1, 0, 3, 2), (2, 3, 3, 6), (2, 4, 2, 6), (2, 0, 3, 7), (3, 2, 5, 5)])
def test_min_sum_sqrt_rejects_bad_input(args):
    with pytest.raises(ValueError):
        min_sum_sqrt(*args)


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 4), st.integers(0, 8), st.integers(1, 6), st.data())
def test_min_sum_sqrt_matches_brute_force(r, lo, span, data):
    hi = lo + span
    total = data.draw(st.integers(r * lo, r * hi))
    value, wits = _brute(r, lo, hi, total)
    res = min_sum_sqrt(r, lo, hi, total)
    assert res.value == pytest.approx(value, rel=1e-12)
    assert list(res.witnesses) == wits


def test_sqrt_sum_key_reduces_squares():
    assert sqrt_sum_key([8]) == sqrt_sum_key([2, 2]) == ((2, 2),)
    assert sqrt_sum_key([0, 9, 9]) == sqrt_sum_key([1, 1, 16]) == ((1, 6),)
    assert sqrt_sum_key([2, 3]) != sqrt_sum_key([5])
    assert sqrt_sum_key([]) == ()


def test_exact_ties_share_a_key():
    # 2 + sqrt(12) == sqrt(4) + 2 sqrt(3): distinct tuples, same exact value
    assert sqrt_sum_key([4, 3, 3]) == sqrt_sum_key([4, 12])


def test_minimum_witness_unique_in_small_range():
    # no exact ties at the minimum for r <= 3, B <= 8, matching the brute force
    for r in (2, 3):
        for hi in range(1, 9):
            for lo in range(hi):
                for total in range(r * lo, r * hi + 1):
                    res = min_sum_sqrt(r, lo, hi, total)
                    assert len(res.witnesses) == 1
                    if hi <= 5:
                        assert list(res.witnesses) == _brute(r, lo, hi, total)[1]


def test_lemma1_sweep_small():
    assert lemma1_sweep(max_r=3, max_b=6) == []


# --- enumeration -----------------------------------------------------------------


@pytest.mark.parametrize("w, h, n", [(2, 2, 16), (3, 3, 512), (1, 1, 2)])
def test_enumeration_counts(w, h, n):
    seen = []

    rep = enumerate_images(w, h, visitor=lambda code, arr, counters: seen.append(code) or [])
    assert rep.images_checked == n
    assert seen == list(range(n))


def test_enumeration_4x4_count():
    rep = exhaustive_verify(4, 4)
    assert rep.images_checked == 65536 and rep.ok


def test_enumeration_cap():
    with pytest.raises(EnumerationCapExceeded):
        enumerate_images(5, 6)
    with pytest.raises(ValueError):
        enumerate_images(0, 3)


def test_code_to_array_bit_order():
    got = {}

    def visit(code, arr, counters):
        got[code] = arr.copy()
        return []

    enumerate_images(3, 2, visitor=visit)
    assert got[0b000001].tolist() == [[1, 0, 0], [0, 0, 0]]
    assert got[0b001000].tolist() == [[0, 0, 0], [1, 0, 0]]
    assert BinaryImage(got[0b100100]).code == 0b100100


def fake_visitor(code, arr, counters):
    # module level so worker processes can unpickle it
    counters["seen"] += 1
    out = []
    if code % 7 == 3:
        out.append(("zeta", f"code {code}"))
    if code % 5 == 1:
        out.append(("alpha", "x"))
    return out


def test_report_is_partition_independent():
    docs = {jobs: enumerate_images(3, 3, visitor=fake_visitor, jobs=jobs).to_json() for jobs in (1, 2, 3, 8)}
    assert len(set(docs.values())) == 1
    doc = json.loads(docs[1])
    keys = [(v["image_code"], v["check"]) for v in doc["violations"]]
    assert keys == sorted(keys)
    assert doc["counters"] == {"seen": 512}
    assert doc["violation_count"] == len(keys) > 0


def test_exhaustive_verify_1x1():
    rep = exhaustive_verify(1, 1)
    assert rep.images_checked == 2 and rep.ok
    assert rep.checks == CHECKS


def test_exhaustive_verify_3x5():
    rep = exhaustive_verify(3, 5)
    assert rep.images_checked == 32768 and rep.violations == ()


def test_verify_code_flags_bad_kernels(monkeypatch):
    from binshape import kernels

    x = img("###", "###", "###")
    real = kernels.distance

    def broken(arr):
        d = real(arr).copy()
        d[d > 0] += 3
        return d

    monkeypatch.setattr(kernels, "distance", broken)
    found = {check for check, _ in verify_code(x.code, x.array, Counter())}
    assert "oracle-distance" in found
