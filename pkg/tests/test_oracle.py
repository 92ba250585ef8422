import itertools
import json
from math import prod

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from quotdt import oracle
from quotdt.dt import macmahon_power
from quotdt.oracle import (
    CountRecord,
    FramedTuple,
    FreeActionError,
    PlanePartition,
    colored_plane_partitions,
    conjugacy_classes,
    count_ncquot_points,
    count_quot_points,
    gl_order,
    is_spanning,
    ncquot_count_recursive,
    pin_record,
    plane_partition_counts,
    plane_partitions,
    raw_stable_count,
)

# (r, n, q) -> (count_quot, count_ncquot), frozen from the enumerator
PINNED = {
    (1, 2, 2): (112, 1792),
    (2, 2, 2): (736, 9472),
    (1, 2, 3): (1053, 85293),
    (2, 2, 3): (13365, 872613),
}

I2 = ((1, 0), (0, 1))
Z2 = ((0, 0), (0, 0))
NIL = ((0, 0), (1, 0))  # e1 -> e2


def test_gl_order():
    assert gl_order(1, 5) == 4
    assert gl_order(2, 2) == 6
    assert gl_order(2, 3) == 48
    assert gl_order(3, 2) == 168
    assert gl_order(0, 7) == 1


@pytest.mark.parametrize("n,q", [(1, 2), (1, 3), (2, 2), (2, 3)])
def test_conjugacy_classes_partition_matrix_space(n, q):
    classes = conjugacy_classes(n, q)
    assert sum(w for _, w in classes) == q ** (n * n)


def test_is_spanning_examples():
    assert is_spanning(FramedTuple(2, 2, NIL, Z2, Z2, ((1, 0),)))
    assert not is_spanning(FramedTuple(2, 2, NIL, Z2, Z2, ((0, 1),)))
    assert not is_spanning(FramedTuple(2, 3, I2, I2, I2, ((1, 0),)))
    assert is_spanning(FramedTuple(2, 3, Z2, Z2, Z2, ((1, 0), (0, 2))))
    assert not is_spanning(FramedTuple(2, 3, Z2, Z2, Z2, ((1, 1), (2, 2))))


def test_framed_tuple_validation():
    with pytest.raises(ValueError):
        FramedTuple(2, 4, Z2, Z2, Z2, ())
    with pytest.raises(ValueError):
        FramedTuple(2, 2, ((0,),), Z2, Z2, ())
    t = FramedTuple(2, 3, ((4, 0), (0, 0)), Z2, Z2, ((5, 1),))
    assert t.A == ((1, 0), (0, 0)) and t.frames == ((2, 1),)
    assert FramedTuple(2, 2, NIL, I2, Z2, ()).commutes()
    assert not FramedTuple(2, 2, NIL, ((1, 0), (0, 0)), Z2, ()).commutes()


def _brute_spanning(r, n, q, commuting):
    """Direct enumeration of every (A, B, C, v), no conjugacy reduction."""
    mats = oracle.all_matrices(n, q)
    vecs = list(itertools.product(range(q), repeat=n))
    total = 0
    for A, B, C in itertools.product(mats, repeat=3):
        if commuting and not FramedTuple(n, q, A, B, C).commutes():
            continue
        for fr in itertools.product(vecs, repeat=r):
            total += is_spanning(FramedTuple(n, q, A, B, C, fr))
    return total


@pytest.mark.parametrize("r,n,q", [(1, 1, 2), (2, 1, 3), (1, 2, 2)])
def test_raw_count_matches_brute_force(r, n, q):
    for commuting in (True, False):
        assert raw_stable_count(r, n, q, commuting=commuting) == _brute_spanning(r, n, q, commuting)


@pytest.mark.parametrize("r", [1, 2, 3, 4])
@pytest.mark.parametrize("q", [2, 3, 5])
def test_single_point_closed_form(r, q):
    expected = q**3 * (q**r - 1) // (q - 1)
    assert count_quot_points(r, 1, q) == expected
    assert count_ncquot_points(r, 1, q) == expected


@pytest.mark.parametrize("key", sorted(k for k in PINNED if k[2] == 2))
def test_pinned_counts_q2(key):
    r, n, q = key
    assert (count_quot_points(r, n, q), count_ncquot_points(r, n, q)) == PINNED[key]


@pytest.mark.slow
@pytest.mark.parametrize("key", sorted(k for k in PINNED if k[2] == 3))
def test_pinned_counts_q3(key):
    r, n, q = key
    assert (count_quot_points(r, n, q), count_ncquot_points(r, n, q)) == PINNED[key]


@pytest.mark.parametrize("q", [2, 3])
def test_hilbert_two_points(q):
    # Hilb^2(A^3): pairs of distinct points plus a point with a tangent direction
    assert PINNED[(1, 2, q)][0] == q**6 + q**5 + q**4


@pytest.mark.parametrize("key", sorted(PINNED))
def test_recursion_matches_pins(key):
    assert ncquot_count_recursive(*key) == PINNED[key][1]


@pytest.mark.parametrize("q", [2, 3, 5])
def test_rank1_two_point_nc(q):
    assert ncquot_count_recursive(1, 2, q) == q**8 * (q**2 + q + 1)


def _recursion_polynomial(r, n):
    q = sympy.symbols("q")

    def gauss(m, d):
        return sympy.cancel(
            prod((q ** (m - i) - 1 for i in range(d)), start=sympy.Integer(1))
            / prod((q ** (i + 1) - 1 for i in range(d)), start=sympy.Integer(1))
        )

    stable = []
    for m in range(n + 1):
        rest = sum((gauss(m, d) * stable[d] * q ** (3 * m * (m - d)) for d in range(m)), sympy.Integer(0))
        stable.append(sympy.expand(q ** (3 * m * m + r * m) - rest))
    glp = prod((q**n - q**i for i in range(n)), start=sympy.Integer(1))
    quo, rem = sympy.div(sympy.Poly(stable[n], q), sympy.Poly(sympy.expand(glp), q))
    assert rem.is_zero
    return quo


@pytest.mark.parametrize("r,n", [(1, 1), (2, 1), (1, 2), (2, 2), (1, 3)])
def test_nc_count_is_monic_of_expected_degree(r, n):
    poly = _recursion_polynomial(r, n)
    assert poly.degree() == 2 * n * n + r * n
    assert poly.LC() == 1
    for q in (2, 3):
        assert poly.eval(q) == ncquot_count_recursive(r, n, q)


@pytest.mark.parametrize("r", [1, 2])
def test_leading_degree_ratio(r):
    n, dim = 2, 2 * 2 * 2 + r * 2
    ratios = [PINNED[(r, n, q)][1] / q**dim for q in (2, 3)]
    assert 1 <= ratios[1] < ratios[0]


@pytest.mark.parametrize("r,n,q", [(1, 2, 2), (2, 2, 2), (2, 1, 3)])
def test_divisibility_and_permutation_invariance(r, n, q):
    for commuting in (True, False):
        counts = set()
        for perm in itertools.permutations(range(3)):
            raw = raw_stable_count(r, n, q, commuting=commuting, loop_order=perm)
            assert raw % gl_order(n, q) == 0
            counts.add(raw)
        assert len(counts) == 1


def test_threads_do_not_change_result():
    assert raw_stable_count(2, 2, 2, commuting=True, threads=2) == raw_stable_count(2, 2, 2, commuting=True)


def test_inexact_division_raises():
    with pytest.raises(FreeActionError):
        oracle._orbit_count(7, 2, 2)


def test_argument_errors():
    with pytest.raises(ValueError):
        count_quot_points(1, 1, 4)
    with pytest.raises(ValueError):
        count_quot_points(0, 1, 2)
    with pytest.raises(ValueError):
        raw_stable_count(1, 1, 2, commuting=True, loop_order=(0, 0, 1))


def test_zero_points():
    assert count_quot_points(3, 0, 5) == 1 == count_ncquot_points(3, 0, 5)


def test_pin_record(tmp_path):
    path = tmp_path / "oracle_counts.json"
    pin_record(CountRecord(1, 2, 2, count_quot=112), path)
    pin_record(CountRecord(1, 2, 2, count_ncquot=1792), path)
    pin_record(CountRecord(1, 2, 2, count_quot=112), path)
    entries = json.loads(path.read_text())
    assert len(entries) == 2
    with pytest.raises(ValueError, match="regression mismatch"):
        pin_record(CountRecord(1, 2, 2, count_quot=113), path)
    assert json.loads(path.read_text()) == entries


def test_count_record_ordering():
    with pytest.raises(ValueError):
        CountRecord(1, 2, 2, count_quot=5, count_ncquot=4)


def test_plane_partition_validation():
    assert PlanePartition.from_rows([[2, 1], [1]]).size == 4
    with pytest.raises(ValueError):
        PlanePartition.from_rows([[1, 2]])
    with pytest.raises(ValueError):
        PlanePartition.from_rows([[1], [2]])
    with pytest.raises(ValueError):
        PlanePartition({(0, 0): 0})


def test_plane_partitions_distinct_and_sized():
    for n in range(7):
        pps = list(plane_partitions(n))
        assert len(set(pps)) == len(pps)
        assert all(p.size == n for p in pps)


def test_plane_partition_counts():
    assert plane_partition_counts(10) == [1, 1, 3, 6, 13, 24, 48, 86, 160, 282, 500]


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(0, 8))
def test_colored_counts_match_macmahon(r, n):
    assert colored_plane_partitions(r, n) == macmahon_power(r, n)[n]


def _hilbert_scheme_count(n, q):
    """|Hilb^n(A^3)(F_q)| for n <= 3, summed over the closed-point support types."""

    def closed_points(d):
        mobius = {1: 1, 2: -1, 3: -1}
        return sum(mobius[d // e] * q ** (3 * e) for e in range(1, d + 1) if d % e == 0) // d

    punctual = [1, 1, q * q + q + 1, (q * q + q + 1) * (q * q + 1)]
    N1, N2, N3 = (closed_points(d) for d in (1, 2, 3))
    if n == 2:
        return N1 * punctual[2] + N1 * (N1 - 1) // 2 + N2
    assert n == 3
    return (
        N1 * punctual[3]
        + N1 * (N1 - 1) * punctual[2]
        + N1 * (N1 - 1) * (N1 - 2) // 6
        + N2 * N1
        + N3
    )


@pytest.mark.parametrize("q", [2, 3, 5])
def test_hilbert_count_formula_consistent(q):
    assert _hilbert_scheme_count(2, q) == q**6 + q**5 + q**4


@pytest.mark.slow
def test_three_points_rank_one():
    quot = count_quot_points(1, 3, 2)
    assert quot == _hilbert_scheme_count(3, 2) == 1120
    assert quot <= ncquot_count_recursive(1, 3, 2)
