import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bisphere.errors import CountOverflowError, DomainError, TableRangeError
from bisphere.lattice import (
    RepresentationTable,
    build_representation_table,
    count_N,
    regularity_ratio,
    sphere_points,
)
from oracles import box_norm_histogram, brute_sphere, split_norm_histogram


@pytest.mark.parametrize(
    "k, lam, expected",
    [
        (1, 4, 2),
        (3, 2, 12),  # brute force over {-2..2}^3
        (6, 1, 12),
    ],
)
def test_table_examples(k, lam, expected):
    assert build_representation_table(k, 10).count(lam) == expected
    assert box_norm_histogram(k, 10)[lam] == expected


def test_r1_shape():
    t = build_representation_table(1, 100)
    for m in range(101):
        expected = 1 if m == 0 else (2 if int(m**0.5) ** 2 == m else 0)
        assert t[m] == expected


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_table_matches_box_scan(k):
    np.testing.assert_array_equal(
        build_representation_table(k, 500).counts, box_norm_histogram(k, 500)
    )


@pytest.mark.parametrize("k", [5, 6])
def test_table_matches_split_scan(k):
    np.testing.assert_array_equal(
        build_representation_table(k, 500).counts, split_norm_histogram(k, 500)
    )
    # full box scan over the small range as a second route
    np.testing.assert_array_equal(
        build_representation_table(k, 40).counts, box_norm_histogram(k, 40)
    )


@pytest.mark.parametrize("d", [2, 3, 4])
def test_convolution_identity(d):
    rd = build_representation_table(d, 500).counts
    r2d = build_representation_table(2 * d, 500).counts
    for lam in range(501):
        assert r2d[lam] == int(np.dot(rd[: lam + 1], rd[lam::-1]))


def test_r0_is_one():
    for k in range(1, 10):
        assert build_representation_table(k, 0)[0] == 1


def test_range_and_domain_errors():
    t = build_representation_table(3, 10)
    with pytest.raises(TableRangeError):
        t.count(11)
    with pytest.raises(DomainError):
        build_representation_table(0, 10)
    with pytest.raises(DomainError):
        sphere_points(2, -1)


def test_overflow_is_loud():
    with pytest.raises(CountOverflowError):
        build_representation_table(40, 4000)


def test_csv_round_trip(tmp_path):
    t = build_representation_table(4, 60)
    path = tmp_path / "r4.csv"
    text = t.to_csv(path)
    assert text.splitlines()[0] == "lambda,count"
    back = RepresentationTable.from_csv(path, dim=4)
    np.testing.assert_array_equal(back.counts, t.counts)
    assert RepresentationTable.from_csv(text, dim=4).lambda_max == 60


def test_sphere_examples():
    assert sorted(map(tuple, sphere_points(2, 1).tolist())) == sorted(
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
    )
    assert sphere_points(3, 0).tolist() == [[0, 0, 0]]
    assert sphere_points(2, 3).shape == (0, 2)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_sphere_lengths_match_table(d):
    t = build_representation_table(d, 200)
    for lam in range(201):
        assert len(sphere_points(d, lam)) == t[lam]


@pytest.mark.parametrize("d, lam", [(2, 25), (3, 17), (4, 9)])
def test_sphere_is_lexicographic_and_exact(d, lam):
    pts = [tuple(p) for p in sphere_points(d, lam).tolist()]
    assert pts == brute_sphere(d, lam)


def test_threaded_sphere_is_identical():
    np.testing.assert_array_equal(sphere_points(4, 50, threads=4), sphere_points(4, 50))


def test_count_N_examples():
    assert count_N(3, 1, 2) == 12
    assert count_N(3, 0, 2) == 1
    assert count_N(2, 5, 1) == 8
    with pytest.raises(TableRangeError):
        count_N(3, 50, 2, table=build_representation_table(6, 20))


def test_regularity_examples():
    r = regularity_ratio(3, [1, 4])
    assert r[0, 1] == pytest.approx(12.0)
    assert r[1, 1] == pytest.approx(box_norm_histogram(6, 4)[4] / 16)
    assert regularity_ratio(2, [1])[0, 1] == pytest.approx(8.0)


def test_regularity_window_d3():
    ratios = regularity_ratio(3, range(1, 2001))[:, 1]
    c1, c2 = ratios.min(), ratios.max()
    # window recorded from this run: N(lam)/lam^2 stays in [c1, c2] with c1 > 0
    assert c1 > 0
    assert c2 / c1 < 10


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 120))
def test_convolution_identity_mixed_dims(j, k, lam):
    rj = build_representation_table(j, lam).counts
    rk = build_representation_table(k, lam).counts
    rjk = build_representation_table(j + k, lam).counts
    assert rjk[lam] == int(np.dot(rj[: lam + 1], rk[lam::-1]))
