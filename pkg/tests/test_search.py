from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from goba import arrays, cocycles, excess, groups, search
from goba.arrays import BinaryArray


def _bruteforce_hits(rep: cocycles.Cocycle, basis) -> set[tuple[int, ...]]:
    out = set()
    for r in range(len(basis) + 1):
        for sub in itertools.combinations(basis, r):
            if excess.is_quasi_orthogonal(cocycles.from_subset(rep, sub)):
                out.add(sub)
    return out


@pytest.mark.parametrize("t", [1, 2])
def test_completeness_against_full_space(t):
    n = 4 * t + 2
    G = groups.cyclic(n)
    full = cocycles.space(G, [cocycles.gamma(n)])
    quasi = {c.bits() for c in full if excess.is_quasi_orthogonal(c)}
    found = set()
    for space in (search.cyclic_space(t, prune=False), search.trivial_space(G)):
        for hit in search.enumerate_quasiorthogonal(space):
            found.add(space.cocycle(hit.subset).bits())
    assert found == quasi


@pytest.mark.parametrize("t", [1, 2, 3])
def test_weight_window_never_drops_hits(t):
    unpruned = {h.subset for h in search.enumerate_quasiorthogonal(search.cyclic_space(t, prune=False))}
    pruned = {h.subset for h in search.enumerate_quasiorthogonal(search.cyclic_space(t))}
    assert unpruned == pruned
    assert all(t <= len(s) <= 3 * t + 1 for s in unpruned)


def test_hit_counts_are_frozen():
    # recorded from the unpruned bitset engine and cross-checked by brute force for t <= 2
    counts = {t: sum(1 for _ in search.enumerate_quasiorthogonal(search.cyclic_space(t))) for t in (1, 2, 3)}
    assert counts == {1: 9, 2: 35, 3: 98}
    assert len(_bruteforce_hits(cocycles.gamma(6), range(1, 5))) == 9


def test_output_order_is_mask_order():
    masks = [h.mask for h in search.enumerate_quasiorthogonal(search.cyclic_space(2))]
    assert masks == sorted(masks)


def test_workers_do_not_change_output():
    space = search.cyclic_space(5)
    runs = [[(h.subset, h.row_sums) for h in search.enumerate_quasiorthogonal(space, w)] for w in (1, 2, 8)]
    assert runs[0] == runs[1] == runs[2]
    assert len(runs[0]) == 242


def test_resume_skips_completed_partitions():
    space = search.cyclic_space(5)
    whole = list(search.iter_partitions(space))
    assert [p for p, _ in whole] == list(range(space.partitions))
    tail = [h.subset for h in search.enumerate_quasiorthogonal(space, start_partition=10)]
    assert tail == [h.subset for p, hits in whole if p >= 10 for h in hits]


def test_row_sum_symmetries_on_every_hit():
    for t in (1, 2, 3):
        space = search.cyclic_space(t)
        for hit in search.enumerate_quasiorthogonal(space):
            assert search.row_sum_symmetry(space.cocycle(hit.subset))


def test_space_rejects_wrong_orders():
    with pytest.raises(ValueError):
        search.make_space(cocycles.gamma(8))


@pytest.mark.parametrize("t", [1, 2])
def test_fast_test_matches_oracle_exhaustively(t):
    n = 4 * t + 2
    labels = range(2, n + 1)
    for r in range(len(labels) + 1):
        for sub in itertools.combinations(labels, r):
            assert search.fast_quasiorthogonal_test(sub, t) == search.brute_force_quasiorthogonal(sub, t)


def test_batch_oracle_matches_single_oracle():
    t = 2
    masks = np.array(list(itertools.product([0, 1], repeat=9)))
    batch = search.brute_force_batch(masks, t)
    single = [search.brute_force_quasiorthogonal([j + 2 for j in range(9) if m[j]], t) for m in masks]
    assert batch.tolist() == single


def test_fast_test_rejects_out_of_window_weights():
    assert search.fast_quasiorthogonal_test([2], 2) is False
    assert search.fast_quasiorthogonal_test(range(2, 10), 1) is False


def test_path_census_example():
    census = search.path_census([2, 4], 1, 2)
    assert 2 * census.C == search.minus_count([2, 4], 1, 2)


@pytest.mark.parametrize("t", [1, 2])
def test_path_count_identity_exhaustive(t):
    n = 4 * t + 2
    for r_len in range(n):
        for sub in itertools.combinations(range(2, n + 1), r_len):
            for r in range(2, 2 * t + 2):
                census = search.path_census(sub, t, r)
                assert 2 * census.C == search.minus_count(sub, t, r)


@settings(max_examples=60)
@given(st.integers(3, 4), st.data())
def test_path_count_identity_sampled(t, data):
    n = 4 * t + 2
    sub = data.draw(st.sets(st.integers(2, n), max_size=n - 1))
    r = data.draw(st.integers(2, 2 * t + 1))
    assert 2 * search.path_census(sub, t, r).C == search.minus_count(sub, t, r)


def test_path_census_rejects_bad_labels():
    with pytest.raises(ValueError):
        search.path_census([1], 1, 2)


def test_goba_search_complete_on_small_product():
    G = groups.abelian((2, 3))
    for z in ((1, 0), (0, 1), (1, 1)):
        found = {a.values.tobytes() for a in search.goba_search((2, 3), z)}
        direct = set()
        for tail in itertools.product([1, -1], repeat=5):
            phi = BinaryArray((2, 3), (1,) + tail)
            if arrays.is_goba(phi, z):
                direct.add(phi.values.tobytes())
        assert found == direct
    first = np.array([1, -1, 1, 1, 1, 1], dtype=np.int8).tobytes()
    assert first in {a.values.tobytes() for a in search.goba_search((2, 3), (1, 0))}


def test_goba_search_errors():
    with pytest.raises(ValueError):
        list(search.goba_search((2, 3), (0, 0)))
    with pytest.raises(ValueError):
        list(search.goba_search((4, 3), (1, 0)))


@pytest.mark.parametrize("t", [1, 2])
def test_gobs_from_cyclic_matches_direct_filter(t):
    n = 4 * t + 2
    direct = {(1,) + v for v in itertools.product([1, -1], repeat=n - 1) if arrays.is_gobs((1,) + v)}
    found = {tuple(int(x) for x in v) for v in search.gobs_from_cyclic(t)}
    assert found == direct


def test_hit_json():
    hit = next(search.enumerate_quasiorthogonal(search.cyclic_space(1)))
    assert set(hit.to_json()) == {"subset", "row_sums", "re"}
