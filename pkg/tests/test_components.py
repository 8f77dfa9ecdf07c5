import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from maskprompt.components import label_components

from oracles import component_stats_naive, flood_fill_label


def masks(max_side=24):
    return st.tuples(st.integers(1, max_side), st.integers(1, max_side)).flatmap(
        lambda hw: arrays(np.uint8, hw, elements=st.integers(0, 1))
    )


def same_partition(labels_a, labels_b):
    """Label maps agree up to id renaming."""
    if labels_a.shape != labels_b.shape:
        return False
    a = labels_a.ravel()
    b = labels_b.ravel()
    if not np.array_equal(a > 0, b > 0):
        return False
    fg = a > 0
    pairs = set(zip(a[fg].tolist(), b[fg].tolist()))
    return len(pairs) == len({p[0] for p in pairs}) == len({p[1] for p in pairs})


def test_diagonal_pixels_eight_connected():
    m = np.zeros((3, 3), dtype=np.uint8)
    m[0, 0] = m[1, 1] = 1
    labels, stats = label_components(m, "eight")
    assert len(stats) == 1
    assert stats[0].area == 2
    assert (stats[0].bbox_w, stats[0].bbox_h) == (2, 2)


def test_diagonal_pixels_four_disconnected():
    m = np.zeros((3, 3), dtype=np.uint8)
    m[0, 0] = m[1, 1] = 1
    labels, stats = label_components(m, "four")
    assert len(stats) == 2
    assert all(s.area == 1 for s in stats)


def test_empty_mask():
    labels, stats = label_components(np.zeros((4, 5), dtype=np.uint8))
    assert stats == []
    assert labels.sum() == 0


def test_bad_connectivity():
    with pytest.raises(ValueError):
        label_components(np.zeros((2, 2), dtype=np.uint8), "six")


def test_ids_raster_scan_order():
    m = np.array(
        [
            [0, 0, 0, 1],
            [1, 0, 0, 1],
            [0, 0, 0, 0],
            [1, 1, 0, 0],
        ],
        dtype=np.uint8,
    )
    labels, stats = label_components(m, "four")
    assert labels[0, 3] == 1
    assert labels[1, 0] == 2
    assert labels[3, 0] == 3


@pytest.mark.parametrize("connectivity", ["four", "eight"])
def test_matches_flood_fill_oracle(connectivity, rng):
    for _ in range(200):
        h, w = rng.integers(1, 65, size=2)
        m = (rng.random((h, w)) < rng.uniform(0.1, 0.9)).astype(np.uint8)
        labels, stats = label_components(m, connectivity)
        ref_labels, ref_n = flood_fill_label(m, connectivity)
        assert len(stats) == ref_n
        assert same_partition(labels, ref_labels)
        # raster-scan id order means the maps agree exactly, not just up to renaming
        assert np.array_equal(labels, ref_labels)


@pytest.mark.parametrize("connectivity", ["four", "eight"])
def test_stats_match_naive(connectivity, rng):
    for _ in range(50):
        h, w = rng.integers(1, 40, size=2)
        m = (rng.random((h, w)) < 0.5).astype(np.uint8)
        labels, stats = label_components(m, connectivity)
        for s in stats:
            ref = component_stats_naive(labels, s.id)
            assert s.area == ref["area"]
            assert (s.bbox_x, s.bbox_y, s.bbox_w, s.bbox_h) == (
                ref["bbox_x"], ref["bbox_y"], ref["bbox_w"], ref["bbox_h"],
            )


@given(masks())
@settings(max_examples=60, deadline=None)
def test_partition_property(m):
    labels, stats = label_components(m)
    assert sum(s.area for s in stats) == int((m != 0).sum())
    assert np.array_equal(labels > 0, m != 0)
    ids = sorted(s.id for s in stats)
    assert ids == list(range(1, len(stats) + 1))


@given(masks())
@settings(max_examples=40, deadline=None)
def test_bbox_tight(m):
    labels, stats = label_components(m)
    for s in stats:
        comp = labels == s.id
        assert comp[s.bbox_y, :].any() and comp[s.bbox_y + s.bbox_h - 1, :].any()
        assert comp[:, s.bbox_x].any() and comp[:, s.bbox_x + s.bbox_w - 1].any()
        assert s.area <= s.bbox_w * s.bbox_h
