import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from maskprompt.components import ComponentStats, label_components
from maskprompt.pruning import PruneConfig, keeps, prune


def masks(max_side=32):
    return st.tuples(st.integers(1, max_side), st.integers(1, max_side)).flatmap(
        lambda hw: arrays(np.uint8, hw, elements=st.integers(0, 1))
    )


def stats_for(**kw):
    return ComponentStats(id=1, area=kw["area"], bbox_x=0, bbox_y=0,
                          bbox_w=kw["w"], bbox_h=kw["h"])


class TestBoundarySemantics:
    def test_area_999_removed(self):
        assert not keeps(stats_for(area=999, w=300, h=300), PruneConfig())

    def test_extent_274_removed(self):
        assert not keeps(stats_for(area=5000, w=274, h=400), PruneConfig())
        assert not keeps(stats_for(area=5000, w=400, h=274), PruneConfig())

    def test_exact_thresholds_retained(self):
        assert keeps(stats_for(area=1000, w=275, h=275), PruneConfig())


def test_partition_of_foreground(rng):
    for _ in range(50):
        h, w = rng.integers(1, 48, size=2)
        m = (rng.random((h, w)) < 0.5).astype(np.uint8)
        labels, stats = label_components(m)
        cfg = PruneConfig(int(rng.integers(0, 8)), int(rng.integers(0, 8)))
        res = prune(labels, stats, cfg)
        assert not np.any((res.clean_mask == 1) & (res.low_conf_mask == 1))
        assert np.array_equal(res.clean_mask | res.low_conf_mask, m)
        assert sorted(res.retained_ids + res.removed_ids) == [s.id for s in stats]


@given(masks(), st.integers(0, 20), st.integers(0, 10))
@settings(max_examples=60, deadline=None)
def test_zero_thresholds_identity_and_monotonic(m, min_area, min_extent):
    labels, stats = label_components(m)
    identity = prune(labels, stats, PruneConfig(0, 0))
    assert np.array_equal(identity.clean_mask, m)
    assert identity.low_conf_mask.sum() == 0

    res = prune(labels, stats, PruneConfig(min_area, min_extent))
    stricter = prune(labels, stats, PruneConfig(min_area + 1, min_extent + 1))
    assert set(stricter.retained_ids) <= set(res.retained_ids)


def test_inconsistent_stats_rejected():
    m = np.ones((2, 2), dtype=np.uint8)
    labels, stats = label_components(m)
    bogus = stats + [ComponentStats(id=7, area=1, bbox_x=0, bbox_y=0, bbox_w=1, bbox_h=1)]
    with pytest.raises(ValueError, match="absent"):
        prune(labels, bogus, PruneConfig(0, 0))


def test_negative_thresholds_rejected():
    with pytest.raises(ValueError):
        PruneConfig(-1, 0)


def test_all_removed_is_valid():
    m = np.zeros((10, 10), dtype=np.uint8)
    m[2:4, 2:4] = 1
    labels, stats = label_components(m)
    res = prune(labels, stats, PruneConfig())
    assert res.retained_ids == []
    assert res.clean_mask.sum() == 0
    assert np.array_equal(res.low_conf_mask, m)
