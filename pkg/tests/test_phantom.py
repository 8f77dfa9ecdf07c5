import numpy as np
import pytest

from maskprompt.components import label_components
from maskprompt.phantom import PhantomFitError, PhantomSpec, generate_phantom
from maskprompt.prompting import squared_depth
from maskprompt.pruning import PruneConfig, prune


def test_no_corruption_coarse_equals_gt():
    spec = PhantomSpec(width=200, height=200, noise_blob_count=0, coarse_erosion=0)
    _, gt, coarse = generate_phantom(spec)
    assert np.array_equal(gt, coarse)


def test_same_seed_identical():
    spec = PhantomSpec(width=160, height=160, noise_blob_count=5, coarse_erosion=1,
                       rng_seed=99)
    a = generate_phantom(spec)
    b = generate_phantom(spec)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


def test_different_seed_differs():
    a = generate_phantom(PhantomSpec(width=160, height=160, rng_seed=1))
    b = generate_phantom(PhantomSpec(width=160, height=160, rng_seed=2))
    assert not np.array_equal(a[1], b[1])


def test_blobs_are_separate_small_components():
    spec = PhantomSpec(width=300, height=300, noise_blob_count=8, coarse_erosion=0,
                       noise_blob_max_area=999, rng_seed=3)
    _, gt, coarse = generate_phantom(spec)
    labels, stats = label_components(coarse)
    blob_stats = [s for s in stats if not (gt[labels == s.id]).any()]
    assert len(blob_stats) == 8
    for s in blob_stats:
        assert s.area <= 999
        # blob pixels never touch ribbon pixels
        comp = labels == s.id
        assert not (gt & comp).any()


def test_default_pruning_removes_all_blobs():
    spec = PhantomSpec(width=400, height=400, noise_blob_count=10, coarse_erosion=1,
                       rng_seed=4)
    _, gt, coarse = generate_phantom(spec)
    labels, stats = label_components(coarse)
    res = prune(labels, stats, PruneConfig())
    for s in stats:
        is_blob = not (gt[labels == s.id]).any()
        if is_blob:
            assert s.id in res.removed_ids


def test_ribbon_thickness_within_one():
    for t in (3, 5, 8):
        spec = PhantomSpec(width=300, height=300, ribbon_thickness=t, rng_seed=5)
        _, gt, _ = generate_phantom(spec)
        max_d2 = squared_depth(gt).max()
        est = 2 * (np.sqrt(max_d2) - 1) + 1
        assert abs(est - t) <= 1.5


def test_ribbon_count_spans():
    spec = PhantomSpec(width=400, height=400, ribbon_count=2, rng_seed=6)
    _, gt, _ = generate_phantom(spec)
    labels, stats = label_components(gt)
    assert len(stats) == 2
    for s in stats:
        assert s.bbox_w >= 275 and s.bbox_h >= 275


def test_image_intensities_separate():
    spec = PhantomSpec(width=200, height=200, rng_seed=7)
    img, gt, _ = generate_phantom(spec)
    assert img[gt == 1].min() >= 150
    assert img[gt == 0].max() <= 100


def test_too_small_canvas():
    with pytest.raises(PhantomFitError):
        generate_phantom(PhantomSpec(width=30, height=30, ribbon_count=4,
                                     ribbon_thickness=9))


def test_spec_json_round_trip():
    spec = PhantomSpec(width=128, height=96, rng_seed=11)
    assert PhantomSpec.from_json(spec.to_json()) == spec
