import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from glcm_ensemble.errors import EmptyHistogram, InvalidBinCount
from glcm_ensemble.histogram import Histogram, hist_features, histogram
from glcm_ensemble.imaging import GrayImage

images = arrays(np.uint8, st.tuples(st.integers(1, 12), st.integers(1, 12)), elements=st.integers(0, 255))


def per_pixel_oracle(px, n):
    bins = [0] * n
    for row in px:
        for p in row:
            bins[int(p) * n // 256] += 1
    return bins


def test_endpoints_split():
    assert histogram(GrayImage(np.array([[0, 0], [255, 255]])), 2).bins.tolist() == [2, 2]


def test_quartiles():
    assert histogram(GrayImage(np.array([[0, 64, 128, 192]])), 4).bins.tolist() == [1, 1, 1, 1]


@pytest.mark.parametrize("n", [1, 3, 16, 256])
def test_constant_point_mass(n):
    h = histogram(GrayImage(np.full((3, 5), 7)), n)
    assert np.count_nonzero(h.bins) == 1 and h.bins.max() == 15
    assert h.bin_count == n and h.range == (0, 255)


@pytest.mark.parametrize("n", [0, 257, 1.5])
def test_invalid_bin_count(n):
    with pytest.raises(InvalidBinCount):
        histogram(GrayImage(np.zeros((2, 2), np.uint8)), n)


@settings(max_examples=60, deadline=None)
@given(images, st.integers(1, 256))
def test_matches_per_pixel_loop_and_conserves(px, n):
    h = histogram(GrayImage(px), n)
    assert h.bins.tolist() == per_pixel_oracle(px, n)
    assert h.total == px.size


@settings(max_examples=40, deadline=None)
@given(images, st.randoms(use_true_random=False))
def test_permutation_invariance(px, rnd):
    flat = px.ravel().tolist()
    rnd.shuffle(flat)
    shuffled = np.array(flat, dtype=np.uint8).reshape(px.shape)
    assert np.array_equal(histogram(GrayImage(px), 16).bins, histogram(GrayImage(shuffled), 16).bins)


@pytest.mark.parametrize(
    "bins,expected",
    [([2, 2], [0.5, 0.5]), ([4, 0, 0, 0], [1, 0, 0, 0]), ([1, 1, 1, 1], [0.25] * 4)],
)
def test_hist_features(bins, expected):
    fv = hist_features(Histogram(np.array(bins)))
    assert fv.values.tolist() == expected
    assert len(fv.names) == len(bins)


@settings(max_examples=60, deadline=None)
@given(images, st.integers(1, 256))
def test_features_normalized(px, n):
    v = hist_features(histogram(GrayImage(px), n)).values
    assert abs(v.sum() - 1.0) <= 1e-12
    assert np.all((v >= 0) & (v <= 1))


def test_empty_histogram():
    with pytest.raises(EmptyHistogram):
        hist_features(Histogram(np.zeros(4, dtype=np.int64)))
