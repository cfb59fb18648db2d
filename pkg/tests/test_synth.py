import numpy as np
import pytest

from nsmvc.baselines import KMeansConfig, kmeans
from nsmvc.metrics import accuracy
from nsmvc.synth import Corruption, SynthSpec, corrupt, generate


def test_shapes_and_balanced_sizes():
    ds, centers = generate(SynthSpec(n=11, k=3, dims=(2, 4), seed=1))
    assert (ds.n, ds.m) == (11, 2)
    assert [v.dim for v in ds.views] == [2, 4]
    assert sorted(np.bincount(ds.labels).tolist()) == [3, 4, 4]
    assert [c.shape for c in centers] == [(2, 3), (4, 3)]
    for c in centers:
        np.testing.assert_allclose(np.linalg.norm(c, axis=0), 5.0)


def test_zero_std_gives_exact_centers():
    ds, centers = generate(SynthSpec(n=9, k=3, dims=(3,), std=0.0, seed=2))
    np.testing.assert_array_equal(ds.views[0].data, centers[0][:, ds.labels])


def test_determinism():
    spec = SynthSpec(n=50, k=4, dims=(3, 3), corruptions=({"view": 1, "mode": "label_shuffle", "strength": 0.5},), seed=5)
    a, _ = generate(spec)
    b, _ = generate(spec)
    for v1, v2 in zip(a.views, b.views):
        np.testing.assert_array_equal(v1.data, v2.data)


def test_separated_blobs_are_recovered():
    ds, _ = generate(SynthSpec(n=200, k=2, dims=(3, 3), separation=20.0, std=0.5, seed=3))
    for view in ds.views:
        r = kmeans(view, KMeansConfig(k=2, seed=0))
        assert accuracy(r.assignments, ds.labels) == 1.0


def test_spec_validation():
    with pytest.raises(ValueError):
        SynthSpec(n=2, k=3, dims=(2,))
    with pytest.raises(ValueError):
        Corruption(0, "gaussian_noise", 1.5)
    with pytest.raises(ValueError):
        SynthSpec(n=10, k=2, dims=(2,), corruptions=({"view": 3, "mode": "gaussian_noise", "strength": 1},))


def test_corrupt_identity_and_shapes(rng):
    X = rng.normal(size=(4, 30))
    for mode in ("gaussian_noise", "label_shuffle"):
        np.testing.assert_array_equal(corrupt(X, mode, 0.0, 1), X)
        assert corrupt(X, mode, 0.7, 1).shape == X.shape
    with pytest.raises(ValueError):
        corrupt(X, "blur", 0.5)


def test_full_noise_is_uncorrelated(rng):
    X = rng.normal(size=(5, 600)) * 3 + 10
    Y = corrupt(X, "gaussian_noise", 1.0, seed=7)
    for f in range(5):
        r = np.corrcoef(X[f], Y[f])[0, 1]
        assert abs(r) < 0.1


def test_shuffle_reproducible_and_permutes_columns(rng):
    X = rng.normal(size=(3, 40))
    a = corrupt(X, "label_shuffle", 1.0, seed=9)
    b = corrupt(X, "label_shuffle", 1.0, seed=9)
    np.testing.assert_array_equal(a, b)
    assert sorted(map(tuple, a.T)) == sorted(map(tuple, X.T))
    assert not np.array_equal(a, X)


def test_shared_labels_across_views():
    ds, _ = generate(SynthSpec(n=30, k=3, dims=(2, 2, 2), seed=4))
    assert ds.labels.shape == (30,)


def test_damage_is_monotone_in_strength():
    means = []
    for strength in (0.0, 0.5, 1.0):
        spec = SynthSpec(
            n=300, k=3, dims=(4,), separation=4.0, std=1.0, seed=11,
            corruptions=({"view": 0, "mode": "gaussian_noise", "strength": strength},),
        )
        ds, _ = generate(spec)
        accs = [accuracy(kmeans(ds.views[0], KMeansConfig(k=3, seed=s)).assignments, ds.labels) for s in range(10)]
        means.append(np.mean(accs))
    assert means[1] <= means[0] + 0.02
    assert means[2] <= means[1] + 0.02
