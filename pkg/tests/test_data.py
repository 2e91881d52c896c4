import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qinfoplane.data import (
    PCA,
    Dataset,
    MinMaxScaler,
    PreprocessPipeline,
    box_muller,
    gen_clouds,
    gen_regression,
    load_csv,
    minmax_fit_transform,
    minmax_transform,
    pca_fit_transform,
    pca_transform,
    split,
)
from qinfoplane.errors import (
    InvalidArgumentError,
    InvalidDataError,
    InvalidStateError,
    ParseError,
)
from qinfoplane.infoplane import has_duplicates

from oracles import plugin_entropy


class TestClouds:
    ds = gen_clouds(0)

    def test_shape_and_balance(self):
        assert self.ds.features.shape == (800, 3)
        assert (self.ds.labels == 1).sum() == 400
        assert (self.ds.labels == -1).sum() == 400

    def test_label_entropy(self):
        assert plugin_entropy(self.ds.labels.tolist()) == pytest.approx(1.0, abs=1e-12)

    def test_cloud_means(self):
        for c in range(4):
            xy = self.ds.features[200 * c : 200 * (c + 1), :2]
            assert np.all(np.abs(xy.mean(axis=0)) < 3 / math.sqrt(200))

    def test_tilt_and_offsets(self):
        f = self.ds.features
        for c, a in enumerate((0, 2, 4, 6)):
            rows = f[200 * c : 200 * (c + 1)]
            np.testing.assert_allclose(rows[:, 2], a + rows[:, 0] * 0.5, atol=1e-12)
            assert set(self.ds.labels[200 * c : 200 * (c + 1)]) == {1.0 if a in (2, 6) else -1.0}

    def test_determinism(self):
        np.testing.assert_array_equal(gen_clouds(0).features, self.ds.features)
        assert np.any(gen_clouds(1).features[:200].mean(axis=0) != self.ds.features[:200].mean(axis=0))

    def test_points_distinct(self):
        assert not has_duplicates(self.ds.features)

    def test_box_muller_moments(self):
        z = box_muller(np.random.default_rng(0), 200_001)
        assert z.shape == (200_001,)
        assert abs(z.mean()) < 0.01 and abs(z.std() - 1) < 0.01


def test_regression_generator():
    a, b = gen_regression(3), gen_regression(3)
    np.testing.assert_array_equal(a.features, b.features)
    assert a.features.shape == (400, 6) and np.all((a.features >= 0) & (a.features <= 1))


class TestCsv:
    def write(self, tmp_path, text, name="d.csv"):
        p = tmp_path / name
        p.write_text(text)
        return p

    def test_numeric_echo(self, tmp_path):
        p = self.write(tmp_path, "a,b,label\n1,2.5,0\n3,4,1\n-1,0,1\n")
        ds = load_csv(p, "label")
        np.testing.assert_array_equal(ds.features, [[1, 2.5], [3, 4], [-1, 0]])
        np.testing.assert_array_equal(ds.labels, [0, 1, 1])
        assert ds.feature_names == ["a", "b"]

    def test_missing_cell_dropped(self, tmp_path):
        p = self.write(tmp_path, "a,b,label\n1,2,0\n3,,1\n5,6,1\n")
        ds = load_csv(p, "label")
        assert len(ds) == 2 and ds.dropped_rows == 1

    def test_na_token(self, tmp_path):
        p = self.write(tmp_path, "bmi,label\n22.1,0\nN/A,1\n30,1\n")
        assert load_csv(p, "label").dropped_rows == 1

    def test_categorical_one_hot(self, tmp_path):
        p = self.write(tmp_path, "x,kind,label\n1,A,0\n2,B,1\n3,A,1\n")
        ds = load_csv(p, "label", {"categorical": {"kind": None}})
        assert ds.feature_names == ["x", "kind=A", "kind=B"]
        np.testing.assert_array_equal(ds.features[:, 1:].sum(axis=1), 1)
        np.testing.assert_array_equal(ds.features[:, 1], [1, 0, 1])

    def test_parse_error_location(self, tmp_path):
        p = self.write(tmp_path, "a,label\n1,0\nabc,1\n")
        with pytest.raises(ParseError) as exc:
            load_csv(p, "label")
        assert exc.value.row == 3 and exc.value.col == 1

    def test_unknown_level(self, tmp_path):
        p = self.write(tmp_path, "k,label\nA,0\nC,1\n")
        with pytest.raises(ParseError):
            load_csv(p, "label", {"categorical": {"k": ["A", "B"]}})

    def test_all_rows_missing(self, tmp_path):
        p = self.write(tmp_path, "a,label\n,0\n")
        with pytest.raises(InvalidDataError):
            load_csv(p, "label")

    def test_drop_column(self, tmp_path):
        p = self.write(tmp_path, "id,a,label\nx1,1,0\nx2,2,1\n")
        ds = load_csv(p, "label", {"drop": ["id"]})
        assert ds.feature_names == ["a"]


class TestMinMax:
    def test_basic(self):
        out, s = minmax_fit_transform(np.array([[2.0], [4.0]]))
        np.testing.assert_array_equal(out, [[0], [1]])
        np.testing.assert_array_equal(minmax_transform(s, np.array([[5.0]])), [[1.5]])

    def test_constant_column(self):
        out, _ = minmax_fit_transform(np.array([[3.0, 1.0], [3.0, 2.0]]))
        np.testing.assert_array_equal(out[:, 0], 0)

    def test_transform_before_fit(self):
        with pytest.raises(InvalidStateError):
            MinMaxScaler().transform(np.zeros((1, 1)))


class TestPca:
    def test_exact_subspace(self):
        rng = np.random.default_rng(0)
        q, _ = np.linalg.qr(rng.normal(size=(5, 5)))
        x = rng.normal(size=(50, 2)) @ q[:, :2].T + 3.0
        proj, p = pca_fit_transform(x, 2)
        recon = proj @ p.components_.T + p.mean_
        np.testing.assert_allclose(recon, x, atol=1e-10)

    def test_orthonormal_and_variance_trace(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(100, 6)) @ rng.normal(size=(6, 6))
        p = PCA(6).fit(x)
        np.testing.assert_allclose(p.components_.T @ p.components_, np.eye(6), atol=1e-10)
        ev = p.explained_variance_
        assert np.all(np.diff(ev) <= 1e-12)
        assert ev.sum() == pytest.approx(np.trace(np.cov(x, rowvar=False)), abs=1e-8)

    def test_sign_convention(self):
        x = np.random.default_rng(2).normal(size=(40, 4))
        comps = PCA(3).fit(x).components_
        for c in comps.T:
            assert c[np.argmax(np.abs(c))] > 0

    def test_k_too_large(self):
        with pytest.raises(InvalidArgumentError):
            PCA(4).fit(np.zeros((5, 3)))

    def test_inner_products_in_subspace(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=(30, 5))
        proj, p = pca_fit_transform(x, 3)
        centered = x - p.mean_
        inside = centered @ p.components_ @ p.components_.T
        np.testing.assert_allclose(proj @ proj.T, inside @ inside.T, atol=1e-8)
        np.testing.assert_allclose(pca_transform(p, x), proj)


class TestSplit:
    ds = gen_clouds(0)

    def test_sizes(self):
        tr, te = split(self.ds, (0.8, 0.2), 0)
        assert (len(tr), len(te)) == (640, 160)

    def test_reproducible(self):
        a = split(self.ds, (0.8, 0.2), 5)
        b = split(self.ds, (0.8, 0.2), 5)
        np.testing.assert_array_equal(a[0].features, b[0].features)

    def test_bad_fractions(self):
        with pytest.raises(InvalidArgumentError):
            split(self.ds, (0.7, 0.2), 0)
        tiny = Dataset(np.zeros((2, 1)), [0, 1])
        with pytest.raises(InvalidArgumentError):
            split(tiny, (0.8, 0.1, 0.1), 0)

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(3, 300), a=st.floats(0.2, 0.6), seed=st.integers(0, 10**6))
    def test_disjoint_exhaustive(self, n, a, seed):
        ds = Dataset(np.arange(n, dtype=float)[:, None], np.zeros(n))
        parts = split(ds, (a, 1 - a - 0.1, 0.1), seed) if n >= 30 else split(ds, (a, 1 - a), seed)
        ids = np.concatenate([p.features[:, 0] for p in parts])
        assert sorted(ids.tolist()) == list(range(n))


def test_pipeline_no_leakage():
    rng = np.random.default_rng(0)
    train = rng.normal(size=(60, 8))
    test_a = rng.normal(size=(20, 8))
    test_b = test_a * 100 + 7
    pipe = PreprocessPipeline(["minmax", ("pca", 3)])
    out_a = pipe.fit_transform(train)
    pipe.transform(test_a)
    pipe_b = PreprocessPipeline(["minmax", ("pca", 3)])
    out_b = pipe_b.fit_transform(train)
    pipe_b.transform(test_b)
    np.testing.assert_array_equal(out_a, out_b)
    # statistics come from train only
    both = PreprocessPipeline(["minmax"]).fit(np.vstack([train, test_b]))
    assert not np.allclose(both.transform(train), PreprocessPipeline(["minmax"]).fit_transform(train))
    with pytest.raises(InvalidStateError):
        PreprocessPipeline(["minmax"]).transform(train)
