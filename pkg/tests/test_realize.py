import numpy as np
import pytest

from flagricci.fields import cone_form
from flagricci.flags import make_flag, t_root_table
from flagricci.realize import (
    COEFF_MATRIX,
    circle_point,
    coeffs_to_psd,
    compress_columns,
    disk_membership,
    frame_metric,
    gram,
    is_psd,
    psd_to_coeffs,
    rank1_decompose,
    realizing_frame,
    sample_cone,
    sample_disk,
    sym_sqrt,
)

TABLE = t_root_table(make_flag("A", (1, 1, 1)))


def random_psd(rng, scale=1.0):
    a = rng.normal(size=(2, 2)) * scale
    return a @ a.T


def test_coeff_matrix_is_the_documented_map():
    assert np.array_equal(COEFF_MATRIX, [[1, 0, 0], [0, 1, 0], [1, 1, 2]])
    assert abs(np.linalg.det(COEFF_MATRIX) - 2.0) < 1e-15


def test_frame_metric_on_explicit_frames():
    # rows are the two torus directions; coefficients are the squared
    # lengths of row1, row2, row1 + row2
    frame = np.array([[1.0, 0.0], [0.0, 1.0]])
    assert np.array_equal(frame_metric(TABLE, frame), [1.0, 1.0, 2.0])
    frame = np.array([[2.0, 0.0, 0.0], [1.0, 1.0, 0.0]])
    assert np.array_equal(frame_metric(TABLE, frame), [4.0, 2.0, 10.0])


def test_frame_metric_rejects_wrong_shape():
    with pytest.raises(ValueError):
        frame_metric(TABLE, np.ones((3, 2)))


def test_gram_and_coeff_round_trip():
    rng = np.random.default_rng(7)
    for _ in range(50):
        y = random_psd(rng)
        x = psd_to_coeffs(y)
        back = coeffs_to_psd(x)
        assert np.allclose(back, y, rtol=0, atol=1e-14)


def test_coeffs_to_psd_determinant_tracks_cone_form():
    rng = np.random.default_rng(19)
    pts = rng.uniform(0.05, 1.0, size=(200, 3))
    for x in pts:
        det = np.linalg.det(coeffs_to_psd(x))
        assert det == pytest.approx(-cone_form(x) / 4.0, rel=1e-12, abs=1e-15)


def test_cone_membership_matches_psd():
    rng = np.random.default_rng(23)
    pts = rng.uniform(0.0, 1.0, size=(300, 3))
    for x in pts:
        f = cone_form(x)
        if abs(f) < 1e-9:
            continue
        assert (f <= 0.0) == is_psd(coeffs_to_psd(x))


TAU_CASES = [
    ((0.5, 0.5, 0.0), [[0.5, -0.5], [-0.5, 0.5]]),
    ((0.5, 0.0, 0.5), [[np.sqrt(2.0) / 2.0, 0.0], [0.0, 0.0]]),
    ((0.25, 0.25, 0.5), [[0.5, 0.0], [0.0, 0.5]]),
]


@pytest.mark.parametrize("x,want", TAU_CASES)
def test_realizing_frame_worked_examples(x, want):
    got = realizing_frame(np.array(x))
    assert np.max(np.abs(got - np.array(want))) < 1e-12


def test_realizing_frame_is_a_section():
    rng = np.random.default_rng(31)
    pts = sample_cone(rng, 200)
    for x in pts:
        frame = realizing_frame(x)
        back = frame_metric(TABLE, frame)
        assert np.max(np.abs(back - x)) <= 1e-9 * max(1.0, np.max(np.abs(x)))


def test_realizing_frame_rejects_outside_cone():
    realizing_frame(np.array([1.0, 1.0, 1.0]))  # F = -3, realizable
    with pytest.raises(ValueError):
        realizing_frame(np.array([1.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        realizing_frame(np.array([0.6, 0.1, 0.01]))
    with pytest.raises(ValueError):
        realizing_frame(np.array([-0.1, 0.6, 0.5]))


def test_sym_sqrt_round_trip_and_rejection():
    rng = np.random.default_rng(37)
    for _ in range(100):
        y = random_psd(rng, scale=rng.uniform(0.1, 3.0))
        s = sym_sqrt(y)
        assert np.allclose(s @ s, y, rtol=0, atol=1e-13 * max(1.0, np.abs(y).max()))
        assert np.allclose(s, s.T, rtol=0, atol=0)
    with pytest.raises(ValueError):
        sym_sqrt(np.array([[1.0, 0.0], [0.0, -1.0]]))


def test_rank1_decompose_reconstructs():
    rng = np.random.default_rng(41)
    for _ in range(100):
        y = random_psd(rng)
        parts = rank1_decompose(y)
        assert 1 <= len(parts) <= 2
        total = sum(w * p for w, p in parts)
        assert np.allclose(total, y, rtol=0, atol=1e-12 * max(1.0, np.abs(y).max()))
        for w, p in parts:
            assert w > 0
            # projector: rank one, trace one, idempotent
            assert abs(np.trace(p) - 1.0) < 1e-12
            assert np.allclose(p @ p, p, rtol=0, atol=1e-12)


def test_rank1_images_lie_on_cone():
    rng = np.random.default_rng(43)
    for _ in range(50):
        y = random_psd(rng)
        for _, p in rank1_decompose(y):
            assert abs(cone_form(psd_to_coeffs(p))) < 1e-12


def test_mu_linearity_through_decomposition():
    rng = np.random.default_rng(47)
    for _ in range(50):
        y = random_psd(rng)
        parts = rank1_decompose(y)
        lin = sum(w * psd_to_coeffs(p) for w, p in parts)
        assert np.allclose(lin, psd_to_coeffs(y), rtol=0, atol=1e-12)


def test_compress_columns_matches_rank():
    # a rank-one frame compresses to a single nonzero column
    frame = realizing_frame(np.array([0.5, 0.0, 0.5]))
    out, rot = compress_columns(frame, 1)
    assert out.shape == (2, 2)
    assert np.array_equal(out[:, 1], np.zeros(2))
    assert np.allclose(rot @ rot.T, np.eye(2), rtol=0, atol=1e-14)
    assert np.allclose(frame @ rot, out, rtol=0, atol=1e-12)
    assert frame_metric(TABLE, out) == pytest.approx([0.5, 0.0, 0.5], abs=1e-12)


def test_compress_columns_fixed_example():
    # rotating the boundary frame into a single column
    frame = np.array([[0.5, -0.5], [-0.5, 0.5]])
    out, _ = compress_columns(frame, 1)
    want = np.array([[np.sqrt(2.0) / 2.0, 0.0], [-np.sqrt(2.0) / 2.0, 0.0]])
    assert np.max(np.abs(out - want)) < 1e-12


def test_compress_columns_full_rank_is_orthogonal_change():
    frame = realizing_frame(np.array([0.3, 0.3, 0.4]))
    out, rot = compress_columns(frame, 2)
    # same Gram matrix, therefore the same metric coefficients
    assert np.allclose(gram(out), gram(frame), rtol=0, atol=1e-13)
    assert np.allclose(rot @ rot.T, np.eye(2), rtol=0, atol=1e-14)


def test_compress_columns_rejects_rank_violation():
    frame = realizing_frame(np.array([0.3, 0.3, 0.4]))  # full rank
    with pytest.raises(ValueError):
        compress_columns(frame, 1)
    with pytest.raises(ValueError):
        compress_columns(np.ones((3, 2)), 1)


def test_disk_membership_labels():
    assert disk_membership(np.array([1.0, 1.0, 1.0]) / 3.0) == "interior"
    assert disk_membership(np.array([0.5, 0.5, 0.0])) == "boundary"
    assert disk_membership(np.array([1.0, 0.0, 0.0])) == "outside"
    assert disk_membership(np.array([0.7, 0.2, 0.1])) == "outside"


def test_circle_points_are_on_the_cone_and_simplex():
    for theta in np.linspace(0.0, 2.0 * np.pi, 17):
        x = circle_point(theta)
        assert abs(x.sum() - 1.0) < 1e-14
        assert abs(cone_form(x)) < 1e-14
        assert np.min(x) > -1e-14


def test_sample_disk_stays_inside():
    rng = np.random.default_rng(59)
    pts = sample_disk(rng, 500)
    assert pts.shape == (500, 3)
    assert np.max(np.abs(pts.sum(axis=1) - 1.0)) < 1e-12
    assert np.all(cone_form(pts) <= 1e-12)
    assert np.min(pts) >= -1e-12


def test_sample_cone_hits_the_cone():
    rng = np.random.default_rng(61)
    pts = sample_cone(rng, 300)
    assert pts.shape == (300, 3)
    scale = np.maximum(1.0, np.max(np.abs(pts), axis=1) ** 2)
    assert np.max(np.abs(cone_form(pts)) / scale) < 1e-12
    assert np.min(pts) >= 1e-3 * 0.25 * 0.9  # floor times lowest scale, roughly
