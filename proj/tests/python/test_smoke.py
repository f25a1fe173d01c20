import math

import numpy as np
import pytest

import qcsvd


def test_sector_sizes():
    assert len(qcsvd.enumerate_sector(4, 0)) == 6
    assert len(qcsvd.enumerate_sector(12, 0)) == 924
    assert qcsvd.enumerate_sector(4, 2).configs == [0b1111]
    with pytest.raises(ValueError):
        qcsvd.enumerate_sector(5, 0.5)


def test_four_site_ground_state():
    g = qcsvd.ed_ground_state(4)
    assert g["energy"] == pytest.approx(-2.0, abs=1e-12)
    expected = np.array([-1, 2, -1, -1, 2, -1]) / math.sqrt(12)
    np.testing.assert_allclose(g["amplitudes"], expected, atol=1e-10)
    s = g["correlation"]
    assert s[0, 1] == pytest.approx(-1 / 6)
    assert s[0, 2] == pytest.approx(1 / 12)


def test_spectrum_and_components():
    s = qcsvd.ed_ground_state(4)["correlation"]
    spec = qcsvd.eigendecompose(s)
    np.testing.assert_allclose(spec.values, [2 / 3, 1 / 6, 1 / 6, 0], atol=1e-10)
    total = sum(qcsvd.component(spec, n) for n in range(1, 5))
    np.testing.assert_allclose(total, s, atol=1e-12)
    pairs, singles = qcsvd.degeneracy_pairs(spec, 1e-10)
    assert pairs == [(2, 3)]
    assert singles == [1, 4]
    assert qcsvd.dominant_wavenumber(spec.vectors[:, 0]) == pytest.approx(math.pi)


def test_against_numpy():
    h = qcsvd.dense_hamiltonian(8)
    e0 = np.linalg.eigvalsh(h)[0]
    assert qcsvd.ed_ground_state(8)["energy"] == pytest.approx(e0, abs=1e-10)


def test_thermal_limits():
    np.testing.assert_array_equal(qcsvd.thermal_correlation(6, 0.0), 0.25 * np.eye(6))
    cold = qcsvd.thermal_correlation(6, 100.0)
    np.testing.assert_allclose(cold, qcsvd.ed_ground_state(6)["correlation"], atol=1e-8)


def test_small_mps():
    out = qcsvd.mps_ground_state(4, chi=4, sweeps=5, seed=1)
    assert out["energy"] == pytest.approx(-2.0, abs=1e-8)
    assert len(out["sweeps"]) == 5


def test_fit_and_kernel():
    lam = np.array([math.exp(-n / 64) / n for n in range(1, 65)])
    spec = qcsvd.eigendecompose(np.diag(np.sqrt(lam)))
    fit = qcsvd.fit_scaling(spec)
    assert fit.power == pytest.approx(-1.0, abs=1e-10)
    assert qcsvd.gamma_half_integral(0.0, math.inf) == pytest.approx(math.sqrt(math.pi), abs=1e-10)
    k = qcsvd.kernel_reconstruct(64, [8, 16, 32])
    assert k.slope < 0


def test_haar_round_trip():
    s = qcsvd.ed_ground_state(8)["correlation"]
    t = qcsvd.haar_transform(s, 3)
    assert np.linalg.norm(t) == pytest.approx(np.linalg.norm(s), abs=1e-12)
    np.testing.assert_allclose(qcsvd.inverse_haar_transform(t, 3), s, atol=1e-12)


def test_oracle4_and_csv(tmp_path):
    o = qcsvd.oracle4()
    assert o["entropies"]["mutual_information"] == pytest.approx(0.5 * math.log(3))
    path = tmp_path / "m.csv"
    qcsvd.write_matrix_csv(path, o["correlation_matrix"])
    np.testing.assert_array_equal(qcsvd.read_matrix_csv(path), o["correlation_matrix"])
    (tmp_path / "bad.csv").write_text("1,2\n3\n")
    with pytest.raises(qcsvd.QcsvdError):
        qcsvd.read_matrix_csv(tmp_path / "bad.csv")
