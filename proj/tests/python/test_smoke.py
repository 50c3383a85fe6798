import math

import numpy as np
import pytest

import rydswap

MHZ = 2 * math.pi


def test_swap_gate_fidelity():
    rep = rydswap.run_gate("SWAP")
    u = np.asarray(rep["u_gate"])
    assert u.shape == (4, 4)
    assert rep["fidelity"] == pytest.approx(0.9954, abs=2e-3)
    assert 0.0 < rep["mean_loss"] < 0.02


def test_process_fidelity_of_identity():
    ideal = np.eye(4, dtype=complex)
    assert rydswap.process_fidelity(ideal, ideal) == pytest.approx(1.0)
    assert rydswap.process_fidelity(np.exp(0.3j) * ideal, ideal) == pytest.approx(1.0)


def test_effective_params():
    e = rydswap.effective_params(33.5 * MHZ, 190.8 * MHZ, 999.73 * MHZ, 0.0)
    assert e["a"] / MHZ == pytest.approx(2.2605, abs=2e-4)
    assert e["omega_eff"] / MHZ == pytest.approx(-0.18707, abs=5e-5)
    assert np.linalg.norm(e["eigvec_minus"]) == pytest.approx(1.0)


def test_params_are_editable():
    p = rydswap.table1_params("SWAP")
    p.gate_time = 2.0
    assert rydswap.table1_params("SWAP").gate_time == pytest.approx(4.7259)
    assert p.gate_time == 2.0


def test_presets_listed():
    names = rydswap.list_presets()
    assert "table1_swap" in names
    assert names == sorted(names)


def test_unknown_key_raises():
    with pytest.raises(rydswap.ConfigError):
        rydswap.run_scenario("table1_swap", ["params.omega3_mhz=1"])


def test_model_error_on_bad_variant():
    with pytest.raises(rydswap.ModelError):
        rydswap.run_gate("FOO")
