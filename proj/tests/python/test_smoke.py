import math

import pytest

import etsim


def test_entangled_width_cancels_opposite_dispersion():
    m1 = etsim.DispersiveMedium(beta=1.0, length=2.0)
    m2 = etsim.DispersiveMedium(beta=-1.0, length=2.0)
    assert etsim.quantum_timing_width(1.0, m1, m2) == pytest.approx(1.0, rel=1e-9)
    assert etsim.sigma_T_closed_form(1.0, m1, m2) == pytest.approx(1.0, rel=1e-12)


def test_classical_pulses_keep_their_dispersive_spread():
    m1 = etsim.DispersiveMedium(beta=1.0, length=1.0)
    m2 = etsim.DispersiveMedium(beta=-1.0, length=1.0)
    r = etsim.simulate_pulse_train(1.0, 0.0, m1, m2, n_pulses=20000, seed=3)
    exact = etsim.sigma_C_gaussian_pulses(1.0, m1, m2)
    assert abs(r["time_difference"]["std"] - exact) < 4 * r["std_error_of_std"]


def test_modulation_classical_vs_entangled():
    a = etsim.PhaseModulator(depth=1.0)
    b = etsim.PhaseModulator(depth=1.0, sign=-1)
    assert etsim.delta_squared_classical(a, b) == pytest.approx(1.0, abs=1e-9)
    q = etsim.quantum_modulation(200.0, 0.1, a, b)
    assert q["delta2"] == pytest.approx(q["baseline"], rel=0.05)


def test_interferometer_quantum_and_classical():
    setup = etsim.InterferometerSetup()
    assert etsim.quantum_visibility(setup) == pytest.approx(1.0, abs=1e-12)
    assert etsim.quantum_chsh(setup)["S"] == pytest.approx(2 * math.sqrt(2), abs=1e-9)
    om = etsim.ou_mandel_simulate(setup, trials=20000, n_phases=16, seed=5)
    assert om["visibility"] <= 0.5 + 4 * om["visibility_error"]
    assert etsim.classical_visibility_bound(5.0) < 1e-5


def test_chaotic_g2_survives_identical_media():
    r = etsim.identical_dispersion_experiment(n_records=10, seed=2)
    assert max(r["g2_without"]) == pytest.approx(2.0, abs=0.1)
    assert r["max_difference_sigma"] < 4.0


def test_run_is_deterministic_and_matches_cli_layout():
    a = etsim.run("interferometer", {"delta_t": 6.0}, seed=9, trials=10000)
    b = etsim.run("interferometer", {"delta_t": 6.0}, seed=9, trials=10000, threads=2)
    assert a.data == b.data
    assert a.data.startswith("# schema: etsim.interferometer/1\n")
    assert ".chsh.json" in a.sidecars
    doc = etsim.run("modulation", seed=9, trials=10000, format="json").json()
    assert doc["records"][0]["delta2_classical"] == pytest.approx(1.0)


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        etsim.run("interferometer", {"no_such": 1.0})
    with pytest.raises(etsim.InvalidArgument):
        etsim.InterferometerSetup(delta_T=1.0)
    with pytest.raises(etsim.NumericalGuardError):
        etsim.run("chaotic", {"beta": 100.0}, trials=2)
