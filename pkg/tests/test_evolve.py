import numpy as np
import pytest

from acqc.errors import DimensionError, IntegrationError
from acqc.evolve import (
    EvolutionConfig,
    StateVector,
    bitstring_to_index,
    build_protocol_schedule,
    evolve,
    evolve_trajectory,
    ground_state_fidelity,
    index_to_bitstring,
    run_protocol,
    sample_bitstrings,
)
from acqc.graph import CostParams, GridSpec, MisSolution, generate_kings_graph
from acqc.hamiltonian import RydbergHamiltonian, build_interactions, zero_interactions
from acqc.schedule import (
    DriveSchedule,
    HardwareLimits,
    constant_waveform,
    smooth_schedule,
)


def _flat(omega: float, delta: float, T: float = 1.0) -> DriveSchedule:
    return DriveSchedule(
        omega=constant_waveform(omega, T),
        delta=constant_waveform(delta, T),
        phase=constant_waveform(0.0, T),
        total_time=T,
        limits=HardwareLimits(),
        protocol="flat",
    )


def test_state_vector_basics():
    psi = StateVector.ground(3)
    assert psi.amplitudes.shape == (8,)
    assert psi.norm() == pytest.approx(1.0)
    assert psi.probabilities()[0] == pytest.approx(1.0)
    with pytest.raises(DimensionError):
        StateVector(amplitudes=np.zeros(5, dtype=complex), n_qubits=2)


def test_bitstring_round_trip():
    assert index_to_bitstring(1, 4) == "1000"
    assert index_to_bitstring(4, 4) == "0010"
    assert bitstring_to_index("0010") == 4
    for idx in range(16):
        assert bitstring_to_index(index_to_bitstring(idx, 4)) == idx
    with pytest.raises(ValueError):
        bitstring_to_index("01x")


def test_config_validation():
    with pytest.raises(ValueError):
        EvolutionConfig(order=5)
    with pytest.raises(ValueError):
        EvolutionConfig(dt_max=0.0)
    with pytest.raises(ValueError):
        EvolutionConfig(norm_tolerance=-1.0)


def test_detuning_only_evolution_is_a_phase():
    # omega = 0 keeps populations frozen; |0...0> stays put exactly.
    h = RydbergHamiltonian(zero_interactions(2), _flat(0.0, 5.0))
    psi = evolve(h)
    assert abs(psi.amplitudes[0]) == pytest.approx(1.0, abs=1e-9)


def test_rabi_oscillation_half_period():
    # Resonant constant drive for time pi/omega flips a lone qubit.
    omega = 4.0
    T = np.pi / omega
    h = RydbergHamiltonian(zero_interactions(1), _flat(omega, 0.0, T))
    psi = evolve(h)
    assert abs(psi.amplitudes[1]) ** 2 == pytest.approx(1.0, abs=1e-8)
    assert abs(psi.amplitudes[0]) ** 2 == pytest.approx(0.0, abs=1e-8)


def test_norm_is_conserved_along_trajectory():
    g = generate_kings_graph(GridSpec(rows=3, cols=3, n_nodes=5, seed=2))
    h = RydbergHamiltonian(
        build_interactions(g), smooth_schedule(HardwareLimits(), 0.5)
    )
    states = evolve_trajectory(h, np.linspace(0.0, 0.5, 11))
    for s in states:
        assert s.norm() == pytest.approx(1.0, abs=1e-6)


def test_trajectory_time_validation():
    h = RydbergHamiltonian(zero_interactions(1), _flat(1.0, 0.0))
    with pytest.raises(ValueError):
        evolve_trajectory(h, [])
    with pytest.raises(ValueError):
        evolve_trajectory(h, [-0.1, 0.5])
    with pytest.raises(ValueError):
        evolve_trajectory(h, [0.5, 1.5])


def test_norm_drift_raises():
    # Lift the step cap and loosen the controller so the final norm
    # visibly drifts, then demand better than it can deliver.
    h = RydbergHamiltonian(zero_interactions(2), _flat(12.0, 9.0))
    config = EvolutionConfig(
        dt_max=1.0, order=4, rtol=1e-2, atol=1e-2, norm_tolerance=1e-14
    )
    with pytest.raises(IntegrationError):
        evolve(h, config)


def test_renormalize_option():
    h = RydbergHamiltonian(zero_interactions(2), _flat(5.0, 3.0))
    psi = evolve(h, EvolutionConfig(renormalize=True))
    assert psi.norm() == pytest.approx(1.0, abs=1e-15)


def test_order_markers_agree():
    h = RydbergHamiltonian(
        zero_interactions(2), smooth_schedule(HardwareLimits(), 0.3)
    )
    p8 = evolve(h, EvolutionConfig(order=8))
    p4 = evolve(h, EvolutionConfig(order=4))
    assert np.linalg.norm(p8.amplitudes - p4.amplitudes) < 1e-6


def test_ground_state_fidelity():
    amps = np.zeros(4, dtype=complex)
    amps[1] = np.sqrt(0.3)  # "10"
    amps[2] = np.sqrt(0.7)  # "01"
    psi = StateVector(amplitudes=amps, n_qubits=2)
    mis = MisSolution(size=1, witnesses=("10", "01"), energy=-1.0)
    assert ground_state_fidelity(psi, mis) == pytest.approx(1.0)
    mis_single = MisSolution(size=1, witnesses=("01",), energy=-1.0)
    assert ground_state_fidelity(psi, mis_single) == pytest.approx(0.7)
    with pytest.raises(ValueError):
        ground_state_fidelity(psi, MisSolution(size=0, witnesses=(), energy=0.0))
    with pytest.raises(DimensionError):
        ground_state_fidelity(psi, MisSolution(size=1, witnesses=("100",), energy=-1.0))


def test_sampling_is_deterministic_and_counts_to_shots():
    amps = np.sqrt(np.array([0.5, 0.25, 0.125, 0.125], dtype=complex))
    psi = StateVector(amplitudes=amps, n_qubits=2)
    a = sample_bitstrings(psi, 1000, seed=7)
    b = sample_bitstrings(psi, 1000, seed=7)
    c = sample_bitstrings(psi, 1000, seed=8)
    assert a == b
    assert a != c
    assert sum(cnt for _, cnt in a) == 1000
    indices = [bitstring_to_index(bs) for bs, _ in a]
    assert indices == sorted(indices)


def test_sampling_matches_distribution():
    amps = np.sqrt(np.array([0.8, 0.2, 0.0, 0.0], dtype=complex))
    psi = StateVector(amplitudes=amps, n_qubits=2)
    counts = dict(sample_bitstrings(psi, 20000, seed=1))
    assert counts["00"] / 20000 == pytest.approx(0.8, abs=0.02)
    assert counts.get("01", 0) == 0


def test_build_protocol_schedule_names():
    for name, proto in (
        ("linear", "linear"),
        ("smooth", "smooth"),
        ("acqc", "acqc"),
        ("acqc-zrot", "acqc-zrot"),
    ):
        s = build_protocol_schedule(name, 0.5)
        assert s.protocol == proto
        assert s.total_time == pytest.approx(0.5)
    with pytest.raises(ValueError):
        build_protocol_schedule("bogus", 0.5)


def test_run_protocol_end_to_end():
    g = generate_kings_graph(GridSpec(rows=3, cols=3, n_nodes=5, seed=6))
    res = run_protocol(g, "smooth", 0.5, shots=200, seed=3)
    assert res.protocol == "smooth"
    assert res.shots == 200
    assert sum(c for _, c in res.samples) == 200
    assert len(res.energies) == len(res.samples)
    assert 0.0 <= res.ground_population <= 1.0
    assert res.params["mis_size"] >= 1
    e = dict(zip([b for b, _ in res.samples], res.energies))
    cost = CostParams()
    for b in e:
        assert len(b) == g.n_vertices
    doc = res.to_dict()
    assert doc["cost"] == {"A": cost.penalty, "B": cost.reward}
    assert doc["T_us"] == pytest.approx(0.5)
    assert doc["schedule"]["protocol"] == "smooth"


def test_run_protocol_acqc_records_excess():
    g = generate_kings_graph(GridSpec(rows=3, cols=3, n_nodes=3, seed=1))
    res = run_protocol(g, "acqc", 0.5, shots=50, seed=0)
    assert res.params["omega_excess"] > 0.0
    assert res.params["clip_fraction"] == 0.0
    clamped = run_protocol(g, "acqc", 0.5, shots=50, seed=0, clamp_limits=True)
    assert clamped.params["omega_peak"] <= 15.0 + 1e-9
    assert clamped.params["clip_fraction"] > 0.0


def test_run_protocol_validation():
    g = generate_kings_graph(GridSpec(rows=3, cols=3, n_nodes=3, seed=1))
    with pytest.raises(ValueError):
        run_protocol(g, "smooth", 0.0)
    with pytest.raises(ValueError):
        run_protocol(g, "smooth", 1.0, shots=0)
    with pytest.raises(ValueError):
        run_protocol(g, "bogus", 1.0)


def test_run_result_save(tmp_path):
    g = generate_kings_graph(GridSpec(rows=3, cols=3, n_nodes=3, seed=1))
    res = run_protocol(g, "smooth", 0.3, shots=20, seed=0)
    path = tmp_path / "r.json"
    res.save(path)
    import json

    doc = json.loads(path.read_text())
    assert doc["shots"] == 20
    assert sum(s["count"] for s in doc["samples"]) == 20
