import numpy as np
import pytest

from ftgates.distill import (
    NoiseModel,
    build_distillation_circuit,
    execute,
    monte_carlo,
    noise_events,
    run_shot,
)
from ftgates.distill.noise import errors_by_index


def inject(dc, site, letter, seeds=range(8)):
    """Run with one error at ``site``; return (accepted count, fidelities of accepted shots)."""
    ev = noise_events(dc)
    j = next(i for i, e in enumerate(ev) if e.site == site and e.letter == letter)
    acc, fids = 0, []
    for s in seeds:
        traj = execute(dc.circuit, errors_by_index(dc, [j]), np.random.default_rng(s))
        if traj.discard_reason is None:
            acc += 1
            fids.append(abs(np.vdot(dc.target, traj.state.single_qubit_vector())) ** 2)
    return acc, fids


@pytest.mark.parametrize("flag", [False, True])
@pytest.mark.parametrize("mode", ["faithful", "fast"])
def test_noiseless_round_outputs_magic_state(flag, mode):
    dc = build_distillation_circuit(flag, mode)
    for s in range(3):
        traj = execute(dc.circuit, rng=np.random.default_rng(s))
        assert traj.discard_reason is None
        f = abs(np.vdot(dc.target, traj.state.single_qubit_vector())) ** 2
        assert f == pytest.approx(1.0, abs=1e-9)
    # transversal T-dagger is logical T, so the target is T|+> up to a global phase
    w = np.exp(1j * np.pi / 4)
    want = np.array([1, w]) / np.sqrt(2)
    assert abs(np.vdot(want, dc.target)) ** 2 == pytest.approx(1.0, abs=1e-9)


def test_z_on_output_at_epr_gate():
    acc, fids = inject(build_distillation_circuit(), "epr", "Z")
    assert acc == 8
    assert max(fids) < 1e-9


def test_x_on_qubit1_at_key_gate():
    acc, fids = inject(build_distillation_circuit(), "key7", "X")
    assert acc == 8
    assert np.allclose(fids, 0.5)


def test_flag_catches_x_between_flag_cnots():
    acc, _ = inject(build_distillation_circuit(True), "key5", "X")
    assert acc == 0


def test_flag_passes_z_at_flag_in():
    acc, fids = inject(build_distillation_circuit(True), "flag_in", "Z")
    assert acc == 8
    assert max(fids) < 1e-9


def test_peak_register_size():
    dc = build_distillation_circuit(True)
    r = run_shot(dc, NoiseModel(p_other=0.05, seed=1), 0, method="direct")
    assert r.peak_qubits == 17


@pytest.mark.parametrize("flag", [False, True])
def test_fast_path_matches_direct(flag):
    dc = build_distillation_circuit(flag)
    m = NoiseModel(p_key=0.05, p_other=0.02, eps_in=0.03, seed=11)
    for s in range(40):
        a = run_shot(dc, m, s, method="fast")
        b = run_shot(dc, m, s, method="direct")
        assert a.fired == b.fired
        assert a.accepted == b.accepted
        assert a.discard_reason == b.discard_reason
        if a.accepted:
            assert a.output_infidelity == pytest.approx(b.output_infidelity, abs=1e-9)


def test_unknown_method():
    with pytest.raises(ValueError):
        run_shot(build_distillation_circuit(), NoiseModel(), 0, method="magic")


def test_zero_noise_summary():
    s = monte_carlo(NoiseModel(), 50)
    assert s.success_rate == 1.0
    assert s.output_error == 0.0
    assert s.accepted == 50


def test_shots_must_be_positive():
    with pytest.raises(ValueError):
        monte_carlo(NoiseModel(), 0)


def test_deterministic_across_workers():
    m = NoiseModel(p_key=0.01, p_other=0.002, eps_in=0.01, seed=5)
    a = monte_carlo(m, 2100, workers=1, mode="fast")
    b = monte_carlo(m, 2100, workers=3, mode="fast")
    c = monte_carlo(m, 2100, workers=1, mode="fast")
    assert a == b == c


def test_discard_reasons_tallied():
    s = monte_carlo(NoiseModel(p_key=0.05, p_other=0.05, seed=3), 300, flag=True)
    assert sum(s.discards.values()) == s.shots - s.accepted
    assert set(s.discards) <= {"flag", "x_stabilizer"}


def test_ideal_input_suppression():
    s = monte_carlo(NoiseModel(eps_in=0.05, seed=1), 3000, mode="fast")
    assert s.output_error <= 0.2 * 0.05


def test_success_rate_decreases_with_noise():
    rates = [monte_carlo(NoiseModel(p_other=p, seed=8), 1500).success_rate for p in (0.0, 0.005, 0.02)]
    assert rates[0] >= rates[1] >= rates[2]
