from collections import Counter

import numpy as np
import pytest

from ftgates.distill import build_distillation_circuit, execute, first_order_oracle, noise_events
from ftgates.distill.noise import errors_by_index
from ftgates.distill.oracle import CATEGORIES, Residue, _Evaluator, residue_of

# (kind, category) -> count, frozen; test_oracle_agrees_with_statevector
# checks the classes independently by fault injection.
FROZEN = {
    (False, "faithful"): {
        ("input", "detected"): 15,
        ("key", "detected"): 4,
        ("key", "output_S"): 5,
        ("key", "output_Z"): 1,
        ("other", "detected"): 45,
        ("other", "half_detected"): 45,
    },
    (True, "faithful"): {
        ("input", "detected"): 15,
        ("key", "detected"): 1,
        ("key", "output_S"): 1,
        ("key", "output_Z"): 2,
        ("other", "detected"): 63,
        ("other", "half_detected"): 45,
    },
    (False, "fast"): {
        ("input", "detected"): 15,
        ("key", "detected"): 4,
        ("key", "output_S"): 5,
        ("key", "output_Z"): 1,
        ("other", "detected"): 30,
        ("other", "half_detected"): 30,
    },
}


@pytest.fixture(scope="module")
def results():
    return {k: first_order_oracle(build_distillation_circuit(*k)) for k in FROZEN}


@pytest.mark.parametrize("key", list(FROZEN))
def test_category_counts_frozen(results, key):
    got = Counter((e.kind, e.category) for e in results[key].events)
    assert dict(got) == FROZEN[key]


def test_slopes(results):
    plain = results[(False, "faithful")]
    flagged = results[(True, "faithful")]
    assert plain.slope_key == 3.5
    assert flagged.slope_key == 2.5
    assert plain.slope_other == 0.0 and flagged.slope_other == 0.0
    assert plain.slope_input == 0.0
    assert plain.rate_slope_key == 4.0
    assert plain.rate_slope_other == 67.5
    assert flagged.rate_slope_other == 85.5
    assert plain.rate_slope_input == 15.0


def test_fast_mode_drops_gadget_rate(results):
    assert results[(False, "fast")].rate_slope_other == 45.0
    assert results[(False, "fast")].slope_key == 3.5


def test_key_breakdown(results):
    key = {(e.site, e.letter): e.category for e in results[(False, "faithful")].events if e.kind == "key"}
    assert key[("epr", "Z")] == "output_Z"
    assert key[("epr", "X")] == "output_S"
    for p in (5, 7, 8, 11):
        assert key[(f"key{p}", "X")] == "output_S"
        assert key[(f"key{p}", "Z")] == "detected"


def test_evaluator_identity_residue():
    dc = build_distillation_circuit()
    ev = _Evaluator(dc.target)
    zeros = (0,) * 15
    acc, fid = ev(Residue(0, zeros, zeros, zeros))
    assert acc == pytest.approx(1.0, abs=1e-12)
    assert fid == pytest.approx(1.0, abs=1e-12)
    acc, fid = ev(Residue(1, zeros, zeros, zeros))
    assert fid == pytest.approx(0.0, abs=1e-12)


def test_categories_table():
    assert CATEGORIES["output_S"] == (1.0, 0.5)
    assert CATEGORIES["half_detected"] == (0.5, 1.0)


def test_flag_catches_residue():
    dc = build_distillation_circuit(True)
    ev = next(e for e in noise_events(dc) if e.site == "key5" and e.letter == "X")
    assert residue_of(dc, ev) is None


def _statevector_outcomes(dc, j, seeds):
    acc, fids = 0, []
    for s in seeds:
        traj = execute(dc.circuit, errors_by_index(dc, [j]), np.random.default_rng(s))
        if traj.discard_reason is None:
            acc += 1
            fids.append(abs(np.vdot(dc.target, traj.state.single_qubit_vector())) ** 2)
    return acc, fids


@pytest.mark.parametrize("flag", [False, True])
def test_oracle_agrees_with_statevector(results, flag):
    """Inject each single fault and compare with its predicted class."""
    dc = build_distillation_circuit(flag)
    res = results[(flag, "faithful")]
    seeds = range(24)
    for j, e in enumerate(res.events):
        if e.kind == "other" and j % 3:
            continue  # a third of the bulk sites keeps the runtime short
        acc, fids = _statevector_outcomes(dc, j, seeds)
        if e.category == "detected":
            assert acc == 0, e
        elif e.category == "half_detected":
            assert 0 < acc < len(seeds), e
            assert np.allclose(fids, 1.0, atol=1e-9), e
        else:
            assert acc == len(seeds), e
            assert np.allclose(fids, e.fidelity, atol=1e-9), e
