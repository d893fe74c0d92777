"""Acceptance criteria 1-10.

Each test prints one ``CRITERION n: PASS|FAIL ...`` line and the collected
lines are repeated in the pytest terminal summary. Run directly with
``python tests/test_acceptance.py`` for the lines alone.
"""

from __future__ import annotations

import math
import sys
import time
from pathlib import Path

import pytest

from ftgates import cli, cupz, verify
from ftgates.concat import verify_transversal_claims
from ftgates.distill import NoiseModel, fidelity_to_p, monte_carlo

# pinned tolerances and sample sizes
TOL = 1e-9
SLOPE_REL_TOL = 0.10
SIGMAS = 3.0
SEED = 20240611
SLOPE_FIDELITIES = (0.998, 0.995, 0.99)
SLOPE_SHOTS = 100_000
BREAK_EVEN_SHOTS = 100_000
BREAK_EVEN_FIDELITY = 0.995
RATE_GRID = (0.001, 0.003, 0.007)
RATE_SHOTS = 25_000
DETERMINISM_SHOTS = 2_500
TARGET_SLOPES = {False: 3.5, True: 2.5}

RESULTS: dict[int, str] = {}


def record(n: int, passed: bool, detail: str) -> bool:
    line = f"CRITERION {n}: {'PASS' if passed else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line, flush=True)
    return passed


def _suite(name: str) -> tuple[bool, list, float]:
    t = time.perf_counter()
    checks = verify.SUITES[name]()
    return all(c.passed for c in checks), checks, time.perf_counter() - t


def _failed(checks) -> str:
    bad = [f"{c.name} ({c.value})" for c in checks if not c.passed]
    return "; failed: " + ", ".join(bad) if bad else ""


# ---------------------------------------------------------------------------


def criterion_1() -> bool:
    ok, checks, dt = _suite("qrm")
    phase = next(c for c in checks if c.name.startswith("T^dagger"))
    return record(1, ok and dt < 10, f"QRM15 structure, {phase.value}, {dt:.2f}s" + _failed(checks))


def criterion_2() -> bool:
    ok, checks, dt = _suite("encoder")
    return record(2, ok and dt < 30, f"{len(checks)} encoder checks, {dt:.2f}s" + _failed(checks))


def criterion_3() -> bool:
    ok, checks, dt = _suite("oracle")
    vals = ", ".join(c.value for c in checks[:3])
    return record(3, ok and dt < 10, f"slopes {vals}, {dt:.2f}s" + _failed(checks))


def mc_slope(flag: bool) -> tuple[float, list]:
    """Least-squares slope through the origin of output_error against p_key."""
    pts = []
    for f in SLOPE_FIDELITIES:
        p = fidelity_to_p(f)
        s = monte_carlo(NoiseModel(p_key=p, seed=SEED), SLOPE_SHOTS, flag=flag)
        pts.append((p, s.output_error, s.output_error_stderr))
    slope = math.fsum(p * y for p, y, _ in pts) / math.fsum(p * p for p, _, _ in pts)
    return slope, pts


def criterion_4() -> bool:
    t = time.perf_counter()
    parts, ok = [], True
    for flag, want in TARGET_SLOPES.items():
        slope, _ = mc_slope(flag)
        good = abs(slope - want) <= SLOPE_REL_TOL * want
        ok &= good
        parts.append(f"{'flagged' if flag else 'plain'} {slope:.3f} (target {want})")
    dt = time.perf_counter() - t
    return record(4, ok, ", ".join(parts) + f", {SLOPE_SHOTS} shots/point, {dt:.0f}s")


def break_even_point(eps_in: float):
    m = NoiseModel.from_fidelities(gate_fidelity=BREAK_EVEN_FIDELITY, eps_in=eps_in, seed=SEED)
    return monte_carlo(m, BREAK_EVEN_SHOTS)


def criterion_5() -> bool:
    t = time.perf_counter()
    hi = break_even_point(0.01)
    lo = break_even_point(0.005)
    below = hi.output_error + SIGMAS * hi.output_error_stderr < 0.01
    above = lo.output_error - SIGMAS * lo.output_error_stderr > 0.005
    dt = time.perf_counter() - t
    return record(
        5,
        below and above,
        f"eps_in=0.01 -> {hi.output_error:.5f}+-{hi.output_error_stderr:.5f}, "
        f"eps_in=0.005 -> {lo.output_error:.5f}+-{lo.output_error_stderr:.5f}, {dt:.0f}s",
    )


def rate_gaps() -> list[tuple[float, float, float]]:
    """(p, gap, stderr of gap) with gap = plain - flagged success rate."""
    out = []
    for p in RATE_GRID:
        m = NoiseModel(p_key=p, p_other=p, seed=SEED)
        a = monte_carlo(m, RATE_SHOTS, flag=False)
        b = monte_carlo(m, RATE_SHOTS, flag=True)
        gap = a.success_rate - b.success_rate
        out.append((p, gap, math.hypot(a.success_rate_stderr, b.success_rate_stderr)))
    return out


def criterion_6() -> bool:
    t = time.perf_counter()
    gaps = rate_gaps()
    ok = all(g > SIGMAS * s for _, g, s in gaps)
    for (_, g0, s0), (_, g1, s1) in zip(gaps, gaps[1:]):
        ok &= g1 - g0 > SIGMAS * math.hypot(s0, s1)
    dt = time.perf_counter() - t
    desc = ", ".join(f"p={p:g}: {g:.4f}+-{s:.4f}" for p, g, s in gaps)
    return record(6, ok, f"plain - flagged success rate {desc}, {dt:.0f}s")


def criterion_7() -> bool:
    t = time.perf_counter()
    c = verify.concat_costs(150.0)
    lo, hi = verify.concat_costs(100.0), verify.concat_costs(200.0)
    dt = time.perf_counter() - t
    slope_t = (hi["T_total"] - lo["T_total"]) / 100.0
    slope_h = (hi["H_worst"] - lo["H_worst"]) / 100.0
    ok = (
        c["T_moving"] == 240.0
        and c["T_total"] == 840.0
        and c["H_worst"] == 3760.0
        and slope_t == 4.0
        and slope_h == 16.0
        and dt < 1.0
    )
    return record(
        7,
        ok,
        f"T {c['T_moving']:g}/{c['T_total']:g} us, H worst {c['H_worst']:g} us, "
        f"coefficients {slope_t:g}/{slope_h:g}, {dt * 1e3:.1f}ms",
    )


def criterion_8() -> bool:
    t = time.perf_counter()
    checks = verify_transversal_claims(TOL)
    dt = time.perf_counter() - t
    ok = all(c.passed for c in checks) and dt < 60
    worst = max(c.error for c in checks)
    bad = [c.name for c in checks if not c.passed]
    return record(8, ok, f"{len(checks)} transversal checks, max error {worst:.1e}, {dt:.2f}s" + (f"; failed: {bad}" if bad else ""))


def criterion_9() -> bool:
    t = time.perf_counter()
    ok2, c2, _ = _suite("cupz2d")
    ok3, c3, _ = _suite("cupz3d")
    ident = cupz.verify_conjugation_identity(3, 2)
    dt = time.perf_counter() - t
    ok = ok2 and ok3 and ident.classification != "fail" and dt < 60
    return record(
        9,
        ok,
        f"2D {c2[1].value}; 3D {ident.classification} ({ident.method}); control {c3[1].value}, {dt:.2f}s"
        + _failed(c2 + c3),
    )


def _sweep(path: Path, workers: int) -> bytes:
    argv = [
        "distill",
        "--input-noise", "0.005", "0.01",
        "--gate-fidelity", "0.995",
        "--shots", str(DETERMINISM_SHOTS),
        "--seed", str(SEED),
        "--workers", str(workers),
        "--output", str(path),
    ]
    if cli.main(argv) != 0:
        raise RuntimeError("sweep failed")
    return path.read_bytes()


def criterion_10(tmp: Path) -> bool:
    a = _sweep(tmp / "w1.csv", 1)
    b = _sweep(tmp / "w3.csv", 3)
    c = _sweep(tmp / "w1_again.csv", 1)
    ok = a == b == c
    return record(10, ok, f"{len(a)} bytes, workers 1/3/1 {'identical' if ok else 'differ'}")


# ---------------------------------------------------------------------------


def test_criterion_1_qrm_structure():
    assert criterion_1()


def test_criterion_2_encoder():
    assert criterion_2()


def test_criterion_3_oracle_slopes():
    assert criterion_3()


@pytest.mark.slow
def test_criterion_4_monte_carlo_slopes():
    assert criterion_4()


@pytest.mark.slow
def test_criterion_5_break_even():
    assert criterion_5()


@pytest.mark.slow
def test_criterion_6_flag_rate():
    assert criterion_6()


def test_criterion_7_concat_timings():
    assert criterion_7()


def test_criterion_8_transversality():
    assert criterion_8()


def test_criterion_9_cup_product():
    assert criterion_9()


def test_criterion_10_determinism(tmp_path):
    assert criterion_10(tmp_path)


def main() -> int:
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        runs = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
                criterion_7, criterion_8, criterion_9, lambda: criterion_10(Path(d))]
        ok = [f() for f in runs]
    return 0 if all(ok) else 1


if __name__ == "__main__":
    sys.exit(main())
