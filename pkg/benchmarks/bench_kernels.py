"""Compare the compiled and numpy statevector kernels.

Times each kernel on random states of several sizes, then a batch of noisy
distillation shots end to end. Prints one line per (case, backend) and the
speed-up of the compiled kernels over the fallback.

    python benchmarks/bench_kernels.py --qubits 12 16 18 --repeat 5
"""

from __future__ import annotations

import argparse
import json
import timeit

import numpy as np

from ftgates.distill import NoiseModel, build_distillation_circuit, run_shot
from ftgates.statevec import kernels


def random_state(n: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def kernel_cases(k, n: int):
    psi = random_state(n)
    h = 2**-0.5
    mid = n // 2
    return {
        "apply_1q": lambda: k.apply_1q(psi, mid, h, h, h, -h),
        "apply_cnot": lambda: k.apply_cnot(psi, mid, 0),
        "apply_diag_mask": lambda: k.apply_diag_mask(psi, 0b101, -1.0),
        "apply_pauli": lambda: k.apply_pauli(psi, 0b1010, 0b0110),
        "prob_one": lambda: k.prob_one(psi, mid),
        "collapse": lambda: k.collapse(psi, mid, 0, 1.0),
    }


def time_call(fn, repeat: int, number: int) -> float:
    """Best-of-``repeat`` seconds per call."""
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def bench_kernels(sizes, repeat: int) -> list[dict]:
    rows = []
    for n in sizes:
        number = max(1, 2 ** max(0, 20 - n))
        for backend in kernels.available():
            k = kernels.get(backend)
            for name, fn in kernel_cases(k, n).items():
                rows.append(
                    {"case": f"{name} n={n}", "backend": backend, "seconds": time_call(fn, repeat, number)}
                )
    return rows


def bench_shots(shots: int, repeat: int, flag: bool) -> list[dict]:
    dc = build_distillation_circuit(flag)
    model = NoiseModel.from_fidelities(gate_fidelity=0.99, eps_in=0.01, seed=1)
    rows = []
    for backend in kernels.available():
        def go():
            for s in range(shots):
                run_shot(dc, model, s, method="direct", backend=backend)

        go()  # warm caches
        rows.append(
            {
                "case": f"{shots} direct shots{' flagged' if flag else ''}",
                "backend": backend,
                "seconds": time_call(go, repeat, 1),
            }
        )
    return rows


def speedups(rows: list[dict]) -> dict:
    by_case: dict = {}
    for r in rows:
        by_case.setdefault(r["case"], {})[r["backend"]] = r["seconds"]
    return {c: t["numpy"] / t["cython"] for c, t in by_case.items() if "cython" in t and "numpy" in t}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, nargs="+", default=[10, 14, 18])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--shots", type=int, default=20)
    ap.add_argument("--flag", action="store_true")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)

    rows = bench_kernels(args.qubits, args.repeat) + bench_shots(args.shots, args.repeat, args.flag)
    ratio = speedups(rows)
    if args.json:
        print(json.dumps({"rows": rows, "speedup": ratio}, indent=2, sort_keys=True))
        return 0
    if "cython" not in kernels.available():
        print("compiled kernels not built; timing the numpy fallback only")
    for r in rows:
        line = f"{r['case']:<28} {r['backend']:<7} {r['seconds'] * 1e6:12.1f} us"
        if r["backend"] == "numpy" and r["case"] in ratio:
            line += f"   cython x{ratio[r['case']]:.1f}"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
