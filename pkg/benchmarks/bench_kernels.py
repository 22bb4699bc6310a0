"""Benchmark the compiled kernels against the pure-Python reference.

Micro-benchmarks call both kernel modules directly on identical inputs;
the end-to-end rows rerun a Buchberger workload and the shipped demo
pipeline in subprocesses with OPKIT_PURE_PYTHON toggled, so each side uses
its kernels throughout.

    python benchmarks/bench_kernels.py [--repeat N] [--skip-e2e]
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

from opkit import _kernels_py as pure

try:
    from opkit import _accel as accel
except ImportError:
    accel = None


def random_terms(rng, nvars, nterms, exp_bound=6, coeff_bound=30):
    out = {}
    while len(out) < nterms:
        exp = tuple(rng.randint(0, exp_bound) for _ in range(nvars))
        out[exp] = Fraction(rng.randint(-coeff_bound, coeff_bound) or 1,
                            rng.randint(1, 9))
    return out


def timeit(fn, repeat):
    best = None
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return best


def micro_benchmarks(repeat):
    rng = random.Random(1)
    a = random_terms(rng, 3, 60)
    b = random_terms(rng, 3, 60)
    coeff = Fraction(7, 3)
    shift = (1, 2, 0)
    mat_a = [[Fraction(rng.randint(-9, 9), rng.randint(1, 4))
              for _ in range(40)] for _ in range(40)]
    mat_b = [[Fraction(rng.randint(-9, 9), rng.randint(1, 4))
              for _ in range(40)] for _ in range(40)]
    int_row = [rng.randint(-10**6, 10**6) * 12 for _ in range(300)]
    int_prow = [rng.randint(-10**6, 10**6) * 12 for _ in range(300)]

    def isubmul_case(mod):
        acc = dict(a)
        for _ in range(40):
            mod.poly_isubmul(acc, coeff, shift, b)

    cases = [
        ("poly_mul 60x60 terms", lambda m: m.poly_mul(a, b)),
        ("poly_add", lambda m: m.poly_add(a, b)),
        ("poly_isubmul x40", isubmul_case),
        ("mat_mul 40x40", lambda m: m.mat_mul(mat_a, mat_b)),
        ("row_combine_int 300", lambda m: m.row_combine_int(
            int_row, 982451653, int_prow, 57885161, 12, 0)),
    ]
    rows = []
    for name, case in cases:
        t_pure = timeit(lambda: case(pure), repeat)
        t_accel = timeit(lambda: case(accel), repeat) if accel else None
        rows.append((name, t_pure, t_accel))
    return rows


E2E_SNIPPET = r"""
import random, time
from fractions import Fraction
from opkit.poly import parse_polynomial
from opkit.groebner import buchberger_certified
from opkit.backend import make_truncated_derivative_instance, instantiate, solve_affine
from opkit.poly import product

V = ["a", "b", "c", "d", "e"]
gens = [parse_polynomial(s, V) for s in (
    "a+2*b+2*c+2*d+2*e-1",
    "a^2+2*b^2+2*c^2+2*d^2+2*e^2-a",
    "2*a*b+2*b*c+2*c*d+2*d*e-b",
    "b^2+2*a*c+2*b*d+2*c*e-c",
    "2*b*c+2*a*d+2*b*e-d")]
start = time.perf_counter()
buchberger_certified(gens)
print(f"buchberger(katsura-4) {time.perf_counter() - start:.4f}")

factors = [parse_polynomial(s, ["x", "y"]) for s in
           ("x+1", "x*y+y+1", "x", "x^2+x*y+x+y-1")]
inst = make_truncated_derivative_instance(2, 7)
start = time.perf_counter()
p = instantiate(product(factors, 2), inst)
rng = random.Random(0)
for _ in range(3):
    w = [Fraction(rng.randint(-3, 3)) for _ in range(inst.dimension)]
    solve_affine(p, p.apply(w))
print(f"instantiate+solve {time.perf_counter() - start:.4f}")
"""


def end_to_end():
    rows = []
    for label, env_value in (("pure-python", "1"), ("compiled", "")):
        if label == "compiled" and accel is None:
            continue
        env = dict(os.environ)
        if env_value:
            env["OPKIT_PURE_PYTHON"] = env_value
        else:
            env.pop("OPKIT_PURE_PYTHON", None)
        result = subprocess.run([sys.executable, "-c", E2E_SNIPPET],
                                capture_output=True, text=True, env=env)
        result.check_returncode()
        for line in result.stdout.splitlines():
            name, value = line.rsplit(" ", 1)
            rows.append((name, label, float(value)))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--skip-e2e", action="store_true")
    args = parser.parse_args()

    if accel is None:
        print("note: compiled kernels are not built; showing pure-Python only")
    print(f"{'kernel':<24} {'pure (ms)':>12} {'compiled (ms)':>14} {'speedup':>9}")
    for name, t_pure, t_accel in micro_benchmarks(args.repeat):
        if t_accel is None:
            print(f"{name:<24} {t_pure * 1e3:>12.3f} {'-':>14} {'-':>9}")
        else:
            print(f"{name:<24} {t_pure * 1e3:>12.3f} {t_accel * 1e3:>14.3f} "
                  f"{t_pure / t_accel:>8.2f}x")

    if args.skip_e2e:
        return
    print()
    print(f"{'end-to-end workload':<24} {'kernels':>14} {'seconds':>10}")
    for name, label, seconds in end_to_end():
        print(f"{name:<24} {label:>14} {seconds:>10.4f}")


if __name__ == "__main__":
    main()
