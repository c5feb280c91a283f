"""Compiled vs pure-Python kernels on the workloads that dominate runtime.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each workload is run under both backends and the results are compared
before timings are reported.
"""

import argparse
import statistics
import sys
import time

from canlift import _backend
from canlift.arith import FieldSpec
from canlift.dualmod import dual_act, dual_frobenius
from canlift.dwork import DworkParams, canonical_eta, dwork_context, dwork_poly, g_vee, hd_coeff_oracle
from canlift.poly import poly_pow


def power(p, N, eta, n=1):
    spec = FieldSpec(p, n)
    if isinstance(eta, tuple):
        eta = spec.witt(*eta)
    f = dwork_poly(DworkParams.of(spec, N, eta=eta))
    return lambda: poly_pow(f, 2 * p - 1)


def oracle(p, N, m):
    params = DworkParams.of(FieldSpec(p), N, eta=3)
    return lambda: hd_coeff_oracle(params, m * p - 1)


def composite(p, N):
    params = DworkParams.of(FieldSpec(p), N, eta=3)
    ctx = dwork_context(params)
    g = dual_frobenius(g_vee(params))
    return lambda: dual_act(ctx.h, g, strategy="product")


def solve(p, N, lam):
    return lambda: canonical_eta(FieldSpec(p), N, lam)


WORKLOADS = [
    ("f^(2p-1), p=7 N=3", power(7, 3, 10), False),
    ("f^(2p-1), p=11 N=2", power(11, 2, 14), False),
    ("f^(2p-1), F_49 N=2", power(7, 2, ((3, 1), (0, 2)), 2), True),
    ("HD oracle, p=11 N=4 m=2", oracle(11, 4, 2), False),
    ("HD oracle, p=13 N=6 m=2", oracle(13, 6, 2), True),
    ("h * F*(g_vee), p=7 N=4", composite(7, 4), False),
    ("canonical_eta, p=7 N=3", solve(7, 3, 3), False),
]


def timed(fn, repeat):
    out, times = None, []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="skip the heaviest workloads")
    args = ap.parse_args(argv)
    if "compiled" not in _backend.available():
        print("compiled kernels are not built; nothing to compare", file=sys.stderr)
        return 1
    print(f"{'workload':<28} {'python (s)':>11} {'compiled (s)':>13} {'speedup':>8}")
    for name, make, heavy in WORKLOADS:
        if heavy and args.quick:
            continue
        with _backend.using("python"):
            slow_out, slow = timed(make, 1 if heavy else args.repeat)
        with _backend.using("compiled"):
            fast_out, fast = timed(make, args.repeat)
        if slow_out != fast_out:
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        print(f"{name:<28} {slow:>11.4f} {fast:>13.4f} {slow / fast:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
