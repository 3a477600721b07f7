"""Compare the compiled series kernels with the pure-Python fallback.

Runs each kernel on both backends (same inputs, results checked equal) and
then times one end-to-end proof under each backend in a subprocess, since
the backend is chosen once at import.

    python3 benchmarks/bench_kernels.py [--n 2000] [--repeat 3]
"""
import argparse
import os
import subprocess
import sys
import timeit

from thetacert import _kernels_py

try:
    from thetacert import _ckernels
except ImportError:
    _ckernels = None

PROOF = ("from thetacert.corpus import load_corpus; from thetacert.prover import prove; "
         "e = [x for x in load_corpus() if x.tag == '{tag}'][0]; "
         "assert prove(e.statement())['verdict']['status'] == 'proven'")


def kernel_cases(n):
    a = [(-1) ** i * (i % 7) for i in range(n)]
    b = [1] + [(i % 5) - 2 for i in range(1, n)]
    # dividing by 1 - q (prefix sums) keeps quotients inside 64-bit words
    d = [1, -1] + [0] * (n - 2)
    f = [0] + [(-1) ** m for m in range(1, n)]
    return {
        "mul_trunc": ("mul_trunc", (a, b, n)),
        "div_trunc": ("div_trunc", (a, d, n)),
        "euler_product": ("euler_product", (f, n)),
    }


def time_call(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def time_proof(tag, pure, repeat):
    env = dict(os.environ)
    if pure:
        env["THETACERT_PURE"] = "1"
    else:
        env.pop("THETACERT_PURE", None)
    stmt = PROOF.format(tag=tag)
    cmd = [sys.executable, "-m", "timeit", "-n", "1", "-r", str(repeat), "-s", "import thetacert", stmt]
    out = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True).stdout
    return out.strip()


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000, help="series length for the kernel timings")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--tag", default="240m+1", help="corpus statement for the end-to-end timing")
    ns = ap.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels are not built; only the pure-Python timings are available")
    print(f"{'kernel':<16}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    for name, (attr, args) in kernel_cases(ns.n).items():
        py = time_call(getattr(_kernels_py, attr), args, ns.repeat)
        if _ckernels is None:
            print(f"{name:<16}{py:>12.4f}{'-':>12}{'-':>10}")
            continue
        if getattr(_ckernels, attr)(*args) != getattr(_kernels_py, attr)(*args):
            raise SystemExit(f"{name}: backends disagree")
        cy = time_call(getattr(_ckernels, attr), args, ns.repeat)
        print(f"{name:<16}{py:>12.4f}{cy:>12.4f}{py / cy:>9.1f}x")
    print(f"\nproof of {ns.tag}:")
    print(f"  python: {time_proof(ns.tag, True, ns.repeat)}")
    if _ckernels is not None:
        print(f"  cython: {time_proof(ns.tag, False, ns.repeat)}")


if __name__ == "__main__":
    main()
