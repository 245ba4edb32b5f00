"""Compare the compiled and pure-Python kernels on representative inputs.

Run with ``python3 benchmarks/bench_kernels.py``; also times one full
ensemble build under each backend (subprocesses, since the backend is fixed
at import).
"""

import os
import subprocess
import sys
import timeit

import numpy as np

from skarc import _kernels_py as py
from skarc.gateword import GATE_TABLE, encode
from skarc.synthesis import build_base_net

try:
    from skarc import _ckernels as cx
except ImportError:
    cx = None


def _words(n, length, seed=0):
    rng = np.random.default_rng(seed)
    return ["".join(rng.choice(list("HST"), size=length)) for _ in range(n)]


def _bench(label, fn_py, fn_c, number):
    t_py = min(timeit.repeat(fn_py, number=number, repeat=3)) / number
    line = f"{label:<28} python {t_py * 1e6:10.1f} us"
    if fn_c is not None:
        t_c = min(timeit.repeat(fn_c, number=number, repeat=3)) / number
        line += f"   compiled {t_c * 1e6:10.1f} us   speedup {t_py / t_c:6.1f}x"
    print(line)


def kernel_table():
    words = _words(50, 1000)
    codes = [encode(w) for w in words]
    net = build_base_net(5)
    rng = np.random.default_rng(1)
    qs = rng.normal(size=(50, 4))
    qs /= np.linalg.norm(qs, axis=1, keepdims=True)

    def run(mod, what):
        if mod is None:
            return None
        if what == "nf":
            return lambda: [mod.normal_form(w) for w in words]
        if what == "prod":
            return lambda: [mod.word_product(c, GATE_TABLE) for c in codes]
        return lambda: [mod.nearest(net.quats, q, 1.25) for q in qs]

    print(f"net size {len(net)}, word length 1000, batches of 50")
    _bench("normal_form", run(py, "nf"), run(cx, "nf"), 3)
    _bench("word_product", run(py, "prod"), run(cx, "prod"), 3)
    _bench("nearest (band 1.25)", run(py, "near"), run(cx, "near"), 3)


def end_to_end():
    code = ("import time; from skarc.ensemble import generate_ensemble; from skarc import kernels;"
            "t=time.perf_counter(); generate_ensemble(1.0, 7, 100, 0);"
            "print(kernels.BACKEND, round(time.perf_counter()-t, 2))")
    for pure in ("0", "1"):
        env = dict(os.environ, SKARC_PURE_PYTHON=pure, SKARC_THREADS="1")
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
        backend, secs = out.stdout.split()
        print(f"ensemble b=7 r=100 [{backend:>8}]  {secs} s")


if __name__ == "__main__":
    if cx is None:
        print("compiled extension not built; timing the pure-Python kernels only")
    kernel_table()
    end_to_end()
