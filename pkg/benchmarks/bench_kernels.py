"""Time the compiled kernels against the pure-Python ones.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each row reports the best wall time per backend, the speed-up, and the
largest difference between the two outputs.
"""

import argparse
import sys
import timeit

import numpy as np

from vortexpaths import presets
from vortexpaths._backend import available_backends
from vortexpaths.config import config_from_dict

_co = config_from_dict(presets.preset("fig3")).coeffs
FIG3 = (_co.A, _co.B, _co.C, _co.c, _co.k)


def cases():
    u = np.linspace(-10.0, 10.0, 20_000)
    phi = np.linspace(-6.0, 6.0, 20_000)
    t_out = np.linspace(0.0, 40.0, 401)
    return {
        "ellipj_array 20k, m=0.7": (lambda kr: kr.ellipj_array(u, 0.7), lambda r: np.stack(r)),
        "ellipf_array 20k, m=0.9": (lambda kr: kr.ellipf_array(phi, 0.9), np.asarray),
        "dopri_diff2 t<=40, tol 1e-11": (
            lambda kr: kr.dopri_diff2(*FIG3, 0.0, 0.5, 0.0, t_out, 1e-11, 1e-11, 10_000_000),
            lambda r: np.concatenate([r[0], r[1]]),
        ),
    }


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the Python kernels are available", file=sys.stderr)
    names = sorted(backends, reverse=True)
    print(f"{'kernel':32s}" + "".join(f"{n:>12s}" for n in names) + f"{'speed-up':>10s}{'max diff':>11s}")
    for label, (call, flat) in cases().items():
        times, outs = {}, {}
        for n in names:
            kr = backends[n]
            outs[n] = flat(call(kr))
            times[n] = min(timeit.repeat(lambda: call(kr), number=1, repeat=args.repeat))
        row = f"{label:32s}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in names)
        if len(names) == 2:
            diff = float(np.max(np.abs(outs[names[0]] - outs[names[1]])))
            row += f"{times['python'] / times['cython']:9.1f}x{diff:11.1e}"
        print(row)
    return 0


if __name__ == "__main__":
    sys.exit(main())
