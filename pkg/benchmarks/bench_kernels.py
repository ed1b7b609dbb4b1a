"""Benchmark the hot kernels under both backends.

Runs every kernel (and one end-to-end sparse decomposition) twice, in
child processes with TTSKETCH_NUMBA=1 and =0, and prints a side-by-side
table.  The backend is chosen at import time, hence the subprocesses.

Usage:  python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import json
import os
import statistics
import subprocess
import sys
import time


def _bench(fn, repeats):
    fn()  # warm-up (and JIT compile on the numba backend)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return 1e6 * statistics.median(times)


def _worker(repeats):
    import numpy as np

    from ttsketch import _kernels
    from ttsketch.decompose import randomized_tt_svd
    from ttsketch.generators import gaussian_sparse
    from ttsketch.rng import RngStream

    key = np.uint64(0x9E3779B97F4A7C15)
    heads = np.random.default_rng(0).integers(0, 2 ** 40, 500).astype(np.uint64)
    entries, s, t, n = 500, 20, 20, 2
    mu = np.random.default_rng(1).integers(0, n, entries).astype(np.int64)
    rows = np.arange(entries, dtype=np.int64)
    vals = np.ascontiguousarray(
        np.random.default_rng(2).standard_normal((entries, t))
    )
    gam = _kernels.gammas_at(heads, s, np.uint64(2 ** 39), key)
    w = np.ascontiguousarray(
        np.linalg.qr(np.random.default_rng(3).standard_normal((n * t, s)))[0]
        .T.reshape(s, n, t).transpose(1, 0, 2)
    )
    counters = np.arange(200_000, dtype=np.uint64)

    rng = RngStream(77)
    xs = gaussian_sparse((2,) * 40, 500, rng.substream(0))
    sketch = (20,) * 39

    results = {
        "normals 200k": _bench(
            lambda: _kernels.normals_at(key, counters), repeats
        ),
        "indices 100k": _bench(
            lambda: _kernels.indices_at(key, counters[:100_000], 1000), repeats
        ),
        "gammas 500x20": _bench(
            lambda: _kernels.gammas_at(heads, s, np.uint64(2 ** 39), key),
            repeats,
        ),
        "sketch 500 entries": _bench(
            lambda: _kernels.sparse_sketch(mu, rows, vals, gam, n), repeats
        ),
        "update 500 entries": _bench(
            lambda: _kernels.sparse_update(mu, rows, vals, w, entries), repeats
        ),
        "sparse train d=40": _bench(
            lambda: randomized_tt_svd(xs, sketch, rng.substream(1)), repeats
        ),
    }
    print(json.dumps({"backend": _kernels.BACKEND, "results": results}))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=25)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args(argv)
    if args.worker:
        _worker(args.repeats)
        return 0

    reports = {}
    for flag in ("1", "0"):
        env = dict(os.environ, TTSKETCH_NUMBA=flag)
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__),
             "--worker", "--repeats", str(args.repeats)],
            capture_output=True, text=True, env=env, check=True,
        )
        report = json.loads(out.stdout.strip().splitlines()[-1])
        reports[report["backend"]] = report["results"]

    names = list(next(iter(reports.values())))
    backends = list(reports)
    width = max(len(n) for n in names)
    header = f"{'kernel':<{width}}" + "".join(f"{b:>14}" for b in backends)
    print(header)
    print("-" * len(header))
    for name in names:
        row = f"{name:<{width}}"
        for b in backends:
            row += f"{reports[b][name]:>12.1f}us"
        print(row)
    slow = [
        (name, reports[backends[0]][name] / reports[backends[1]][name])
        for name in names
    ]
    print()
    for name, ratio in slow:
        rel = f"{1 / ratio:.1f}x faster" if ratio < 1 else f"{ratio:.1f}x slower"
        print(f"{backends[0]} is {rel} on {name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
