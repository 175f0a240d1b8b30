"""Smoke test for the `tsl` extension module.

Builds the extension, copies it next to this file as tsl.so and exercises
the main entry points. Run from the repository root:

    python3 python/smoke_test.py
"""

import math
import pathlib
import shutil
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
HERE = pathlib.Path(__file__).resolve().parent


def build():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "tsl-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    built = ROOT / "target" / "release" / "libtsl_py.so"
    shutil.copyfile(built, HERE / "tsl.so")
    sys.path.insert(0, str(HERE))


def main():
    build()
    import tsl

    assert set(tsl.Symbol.builtins()) == {"bidiagonal", "grcar", "fourth_diff", "cosine6"}

    f = tsl.Symbol.builtin("cosine6")
    eig = tsl.sym_eig(tsl.flipped_toeplitz(f, 6))
    expected = [
        -4.740938811152402,
        -2.740938811152401,
        0.335125603737887,
        2.335125603737887,
        4.405813207414513,
        6.405813207414513,
    ]
    assert all(abs(a - b) < 1e-9 for a, b in zip(eig, expected)), eig
    assert [r[4] for r in tsl.inertia_asymptotics(f, [6, 100, 200])] == [2, 2, 2]

    g = tsl.Symbol({0: 2.0, 1: 1.0}, label="bidiagonal")
    assert g.degree == 1
    assert abs(g.evaluate(0.0) - 3.0) < 1e-15
    assert tsl.toeplitz(g, 3) == [[2.0, 0.0, 0.0], [1.0, 2.0, 0.0], [0.0, 1.0, 2.0]]
    assert tsl.inertia(tsl.flipped_toeplitz(g, 100)) == (50, 50, 0)

    sv_t = tsl.singular_values(tsl.toeplitz(g, 20))
    sv_yt = tsl.singular_values(tsl.flipped_toeplitz(g, 20))
    assert max(abs(a - b) for a, b in zip(sv_t, sv_yt)) < 1e-8

    q, a = tsl.factorize_flip_circulant(tsl.Symbol.builtin("grcar"), 16)
    qtq = [[sum(q[k][i] * q[k][j] for k in range(16)) for j in range(16)] for i in range(16)]
    assert all(abs(qtq[i][j] - (i == j)) < 1e-10 for i in range(16) for j in range(16))

    split = tsl.acs_split_check(tsl.Symbol.builtin("fourth_diff"), 32)
    assert split["rank"] <= split["rank_bound"] and split["reconstruction_exact"]

    spec = tsl.preconditioned_spectrum(g, 64)
    assert tsl.cluster_measure(spec, [-1.0, 1.0], 0.1) < 0.1

    out = tsl.solve(g, [1.0] * 64)
    assert out["converged"] and out["true_relative_residual"] < 1e-6

    rows = tsl.distribution_check(g, [16, 32], quad_points=4096)
    assert len(rows) == 2 * 10 and all(math.isfinite(r[4]) for r in rows)

    try:
        tsl.Symbol.builtin("nope")
    except ValueError as e:
        assert "nope" in str(e)
    else:
        raise AssertionError("unknown builtin accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
