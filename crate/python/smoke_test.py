"""Smoke test for the latdisc Python extension.

Build and copy the module next to this script first:

    cargo build --release -p latdisc-py --features extension-module
    cp target/release/liblatdisc_py.so python/latdisc_py.so
    python3 python/smoke_test.py
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import latdisc_py as ld  # noqa: E402


def main():
    disk = ld.Domain(2)
    r = disk.count_exact(10.0)
    assert r.count == 317, r
    assert disk.count_brute(10.0).count == 317

    quartic = ld.Domain.parse("superellipse:omega=4,a=1,b=1,theta=0.73")
    assert quartic.omega == 4
    assert len(quartic.flat_normals()) == 4
    assert abs(quartic.area() - 3.708149354602744) < 1e-9

    lam = 20.375
    j1 = disk.ft_numeric((0.6, 0.8), lam)
    asym = disk.ft_asymptotic((0.6, 0.8), lam)
    assert abs(j1 - asym) < 1e-3 * abs(j1), (j1, asym)

    lo, hi = disk.support_hessian_eigenvalues((0.0, 2.0))
    assert abs(lo) < 1e-6 and abs(hi - 0.5) < 1e-6

    h = disk.hq_determinant((1.0, 0.0), (0.0, 1.0), (1.0, 0.0), 2)
    assert abs(h + 4.0) < 1e-9, h

    v1, v2, big_l = ld.construct_vstar((1 / math.sqrt(2), 1 / math.sqrt(2)), 1, 0.5, 10)
    assert (v1, v2, big_l) == ((-7, 7), (7, 7), 98)

    slope, se = ld.fit_exponent([(j * math.log(2), 0.75 * j * math.log(2)) for j in range(6, 12)])
    assert abs(slope - 0.75) < 1e-12 and se < 1e-12

    csv, passed = ld.run_experiment("mode = scaling\ndomain = disk\njmin = 3\njmax = 6\n")
    assert csv.startswith("# latdisc") and passed

    try:
        ld.Domain(5)
    except ValueError:
        pass
    else:
        raise AssertionError("odd omega accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
