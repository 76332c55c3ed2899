#!/usr/bin/env python3
"""Smoke test for the polyhom_py extension module.

Builds nothing itself: expects `cargo build [--release] -p polyhom-py` to have
produced target/<profile>/libpolyhom_py.so, which is exposed to the import
system under the canonical module name via a symlink in a temp directory.
"""

import os
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def locate_library():
    names = ("libpolyhom_py.so", "libpolyhom_py.dylib", "polyhom_py.dll")
    candidates = [
        os.path.join(ROOT, "target", profile, name)
        for profile in ("release", "debug")
        for name in names
    ]
    found = [p for p in candidates if os.path.exists(p)]
    if not found:
        sys.exit("library not found; run `cargo build -p polyhom-py` first")
    # Prefer the most recently built artifact across profiles.
    return max(found, key=os.path.getmtime)


def main():
    lib = locate_library()
    tmp = tempfile.mkdtemp(prefix="polyhom_py_")
    os.symlink(lib, os.path.join(tmp, "polyhom_py.so"))
    sys.path.insert(0, tmp)
    import polyhom_py as pp

    # Unit-ball conformal profile: matching at the exact datum must reproduce
    # the closed-form coefficients (1 - t/2)^{-1/2} - 1 for n = 3.
    prob = pp.Problem.ln_ball(3)
    assert prob.roots() == (-1, 3)
    s = prob.match_series(8)
    assert s.coeff_exact(1, 0) == "1/4"
    assert s.coeff_exact(2, 0) == "3/32"
    assert s.max_log(3) in (None, 0), "ball profile must be log-free"
    assert prob.residual_is_zero(s)

    # Picard iteration agrees with direct matching and reports decay.
    it, ratio, ok = prob.iterate(8)
    assert it.diff(s) is None, it.diff(s)
    assert ok and 0.0 <= ratio < 0.6

    # Minimal graph over the hemisphere cap: resonant coefficient comes back
    # and the first correction matches -1/2 * (1 - |y'|^2)^{-1/2} at y' = 0.
    mg = pp.Problem.minimal_graph(3, degree=6)
    ms = mg.match_series(6)
    assert ms.coeff_exact(2, 0) == "-1/2"
    assert mg.residual_is_zero(ms)

    # Homogeneous problem: the seed is a single monomial at the resonant order.
    hom = pp.Problem.homogeneous(0, 3, datum="5/7")
    hs = hom.expand()
    assert hs.min_order() == 3 and hs.coeff_exact(3, 0) == "5/7"
    assert '"i": 3' in hs.to_json()

    # Auxiliary calculators.
    lc = pp.local_coeffs(3, "2", gauss="1", lap_h="0")
    assert lc["c1_sum"] == "1/4" and lc["c31_mean"] == "0"
    b1, b0t = pp.composition_constants(1.0, 1.0, 1.0, 1.0)
    assert (b1, b0t) == (16.0, 200.0)

    print("smoke test: all checks passed")


if __name__ == "__main__":
    main()
