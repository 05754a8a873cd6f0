#!/usr/bin/env python3
"""Builds the upcheck_py extension and exercises it end to end.

Run from anywhere:

    python3 python/smoke_test.py

The script compiles the extension crate with cargo, stages the shared
library under a temporary directory as `upcheck_py.so`, imports it, and
checks the detector and the spectral operations on hand-computable cases.
"""

import math
import random
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_extension() -> Path:
    """Compiles the extension and returns a directory importable by Python."""
    subprocess.run(["cargo", "build", "-p", "upcheck-py"], cwd=ROOT, check=True)
    built = ROOT / "target" / "debug" / "libupcheck_py.so"
    stage = Path(tempfile.mkdtemp(prefix="upcheck-py-"))
    shutil.copy2(built, stage / "upcheck_py.so")
    return stage


sys.path.insert(0, str(build_extension()))

import upcheck_py as up  # noqa: E402


def main() -> None:
    # A pair concentrated on a single coordinate in both domains must break
    # the bound: supports 1 and 1 against N(1-0)^2 = 16.
    delta = [0.0] * 16
    delta[0] = 1.0
    report = up.detect_violation(delta, delta, sample_id="delta-delta")
    assert report.violated, report
    assert report.witness.lhs == 1 and report.witness.rhs == 16.0, repr(report.witness)
    assert report.mode == "first-found"

    # The same delta against a flat spectrum satisfies the bound.
    assert not up.detect_violation(delta, [1.0] * 16).violated

    # A genuine transform pair can never violate, in either scan mode.
    rng = random.Random(7)
    x = [rng.gauss(0.0, 1.0) for _ in range(128)]
    mags = up.dft_magnitudes(x)
    for mode in ("first-found", "strongest"):
        assert not up.detect_violation(x, mags, mode=mode).violated, mode
    n_t, n_f, holds = up.check_theorem1(x, mags)
    assert holds and n_t * n_f >= 128, (n_t, n_f)
    support_sum, holds = up.check_corollary1(x, mags)
    assert holds and support_sum >= 2 * math.sqrt(128), support_sum

    # Unknown mode names are rejected as ValueError, not swallowed.
    try:
        up.detect_violation(delta, delta, mode="fastest")
    except ValueError as e:
        assert "fastest" in str(e)
    else:
        raise AssertionError("invalid mode was accepted")

    # Packed synthesis parameters round-trip through the inverse transform.
    params = up.pack_spectrum(x)
    assert len(params) == len(x)
    back = up.synthesize(params)
    assert max(abs(a - b) for a, b in zip(back, x)) < 1e-9

    # Folding packed-space scores yields one magnitude per bin.
    folded = up.fold_bin_scores(params)
    assert len(folded) == up.half_bin_count(len(x)) == 65
    assert all(abs(f - m) < 1e-9 for f, m in zip(folded[1:64], mags[1:64]))

    # Ablating one bin of a two-tone signal removes exactly that tone.
    n = 64
    tone = [
        math.sin(2 * math.pi * 5 * t / n) + 0.25 * math.sin(2 * math.pi * 11 * t / n)
        for t in range(n)
    ]
    cleaned = up.ablate_bins(tone, [11])
    residual = up.dft_magnitudes(cleaned)
    assert residual[11] < 1e-9, residual[11]
    assert residual[5] > 1.0, residual[5]

    print(f"smoke test passed: upcheck_py {up.__version__} — detector verdicts, "
          "transform round trip, folding, and bin ablation all check out")


if __name__ == "__main__":
    main()
