"""Built-in invariant suite, runnable as ``fieldca selftest``.

Every check is exact (no statistical tolerance): algebraic identities hold
bit-for-bit, analytic identities to fixed numerical headroom.
"""

from __future__ import annotations

import math

import numpy as np

from . import bench
from .automaton import anyon_update, field_update
from .spectral import SpectralModel
from .toric import (
    logical_failure,
    plaquette_boundary,
    sample_iid_noise,
    syndrome,
)


def check_syndrome_linearity() -> tuple[bool, str]:
    rng = np.random.default_rng(101)
    for _ in range(20):
        e1 = sample_iid_noise(10, 0.3, rng)
        e2 = sample_iid_noise(10, 0.3, rng)
        if not np.array_equal(syndrome(e1 ^ e2), syndrome(e1) ^ syndrome(e2)):
            return False, "syndrome(E1 xor E2) != syndrome(E1) xor syndrome(E2)"
    return True, "20 random pairs"


def check_even_anyon_parity() -> tuple[bool, str]:
    rng = np.random.default_rng(102)
    for _ in range(50):
        q = syndrome(sample_iid_noise(9, 0.4, rng))
        if int(q.sum()) % 2:
            return False, "odd anyon count"
    return True, "50 random configurations"


def check_stabilizer_invariance() -> tuple[bool, str]:
    rng = np.random.default_rng(103)
    L = 8
    for trial in range(20):
        E = plaquette_boundary(L, rng.integers(0, L, 2))
        for _ in range(4):
            E = E ^ plaquette_boundary(L, rng.integers(0, L, 2))
        if trial % 2:
            E.horizontal[0, :] ^= True  # add a winding loop
        before = logical_failure(E)
        for _ in range(6):
            E = E ^ plaquette_boundary(L, rng.integers(0, L, 2))
        if logical_failure(E) != before:
            return False, "logical class changed under stabilizer multiplication"
    return True, "20 randomized cycle configurations"


def check_total_field_growth() -> tuple[bool, str]:
    rng = np.random.default_rng(104)
    worst = 0.0
    for D in (2, 3):
        for _ in range(10):
            phi = rng.standard_normal((8,) * D) * 10
            q = (rng.random((8, 8)) < 0.2).astype(float)
            out = field_update(phi, q, 0.5)
            drift = abs(out.sum() - phi.sum() - q.sum())
            worst = max(worst, drift / max(1.0, abs(phi.sum())))
    return worst < 1e-9, f"max relative drift {worst:.2e}"


def check_argmax_shift_invariance() -> tuple[bool, str]:
    rng = np.random.default_rng(105)
    for shift in (1.0, -3.5, 1e6):
        E = sample_iid_noise(10, 0.15, rng)
        q = syndrome(E)
        phi = rng.standard_normal((10, 10))
        r1 = anyon_update(phi, E, q, np.random.Generator(np.random.Philox(key=7)))
        r2 = anyon_update(phi + shift, E, q, np.random.Generator(np.random.Philox(key=7)))
        if r1[0] != r2[0]:
            return False, f"decisions changed under +{shift}"
    return True, "shifts 1.0, -3.5, 1e6"


def check_superposition() -> tuple[bool, str]:
    rng = np.random.default_rng(106)
    worst = 0.0
    for D in (2, 3):
        model = SpectralModel(8, D, 0.5)
        q1 = (rng.random((8, 8)) < 0.1).astype(float)
        q2 = (rng.random((8, 8)) < 0.1).astype(float)
        combined = model.stationary_field(q1 + q2)
        split = model.stationary_field(q1) + model.stationary_field(q2)
        worst = max(worst, float(np.abs(combined - split).max()))
    return worst < 1e-10, f"max deviation {worst:.2e}"


def check_jobs_reproducibility() -> tuple[bool, str]:
    point = bench.BenchPoint(decoder="ca3d", L=8, p=0.06, samples=48, master_seed=99)
    serial = bench.run_point(point, jobs=1)
    parallel = bench.run_point(point, jobs=2)
    a = bench.record_fields(serial)[:-1]   # wall time is not reproducible
    b = bench.record_fields(parallel)[:-1]
    same = all(
        (isinstance(x, float) and math.isnan(x) and math.isnan(y)) or x == y
        for x, y in zip(a, b)
    )
    return same, "48 samples, 1 vs 2 workers"


CHECKS = [
    ("syndrome linearity", check_syndrome_linearity),
    ("even anyon parity", check_even_anyon_parity),
    ("stabilizer invariance of logical_failure", check_stabilizer_invariance),
    ("total field grows by Q per update", check_total_field_growth),
    ("additive-constant argmax invariance", check_argmax_shift_invariance),
    ("superposition of stationary fields", check_superposition),
    ("byte-identical reruns across --jobs", check_jobs_reproducibility),
]


def run_selftest(stream) -> bool:
    """Run every invariant check, print one line each; True if all pass."""
    all_ok = True
    for name, check in CHECKS:
        ok, detail = check()
        all_ok &= ok
        stream.write(f"{'PASS' if ok else 'FAIL'}  {name} ({detail})\n")
    return all_ok
