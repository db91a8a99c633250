"""Monte Carlo experiment driver: failure rates, thresholds, runtime profiles.

A *point* is one (decoder, L, p, ...) cell of an experiment grid; samples
within a point and points within a grid can run concurrently, with per-sample
seeds derived in :mod:`.seeding` so that the aggregated output is identical
for any worker count.  Aborted runs count as failures (and are also reported
separately); sequence statistics are taken over the runs that cleared all
anyons.
"""

from __future__ import annotations

import json
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import ideal, seeding
from .automaton import (
    DecoderConfig,
    Status,
    decode,
    decoder_2d,
    decoder_2dstar,
    decoder_3d,
    resolve_velocity,
)
from .toric import format_error_ascii, sample_iid_noise

DECODERS = ("ca2d", "ca2dstar", "ca3d", "ideal", "rep1d")

#: z for the two-sided 95% Wilson score interval.
Z_95 = 1.959963984540054

CSV_HEADER = ("decoder,L,p,c,eta,alpha,samples,failures,aborts,fail_rate,"
              "ci_low,ci_high,mean_sequences,stddev_sequences,seed,wall_time_s")

_STATUS_CODES = {Status.SUCCESS: 0, Status.LOGICAL_FAILURE: 1, Status.ABORT: 2}


class SpecError(ValueError):
    """An experiment specification that cannot be run."""


@dataclass(frozen=True)
class BenchPoint:
    """One grid cell of an experiment."""

    decoder: str
    L: int
    p: float
    samples: int
    master_seed: int
    c: int | None = None
    eta: float = 0.5
    alpha: float | None = None
    abort_mult: float = 1.0

    def __post_init__(self):
        if self.decoder not in DECODERS:
            raise SpecError(f"unknown decoder {self.decoder!r}")
        if self.L < 3:
            raise SpecError("L must be >= 3")
        if not 0.0 <= self.p <= 1.0:
            raise SpecError(f"p must be in [0, 1], got {self.p}")
        if self.samples < 1:
            raise SpecError("samples must be >= 1")
        if self.decoder == "ca2d" and (self.c is None or self.c < 1):
            raise SpecError("the ca2d decoder needs a velocity --c >= 1")
        if self.decoder in ("ideal", "rep1d") and self.alpha is None:
            raise SpecError(f"the {self.decoder} decoder needs --alpha")
        if self.abort_mult <= 0:
            raise SpecError("abort multiplier must be positive")

    def abort_sequences(self) -> int:
        base = self.L if self.decoder == "ca3d" else 10 * self.L
        return max(1, round(self.abort_mult * base))

    def config(self) -> DecoderConfig | None:
        kwargs = {"eta": self.eta, "abort_sequences": self.abort_sequences()}
        if self.decoder == "ca2d":
            return decoder_2d(self.c, **kwargs)
        if self.decoder == "ca2dstar":
            return decoder_2dstar(**kwargs)
        if self.decoder == "ca3d":
            return decoder_3d(**kwargs)
        return None

    def velocity_descriptor(self) -> str:
        if self.decoder == "ca2d":
            return str(self.c)
        if self.decoder == "ca2dstar":
            return "1+0.2t"
        if self.decoder == "ca3d":
            return str(resolve_velocity(decoder_3d().schedule, 0, self.L))
        return "exact"


@dataclass
class BenchRecord:
    """Aggregated result of one benchmark point."""

    decoder: str
    L: int
    p: float
    c: str
    eta: float
    alpha: float
    samples: int
    failures: int
    aborts: int
    fail_rate: float
    ci_low: float
    ci_high: float
    mean_sequences: float
    stddev_sequences: float
    seed: int
    wall_time_s: float


def wilson_interval(failures: int, samples: int, z: float = Z_95) -> tuple[float, float]:
    """Two-sided Wilson score interval for a binomial proportion."""
    if not 0 <= failures <= samples or samples < 1:
        raise ValueError("need 0 <= failures <= samples, samples >= 1")
    phat = failures / samples
    denom = 1.0 + z * z / samples
    center = (phat + z * z / (2 * samples)) / denom
    half = z * math.sqrt(phat * (1 - phat) / samples + z * z / (4 * samples**2)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def run_sample(point: BenchPoint, index: int) -> tuple[int, int]:
    """Run one trial; returns (status code, sequences used)."""
    noise_rng = seeding.sample_generator(point.master_seed, point.decoder,
                                         point.L, point.p, index, seeding.NOISE)
    dec_rng = seeding.sample_generator(point.master_seed, point.decoder,
                                       point.L, point.p, index, seeding.DECODE)
    if point.decoder == "rep1d":
        edges = ideal.sample_ring_noise(point.L, point.p, noise_rng)
        outcome = ideal.repetition_decode(edges, point.alpha, dec_rng,
                                          point.abort_sequences())
    elif point.decoder == "ideal":
        E = sample_iid_noise(point.L, point.p, noise_rng)
        outcome, _ = ideal.ideal_decode(E, point.alpha, dec_rng,
                                        point.abort_sequences())
    else:
        E = sample_iid_noise(point.L, point.p, noise_rng)
        outcome, _ = decode(E, point.config(), dec_rng)
    return _STATUS_CODES[outcome.status], outcome.sequences_used


def _sample_range(args) -> tuple[int, list[tuple[int, int]]]:
    point, start, stop = args
    return start, [run_sample(point, i) for i in range(start, stop)]


def run_point(point: BenchPoint, jobs: int = 1, executor=None) -> BenchRecord:
    """Estimate the failure rate of one point from ``point.samples`` trials."""
    t0 = time.perf_counter()
    n = point.samples
    if jobs > 1 or executor is not None:
        chunk = max(1, math.ceil(n / (4 * max(jobs, 1))))
        tasks = [(point, s, min(s + chunk, n)) for s in range(0, n, chunk)]
        if executor is None:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                parts = list(pool.map(_sample_range, tasks))
        else:
            parts = list(executor.map(_sample_range, tasks))
        results = [r for _, batch in sorted(parts) for r in batch]
    else:
        results = [run_sample(point, i) for i in range(n)]
    status = np.array([r[0] for r in results])
    sequences = np.array([r[1] for r in results], dtype=float)

    failures = int(np.count_nonzero(status != 0))
    aborts = int(np.count_nonzero(status == 2))
    cleared = sequences[status != 2]
    mean_seq = float(cleared.mean()) if cleared.size else math.nan
    std_seq = float(cleared.std()) if cleared.size else math.nan
    lo, hi = wilson_interval(failures, n)
    return BenchRecord(
        decoder=point.decoder,
        L=point.L,
        p=point.p,
        c=point.velocity_descriptor(),
        eta=point.eta if point.decoder.startswith("ca") else math.nan,
        alpha=point.alpha if point.alpha is not None else math.nan,
        samples=n,
        failures=failures,
        aborts=aborts,
        fail_rate=failures / n,
        ci_low=lo,
        ci_high=hi,
        mean_sequences=mean_seq,
        stddev_sequences=std_seq,
        seed=point.master_seed,
        wall_time_s=time.perf_counter() - t0,
    )


def run_grid(points: list[BenchPoint], jobs: int = 1,
             progress=None) -> list[BenchRecord]:
    """Run a list of points; sample-level parallelism, stable output order."""
    records = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for point in points:
                records.append(run_point(point, jobs=jobs, executor=pool))
                if progress:
                    progress(records[-1])
    else:
        for point in points:
            records.append(run_point(point))
            if progress:
                progress(records[-1])
    return records


# ---------------------------------------------------------------------------
# threshold estimation
# ---------------------------------------------------------------------------

def pairwise_crossings(records: list[BenchRecord]) -> dict[tuple[int, int], float | None]:
    """Interpolated p where the fail-rate curves of two sizes intersect.

    For each pair L1 < L2 the sign of rate(L2) - rate(L1) flips when p moves
    through the threshold; the first sign change along the grid is located by
    linear interpolation.  ``None`` marks pairs without a crossing in range.
    """
    curves: dict[int, dict[float, float]] = {}
    for r in records:
        curves.setdefault(r.L, {})[r.p] = r.fail_rate
    sizes = sorted(curves)
    out: dict[tuple[int, int], float | None] = {}
    for L1, L2 in combinations(sizes, 2):
        ps = sorted(set(curves[L1]) & set(curves[L2]))
        diffs = [curves[L2][p] - curves[L1][p] for p in ps]
        crossing = None
        for i in range(len(ps)):
            if diffs[i] == 0.0:
                crossing = ps[i]
                break
            if i + 1 < len(ps) and diffs[i] * diffs[i + 1] < 0.0:
                t = diffs[i] / (diffs[i] - diffs[i + 1])
                crossing = ps[i] + t * (ps[i + 1] - ps[i])
                break
        out[(L1, L2)] = crossing
    return out


def estimate_crossing(records: list[BenchRecord]) -> float | None:
    """Median of the pairwise curve crossings; None if no pair crosses."""
    found = [c for c in pairwise_crossings(records).values() if c is not None]
    return statistics.median(found) if found else None


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.9g}"
    return str(x)


def record_fields(r: BenchRecord) -> list:
    return [r.decoder, r.L, r.p, r.c, r.eta, r.alpha, r.samples, r.failures,
            r.aborts, r.fail_rate, r.ci_low, r.ci_high, r.mean_sequences,
            r.stddev_sequences, r.seed, r.wall_time_s]


def write_csv(records: list[BenchRecord], stream) -> None:
    """CSV with the fixed header, 9-significant-digit floats, LF endings."""
    stream.write(CSV_HEADER + "\n")
    for r in records:
        stream.write(",".join(_fmt(v) for v in record_fields(r)) + "\n")


def write_jsonl(records: list[BenchRecord], stream) -> None:
    """JSON-lines mirror of the CSV records (NaN encoded as null)."""
    keys = CSV_HEADER.split(",")
    for r in records:
        row = {
            k: (None if isinstance(v, float) and math.isnan(v) else v)
            for k, v in zip(keys, record_fields(r))
        }
        stream.write(json.dumps(row) + "\n")


def dump_point_errors(point: BenchPoint, count: int, stream) -> None:
    """ASCII-dump the first ``count`` sampled error configurations of a point."""
    for i in range(min(count, point.samples)):
        rng = seeding.sample_generator(point.master_seed, point.decoder,
                                       point.L, point.p, i, seeding.NOISE)
        if point.decoder == "rep1d":
            edges = ideal.sample_ring_noise(point.L, point.p, rng)
            row = "".join("-" if e else "." for e in edges)
            stream.write(f"# {point.decoder} L={point.L} p={point.p} sample={i}\n{row}\n")
        else:
            E = sample_iid_noise(point.L, point.p, rng)
            stream.write(f"# {point.decoder} L={point.L} p={point.p} sample={i}\n")
            stream.write(format_error_ascii(E) + "\n")
