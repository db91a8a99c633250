"""The field cellular-automaton decoder.

A decode run is a loop over *sequences*: ``c`` synchronous field updates (the
velocity ``c`` may depend on the sequence index) followed by one parallel
anyon update.  Fields are updated functionally (out-of-place), which realizes
the front/back double buffer of a synchronous automaton; anyon hop decisions
are all taken against the frozen field and charge arrays and applied as XOR
edge flips, the only order-independent semantics for simultaneous hops.

Two interchangeable field engines drive the loop: an exact stencil sweep, and
a spectral engine that advances all ``c`` updates of a sequence at once in the
eigenbasis of the update map.  Both are deterministic; they agree to roundoff
and are cross-checked in the test suite.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
import scipy.fft

from .spectral import neighbor_sum
from .toric import ErrorConfig, flip_edges_inplace, logical_failure, syndrome

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# velocity schedules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantVelocity:
    """Sequence-independent field velocity."""

    c: int

    def __post_init__(self):
        if int(self.c) != self.c or self.c < 1:
            raise ValueError(f"velocity must be an integer >= 1, got {self.c!r}")


@dataclass(frozen=True)
class RampVelocity:
    """Velocity growing linearly with the sequence index."""

    slope: float = 0.2
    offset: float = 1.0


@dataclass(frozen=True)
class LogSquaredVelocity:
    """Constant velocity scaling as prefactor * log(L)^2."""

    prefactor: float = 10.0
    log_base: float = math.e


def _round_half_away(x: float) -> int:
    return int(math.floor(x + 0.5))


def resolve_velocity(schedule, tau: int, L: int) -> int:
    """Number of field updates in sequence ``tau`` on a size-L lattice.

    Real-valued schedules are rounded half away from zero and clamped to at
    least one update per sequence.
    """
    if tau < 0:
        raise ValueError("sequence index must be >= 0")
    if isinstance(schedule, ConstantVelocity):
        return int(schedule.c)
    if isinstance(schedule, RampVelocity):
        return max(1, _round_half_away(schedule.offset + schedule.slope * tau))
    if isinstance(schedule, LogSquaredVelocity):
        if schedule.log_base == math.e:
            lg = math.log(L)
        else:
            lg = math.log(L, schedule.log_base)
        return max(1, _round_half_away(schedule.prefactor * lg * lg))
    raise TypeError(f"unknown velocity schedule: {schedule!r}")


# ---------------------------------------------------------------------------
# configuration and outcome
# ---------------------------------------------------------------------------

class Status(Enum):
    SUCCESS = "success"
    LOGICAL_FAILURE = "logical_failure"
    ABORT = "abort"


@dataclass
class DecoderConfig:
    """Parameters of one automaton decoder variant.

    ``abort_sequences=None`` resolves to the defaults 10L (2D automata) or
    L (3D) at decode time.  ``field_guard`` caps |phi|; beyond it the global
    minimum is subtracted once (argmax-invariant) as an overflow safety net.
    """

    aux_dimension: int
    schedule: object
    eta: float = 0.5
    abort_sequences: int | None = None
    hop_probability: float = 0.5
    field_engine: str = "fft"
    field_guard: float = 1e12

    def __post_init__(self):
        if self.aux_dimension not in (2, 3):
            raise ValueError("auxiliary lattice dimension must be 2 or 3")
        if not 0.0 < self.eta <= 0.5:
            raise ValueError(f"smoothing parameter must be in (0, 1/2], got {self.eta}")
        if not 0.0 < self.hop_probability <= 1.0:
            raise ValueError("hop probability must be in (0, 1]")
        if self.abort_sequences is not None and self.abort_sequences < 1:
            raise ValueError("abort_sequences must be >= 1")
        if self.field_engine not in ("fft", "stencil"):
            raise ValueError(f"unknown field engine {self.field_engine!r}")


def decoder_2d(c: int, **kwargs) -> DecoderConfig:
    """2D automaton with a fixed velocity (no asymptotic threshold)."""
    return DecoderConfig(aux_dimension=2, schedule=ConstantVelocity(c), **kwargs)


def decoder_2dstar(**kwargs) -> DecoderConfig:
    """2D automaton with velocity ramping as 1 + 0.2 * tau."""
    return DecoderConfig(aux_dimension=2, schedule=RampVelocity(), **kwargs)


def decoder_3d(**kwargs) -> DecoderConfig:
    """3D automaton with constant velocity 10 * ln(L)^2."""
    return DecoderConfig(aux_dimension=3, schedule=LogSquaredVelocity(), **kwargs)


@dataclass
class DecodeOutcome:
    status: Status
    sequences_used: int
    elementary_updates: int
    residual_anyons: int = 0

    @property
    def failed(self) -> bool:
        return self.status is not Status.SUCCESS


# ---------------------------------------------------------------------------
# elementary updates
# ---------------------------------------------------------------------------

def field_update(phi: np.ndarray, q: np.ndarray, eta: float) -> np.ndarray:
    """One synchronous field update: smooth with the neighbor average, add charges.

    Every cell is recomputed from the frozen input buffer; the total field
    grows by exactly the total charge.  A 2D charge array is embedded in the
    x3 = 0 plane when ``phi`` is three-dimensional.
    """
    if not 0.0 < eta <= 0.5:
        raise ValueError(f"smoothing parameter must be in (0, 1/2], got {eta}")
    phi = np.asarray(phi, dtype=float)
    out = (1.0 - eta) * phi + (eta / (2 * phi.ndim)) * neighbor_sum(phi)
    if q.shape == phi.shape:
        out += q
    elif phi.ndim == 3 and q.shape == phi.shape[:2]:
        out[:, :, 0] += q
    else:
        raise ValueError(f"charge shape {q.shape} does not match field shape {phi.shape}")
    return out


def select_hops(values: np.ndarray, rng: np.random.Generator,
                hop_probability: float) -> tuple[np.ndarray, np.ndarray]:
    """Hop decisions from a (anyons x candidates) table of field values.

    An anyon is a mover candidate only if its row has a strictly unique
    maximum; candidates then hop with ``hop_probability`` each.  One uniform
    draw is consumed per candidate, in row (cell sweep) order, so decisions
    are reproducible for a seeded generator.
    """
    best = values.max(axis=1)
    unique = np.count_nonzero(values == best[:, None], axis=1) == 1
    idx = np.flatnonzero(unique)
    coins = rng.random(idx.size)
    movers = idx[coins < hop_probability]
    directions = values.argmax(axis=1)[movers]
    return movers, directions


def _neighbor_values(plane: np.ndarray, anyons: np.ndarray) -> np.ndarray:
    """Field at the 4 in-plane neighbors of each anyon, in (+x,-x,+y,-y) order."""
    L = plane.shape[0]
    x, y = anyons[:, 0], anyons[:, 1]
    return np.stack(
        [
            plane[(x + 1) % L, y],
            plane[(x - 1) % L, y],
            plane[x, (y + 1) % L],
            plane[x, (y - 1) % L],
        ],
        axis=1,
    )


def anyon_update(phi: np.ndarray, E: ErrorConfig, q: np.ndarray,
                 rng: np.random.Generator, hop_probability: float = 0.5
                 ) -> tuple[ErrorConfig, np.ndarray]:
    """One parallel anyon update against frozen ``phi`` and ``q``.

    Each anyon inspects its 4 in-plane neighbors (anyons never leave the
    toric plane); if the largest value is unique it hops there with
    ``hop_probability``, toggling the separating edge.  All recorded flips
    are applied afterwards as XOR, and the charges are recomputed from the
    new error configuration.
    """
    q = np.asarray(q, dtype=bool)
    if not np.array_equal(q, syndrome(E)):
        raise ValueError("charge array is inconsistent with the error configuration")
    plane = phi if phi.ndim == 2 else phi[:, :, 0]
    out = E.copy()
    anyons = np.argwhere(q)
    if anyons.size:
        values = _neighbor_values(plane, anyons)
        movers, directions = select_hops(values, rng, hop_probability)
        if movers.size:
            flip_edges_inplace(out.horizontal, out.vertical,
                               anyons[movers], directions)
    return out, syndrome(out)


# ---------------------------------------------------------------------------
# field engines
# ---------------------------------------------------------------------------

class StencilFieldEngine:
    """Reference engine: iterates the elementary field update."""

    def __init__(self, L: int, D: int, eta: float):
        self.eta = eta
        self.phi = np.zeros((L,) * D)
        self._q = None

    def set_charges(self, q: np.ndarray) -> None:
        self._q = np.asarray(q, dtype=float)

    def advance(self, c: int) -> np.ndarray:
        for _ in range(c):
            self.phi = field_update(self.phi, self._q, self.eta)
        return self.phi

    def subtract_constant(self, m: float) -> None:
        self.phi -= m


@lru_cache(maxsize=32)
def _rfft_eigenvalues(L: int, D: int, eta: float) -> np.ndarray:
    """Eigenvalues of the update map on the half-spectrum rfftn grid."""
    cos1d = np.cos(2.0 * np.pi * np.arange(L) / L)
    axes = [cos1d] * (D - 1) + [cos1d[: L // 2 + 1]]
    s = np.zeros([a.size for a in axes])
    for axis, a in enumerate(axes):
        shape = [1] * D
        shape[axis] = a.size
        s = s + a.reshape(shape)
    lam = 1.0 - eta + eta * s / D
    lam[(0,) * D] = 1.0
    lam.setflags(write=False)
    return lam


@lru_cache(maxsize=4096)
def _sequence_multipliers(L: int, D: int, eta: float, c: int):
    """Per-mode factors advancing c field updates at once.

    Over c updates every mode picks up lambda^c, and the frozen source
    accumulates the geometric sum (1 - lambda^c) / (1 - lambda); the uniform
    mode grows linearly by c.
    """
    lam = _rfft_eigenvalues(L, D, eta)
    lam_c = lam**c
    origin = (0,) * D
    gaps = 1.0 - lam
    gaps[origin] = 1.0  # avoid 0/0; overwritten below
    geom = (1.0 - lam_c) / gaps
    geom[origin] = float(c)
    lam_c[origin] = 1.0
    lam_c.setflags(write=False)
    geom.setflags(write=False)
    return lam_c, geom


class SpectralFieldEngine:
    """Advances whole sequences in the eigenbasis of the update map.

    The field is kept in half-spectrum form between sequences; one inverse
    transform per sequence materializes it for the anyon update.  Exactly
    equivalent to iterating the stencil up to roundoff.
    """

    def __init__(self, L: int, D: int, eta: float):
        self.L, self.D, self.eta = L, D, eta
        self.shape = (L,) * D
        _rfft_eigenvalues(L, D, eta)
        self.phi_hat = np.zeros((L,) * (D - 1) + (L // 2 + 1,), dtype=complex)
        self._q_hat = None

    def set_charges(self, q: np.ndarray) -> None:
        q_hat_plane = np.fft.fft2(np.asarray(q, dtype=float))
        if self.D == 2:
            self._q_hat = q_hat_plane[:, : self.L // 2 + 1]
        else:
            # charges live in the x3 = 0 plane: their spectrum is k3-independent
            self._q_hat = np.broadcast_to(
                q_hat_plane[:, :, None], self.phi_hat.shape
            )

    def advance(self, c: int) -> np.ndarray:
        lam_c, geom = _sequence_multipliers(self.L, self.D, self.eta, c)
        self.phi_hat *= lam_c
        self.phi_hat += self._q_hat * geom
        return scipy.fft.irfftn(self.phi_hat, s=self.shape)

    def subtract_constant(self, m: float) -> None:
        self.phi_hat[(0,) * self.D] -= m * self.L**self.D


def make_field_engine(cfg: DecoderConfig, L: int):
    cls = SpectralFieldEngine if cfg.field_engine == "fft" else StencilFieldEngine
    return cls(L, cfg.aux_dimension, cfg.eta)


# ---------------------------------------------------------------------------
# the decode loop
# ---------------------------------------------------------------------------

def decode(E: ErrorConfig, cfg: DecoderConfig, rng: np.random.Generator
           ) -> tuple[DecodeOutcome, ErrorConfig]:
    """Run the automaton until all anyons are gone or the abort cutoff hits.

    Returns the outcome and the recovery configuration R (the accumulated
    decoder flips); on success the status records whether E xor R wound
    around the torus.  Deterministic for a given (E, cfg, seeded rng).
    """
    L = E.L
    current = E.copy()
    q = syndrome(current)
    abort_at = cfg.abort_sequences
    if abort_at is None:
        abort_at = 10 * L if cfg.aux_dimension == 2 else L

    engine = make_field_engine(cfg, L)
    engine.set_charges(q)
    sequences = 0
    updates = 0
    while q.any():
        if sequences >= abort_at:
            return (
                DecodeOutcome(Status.ABORT, sequences, updates, int(q.sum())),
                E ^ current,
            )
        c = resolve_velocity(cfg.schedule, sequences, L)
        phi = engine.advance(c)
        if float(np.abs(phi).max()) > cfg.field_guard:
            m = float(phi.min())
            engine.subtract_constant(m)
            log.warning("field exceeded %.3g after %d sequences; shifted by %.3g",
                        cfg.field_guard, sequences, -m)
        current, q_new = anyon_update(phi, current, q, rng, cfg.hop_probability)
        if not np.array_equal(q_new, q):
            engine.set_charges(q_new)
        q = q_new
        sequences += 1
        updates += c + 1
    status = Status.LOGICAL_FAILURE if logical_failure(current) else Status.SUCCESS
    return DecodeOutcome(status, sequences, updates, 0), E ^ current
