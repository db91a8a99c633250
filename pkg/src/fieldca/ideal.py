"""Idealized decoders driven by exact long-range potentials.

Instead of letting an automaton build the field locally, these decoders
recompute the summed potential of all anyons exactly before every anyon
update, probing the regime of large field velocity where the field is always
stationary.  The potential family is a power law in the minimal-image
Euclidean torus distance,

* ``r**-alpha``  for alpha > 0,
* ``-log(r)``    for alpha = 0,
* ``-r**-alpha`` for alpha < 0,

all monotonically decreasing in r so that anyons are mutually attractive.
A 1D variant on the repetition code locates the field-range transition.

Anyon hops follow the automaton's update rule (largest neighbor value wins,
hop probability 1/2, simultaneous XOR application) with two adaptations that
the exact potentials force:

* When a candidate cell hosts another anyon, its value is the r -> 0 limit of
  that anyon's potential (infinite for alpha >= 0, zero for alpha < 0): the
  occupant dominates its own cell, exactly as the automaton's built-up field
  peaks at a charge.  An anyon's own contribution is the same at all of its
  candidate cells (they all sit at distance 1) and is excluded.
* Exact potentials make symmetric configurations exactly degenerate — a
  diagonal anyon pair sees the same value at two candidates and would freeze
  forever, which the automaton's field fluctuations never allow.  A partially
  degenerate maximum is therefore resolved uniformly at random among the tied
  candidates; a fully degenerate row (no information at all, e.g. an isolated
  anyon) still freezes.
"""

from __future__ import annotations

import numpy as np

from .automaton import DecodeOutcome, Status
from .toric import ErrorConfig, flip_edges_inplace, logical_failure, syndrome


def potential(alpha: float, r) -> np.ndarray | float:
    """Power-law potential at distance ``r >= 1``, branching on the sign of alpha."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 1.0):
        raise ValueError("potentials are only evaluated at inter-cell distances >= 1")
    if alpha > 0:
        out = r**-alpha
    elif alpha == 0:
        out = -np.log(r)
    else:
        out = -(r**-alpha)
    return out if out.ndim else float(out)


def source_limit(alpha: float) -> float:
    """The r -> 0+ limit of the potential: the value an anyon sees on an occupied cell."""
    return np.inf if alpha >= 0 else 0.0


def ideal_field(q: np.ndarray, alpha: float) -> np.ndarray:
    """Summed anyon potential at every cell, skipping each anyon's own cell."""
    q = np.asarray(q, dtype=bool)
    if not q.any():
        raise ValueError("ideal_field needs at least one anyon")
    L = q.shape[0]
    anyons = np.argwhere(q)
    coords = np.indices(q.shape).reshape(2, -1).T
    d = np.abs(coords[:, None, :] - anyons[None, :, :])
    d = np.minimum(d, L - d)
    r = np.sqrt((d.astype(float) ** 2).sum(axis=2))
    contrib = np.zeros_like(r)
    away = r > 0
    contrib[away] = potential(alpha, r[away])
    return contrib.sum(axis=1).reshape(q.shape)


_PLANE_STEPS = np.array([[1, 0], [-1, 0], [0, 1], [0, -1]])


def _candidate_values(anyons: np.ndarray, alpha: float, L: int) -> np.ndarray:
    """Decision table: potential from all other anyons at each anyon's 4 neighbors."""
    n = anyons.shape[0]
    cand = (anyons[:, None, :] + _PLANE_STEPS[None, :, :]) % L
    d = np.abs(cand[:, :, None, :] - anyons[None, None, :, :])
    d = np.minimum(d, L - d)
    r = np.sqrt((d.astype(float) ** 2).sum(axis=3))
    values = np.empty_like(r)
    occupied = r == 0.0
    values[~occupied] = potential(alpha, r[~occupied])
    values[occupied] = source_limit(alpha)
    values[np.arange(n), :, np.arange(n)] = 0.0  # evaluator's own field
    return values.sum(axis=2)


def ideal_decode(E: ErrorConfig, alpha: float, rng: np.random.Generator,
                 abort_sequences: int | None = None,
                 hop_probability: float = 0.5
                 ) -> tuple[DecodeOutcome, ErrorConfig]:
    """Alternate exact potential evaluation and anyon updates until done.

    Same contract as :func:`fieldca.automaton.decode`; the default abort
    cutoff is 10 L sequences, matching the 2D automata.  Each sequence counts
    as one elementary update (the field step is instantaneous).
    """
    L = E.L
    if abort_sequences is None:
        abort_sequences = 10 * L
    current = E.copy()
    q = syndrome(current)
    sequences = 0
    while q.any():
        if sequences >= abort_sequences:
            return (
                DecodeOutcome(Status.ABORT, sequences, sequences, int(q.sum())),
                E ^ current,
            )
        anyons = np.argwhere(q)
        values = _candidate_values(anyons, alpha, L)
        movers, directions = select_hops(values, rng, hop_probability)
        if movers.size:
            flip_edges_inplace(current.horizontal, current.vertical,
                               anyons[movers], directions)
            q = syndrome(current)
        sequences += 1
    status = Status.LOGICAL_FAILURE if logical_failure(current) else Status.SUCCESS
    return DecodeOutcome(status, sequences, sequences, 0), E ^ current


# ---------------------------------------------------------------------------
# 1D repetition code on a ring
# ---------------------------------------------------------------------------

def sample_ring_noise(L: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Flip each of the L ring edges independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"error probability must be in [0, 1], got {p}")
    return rng.random(L) < p


def ring_walls(edges: np.ndarray) -> np.ndarray:
    """Domain-wall indicator per cell; edge i joins cells i and i+1."""
    return edges ^ np.roll(edges, 1)


def ring_logical_failure(edges: np.ndarray) -> bool:
    """Winding parity of a wall-free ring configuration at a fixed cut."""
    if ring_walls(edges).any():
        raise ValueError("ring_logical_failure requires a wall-free configuration")
    return bool(edges[0])


def _ring_candidate_values(walls_at: np.ndarray, alpha: float, L: int) -> np.ndarray:
    """Decision table for ring walls: 2 neighbor cells each, (+1, -1) order."""
    n = walls_at.shape[0]
    cand = (walls_at[:, None] + np.array([1, -1])) % L
    d = np.abs(cand[:, :, None] - walls_at[None, None, :])
    r = np.minimum(d, L - d).astype(float)
    values = np.empty_like(r)
    occupied = r == 0.0
    values[~occupied] = potential(alpha, r[~occupied])
    values[occupied] = source_limit(alpha)
    values[np.arange(n), :, np.arange(n)] = 0.0
    return values.sum(axis=2)


def repetition_decode(edges: np.ndarray, alpha: float, rng: np.random.Generator,
                      abort_sequences: int | None = None,
                      hop_probability: float = 0.5) -> DecodeOutcome:
    """Ideal-potential decoding of the repetition code on a ring of L edges."""
    edges = np.array(edges, dtype=bool)
    L = edges.shape[0]
    if abort_sequences is None:
        abort_sequences = 10 * L
    walls = ring_walls(edges)
    sequences = 0
    while walls.any():
        if sequences >= abort_sequences:
            return DecodeOutcome(Status.ABORT, sequences, sequences, int(walls.sum()))
        at = np.flatnonzero(walls)
        values = _ring_candidate_values(at, alpha, L)
        movers, directions = select_hops(values, rng, hop_probability)
        if movers.size:
            # hop +1 flips the wall's right edge, hop -1 its left edge
            cells = at[movers]
            flipped = np.where(directions == 0, cells, (cells - 1) % L)
            np.logical_xor.at(edges, flipped, True)
            walls = ring_walls(edges)
        sequences += 1
    status = Status.LOGICAL_FAILURE if ring_logical_failure(edges) else Status.SUCCESS
    return DecodeOutcome(status, sequences, sequences, 0)
