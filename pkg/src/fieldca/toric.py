"""One error sector of the toric code on an L x L periodic lattice.

Qubits sit on the edges of the lattice; we track only X errors and the
plaquette excitations (anyons) they create — the Z sector is an independent
copy of the same problem.  Cells of the lattice are the plaquettes, and every
edge separates two adjacent cells:

* ``horizontal[x, y]`` is the edge between cells ``(x, y)`` and ``(x+1, y)``,
* ``vertical[x, y]``   is the edge between cells ``(x, y)`` and ``(x, y+1)``,

with 2 L^2 edges in total.  Error configurations compose by XOR.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: In-plane hop directions, aligned with the lattice neighbor order.
PLUS_X, MINUS_X, PLUS_Y, MINUS_Y = 0, 1, 2, 3


@dataclass
class ErrorConfig:
    """Per-edge X-error indicators for one error sector."""

    horizontal: np.ndarray
    vertical: np.ndarray

    @classmethod
    def empty(cls, L: int) -> "ErrorConfig":
        return cls(np.zeros((L, L), dtype=bool), np.zeros((L, L), dtype=bool))

    @property
    def L(self) -> int:
        return self.horizontal.shape[0]

    def __post_init__(self):
        h, v = self.horizontal, self.vertical
        if h.shape != v.shape or h.ndim != 2 or h.shape[0] != h.shape[1]:
            raise ValueError("edge arrays must both be square L x L")
        self.horizontal = np.asarray(h, dtype=bool)
        self.vertical = np.asarray(v, dtype=bool)

    def __xor__(self, other: "ErrorConfig") -> "ErrorConfig":
        return ErrorConfig(self.horizontal ^ other.horizontal,
                           self.vertical ^ other.vertical)

    def __eq__(self, other) -> bool:
        return (isinstance(other, ErrorConfig)
                and np.array_equal(self.horizontal, other.horizontal)
                and np.array_equal(self.vertical, other.vertical))

    def copy(self) -> "ErrorConfig":
        return ErrorConfig(self.horizontal.copy(), self.vertical.copy())

    def weight(self) -> int:
        """Number of edges carrying an error."""
        return int(self.horizontal.sum() + self.vertical.sum())


def sample_iid_noise(L: int, p: float, rng: np.random.Generator) -> ErrorConfig:
    """Flip each of the 2 L^2 edges independently with probability ``p``.

    Horizontal edges consume the generator first, then vertical ones, so the
    result is reproducible for a given seeded ``rng``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"error probability must be in [0, 1], got {p}")
    h = rng.random((L, L)) < p
    v = rng.random((L, L)) < p
    return ErrorConfig(h, v)


def syndrome(E: ErrorConfig) -> np.ndarray:
    """Anyon indicator per cell: parity of the four edges bounding each cell."""
    h, v = E.horizontal, E.vertical
    return (h ^ np.roll(h, 1, axis=0)) ^ (v ^ np.roll(v, 1, axis=1))


def flip_edge(E: ErrorConfig, cell, direction: int) -> ErrorConfig:
    """Toggle the edge between ``cell`` and its neighbor in ``direction``.

    Pure: returns a new configuration whose syndrome differs from the input's
    exactly on those two cells.
    """
    out = E.copy()
    flip_edges_inplace(out.horizontal, out.vertical,
                       np.array([[cell[0], cell[1]]]), np.array([direction]))
    return out


def flip_edges_inplace(h: np.ndarray, v: np.ndarray,
                       cells: np.ndarray, directions: np.ndarray) -> None:
    """XOR-toggle one edge per (cell, direction) pair, parity-safe.

    Repeated edges cancel, which is what makes simultaneous anyon hops
    order-independent.
    """
    L = h.shape[0]
    x, y, d = cells[:, 0], cells[:, 1], directions
    ex = np.where(d == MINUS_X, (x - 1) % L, x)
    ey = np.where(d == MINUS_Y, (y - 1) % L, y)
    is_h = d < 2
    np.logical_xor.at(h, (ex[is_h], ey[is_h]), True)
    np.logical_xor.at(v, (ex[~is_h], ey[~is_h]), True)


def logical_failure(E_total: ErrorConfig) -> bool:
    """Whether a syndrome-free configuration winds around either torus cycle.

    The winding parity is read off two fixed cuts: horizontal edges crossing
    the plane between columns x=0 and x=1, and vertical edges crossing the one
    between rows y=0 and y=1.  For cycles the parity is cut-independent.
    """
    q = syndrome(E_total)
    if q.any():
        raise ValueError("logical_failure requires a syndrome-free configuration")
    wind_x = int(E_total.horizontal[0, :].sum()) % 2
    wind_y = int(E_total.vertical[:, 0].sum()) % 2
    return bool(wind_x or wind_y)


def plaquette_boundary(L: int, cell) -> ErrorConfig:
    """The four edges forming the closed loop around one lattice vertex.

    XOR-ing it onto any configuration changes neither the syndrome nor the
    winding parity (it is a stabilizer).
    """
    x, y = int(cell[0]) % L, int(cell[1]) % L
    out = ErrorConfig.empty(L)
    out.horizontal[x, y] = True
    out.horizontal[x, (y + 1) % L] = True
    out.vertical[x, y] = True
    out.vertical[(x + 1) % L, y] = True
    return out


def format_error_ascii(E: ErrorConfig, q: np.ndarray | None = None) -> str:
    """Render an error configuration as an ASCII grid (debugging aid).

    One cell per grid position: ``o`` marks an anyon, ``.`` an unexcited cell.
    A ``-`` right of a cell marks an error on its +x horizontal edge, a ``|``
    below it an error on its +y vertical edge.  Axis 0 (x) runs left to
    right, axis 1 (y) top to bottom.
    """
    if q is None:
        q = syndrome(E)
    L = E.L
    lines = []
    for y in range(L):
        cells = "".join(
            ("o" if q[x, y] else ".") + ("-" if E.horizontal[x, y] else " ")
            for x in range(L)
        )
        bonds = "".join(
            ("|" if E.vertical[x, y] else " ") + " " for x in range(L)
        )
        lines.append(cells)
        lines.append(bonds)
    return "\n".join(lines)
