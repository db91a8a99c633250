"""Periodic hypercubic lattice geometry shared by all decoder components.

Cells are addressed by integer coordinate tuples ``(x1, ..., xD)``, every axis
taken modulo ``L``; arrays living on the lattice use the matching row-major
``(L,) * D`` shape.  Neighbor enumeration is fixed to the axis order
``(+e1, -e1, +e2, -e2, +e3, -e3)`` so that argmax tie detection downstream is
deterministic and identical across runs.
"""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np

#: Unit steps in the fixed neighbor order, per dimension.
NEIGHBOR_STEPS = {
    1: ((1,), (-1,)),
    2: ((1, 0), (-1, 0), (0, 1), (0, -1)),
    3: ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)),
}


class TorusLattice:
    """An ``L`` x ... x ``L`` periodic lattice in ``D`` dimensions (D = 1, 2, 3).

    Immutable after construction; safe for concurrent reads.
    """

    def __init__(self, L: int, D: int):
        if not isinstance(L, (int, np.integer)) or L < 3:
            raise ValueError(f"lattice size must be an integer >= 3, got {L!r}")
        if D not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {D!r}")
        self.L = int(L)
        self.D = int(D)
        self.shape = (self.L,) * self.D
        self.n_cells = self.L**self.D

    def __repr__(self):
        return f"TorusLattice(L={self.L}, D={self.D})"

    def wrap(self, coords) -> tuple:
        """Reduce coordinates modulo L onto the canonical cell."""
        self._check_coords(coords)
        return tuple(int(c) % self.L for c in coords)

    def neighbors(self, coords) -> list[tuple]:
        """The 2D cells at torus distance 1, in the fixed axis order."""
        x = self.wrap(coords)
        L = self.L
        return [
            tuple((xi + si) % L for xi, si in zip(x, step))
            for step in NEIGHBOR_STEPS[self.D]
        ]

    @cached_property
    def neighbor_indices(self) -> np.ndarray:
        """Flat row-major cell index of each neighbor, shape ``(n_cells, 2D)``.

        Precomputed once; the field update is a stencil sweep, so neighbor
        lookup dominates everything built on top of it.
        """
        idx = np.arange(self.n_cells).reshape(self.shape)
        cols = []
        for step in NEIGHBOR_STEPS[self.D]:
            shifted = idx
            for axis, s in enumerate(step):
                if s:
                    # roll by -s: entry at x picks up the index of x + s
                    shifted = np.roll(shifted, -s, axis=axis)
            cols.append(shifted.ravel())
        out = np.stack(cols, axis=1)
        out.setflags(write=False)
        return out

    def ravel(self, coords) -> int:
        """Row-major flat index of a cell."""
        x = self.wrap(coords)
        i = 0
        for c in x:
            i = i * self.L + c
        return i

    def unravel(self, index: int) -> tuple:
        """Inverse of :meth:`ravel`."""
        return tuple(int(c) for c in np.unravel_index(index, self.shape))

    def _check_coords(self, coords):
        if len(coords) != self.D:
            raise ValueError(
                f"expected {self.D} coordinates, got {len(coords)}: {coords!r}"
            )

    def _axis_deltas(self, x, y):
        self._check_coords(x)
        self._check_coords(y)
        L = self.L
        for a, b in zip(x, y):
            d = abs(int(a) - int(b)) % L
            yield min(d, L - d)

    def distance(self, x, y) -> float:
        """Minimal-image Euclidean distance between two cells."""
        return math.sqrt(sum(d * d for d in self._axis_deltas(x, y)))

    def l1_distance(self, x, y) -> int:
        """Minimal-image L1 distance between two cells."""
        return sum(self._axis_deltas(x, y))
