"""Spectral analysis of the field-update map for frozen charge configurations.

The synchronous field update is a doubly stochastic, translation-invariant
linear map plus a source term, so it is diagonalized by Fourier waves.  This
module exposes the eigenvalues, stationary (zero-mean) fields, the global
equilibration bound, the stationary gradient seen by a hopping excitation, and
the position-dependent self-interaction time bound.  Everything here operates
on frozen charges; time-dependent anyon motion lives in :mod:`.automaton`.
"""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np

from .lattice import NEIGHBOR_STEPS, TorusLattice

#: Max tolerated imaginary residue when inverse-transforming real fields.
IMAG_TOL = 1e-9


def neighbor_sum(values: np.ndarray) -> np.ndarray:
    """Sum of the 2D neighbor values at every cell (periodic stencil)."""
    out = np.zeros_like(values, dtype=float)
    for axis in range(values.ndim):
        out += np.roll(values, -1, axis=axis)
        out += np.roll(values, 1, axis=axis)
    return out


def rescale(values: np.ndarray) -> np.ndarray:
    """Subtract the mean; only field differences steer anyons."""
    values = np.asarray(values, dtype=float)
    return values - values.mean()


def critical_velocity(L: int) -> float:
    """Scaling reference ln(L)^2 for the minimum useful field velocity.

    Order estimate with unit prefactor, used in diagnostics and plots.
    """
    if L < 3:
        raise ValueError("L must be >= 3")
    return math.log(L) ** 2


class SpectralModel:
    """Eigen-structure of the update map on an (L,)*D torus with smoothing eta."""

    def __init__(self, L: int, D: int, eta: float):
        if not 0.0 < eta <= 0.5:
            raise ValueError(f"smoothing parameter must be in (0, 1/2], got {eta}")
        self.lattice = TorusLattice(L, D)
        self.L = self.lattice.L
        self.D = self.lattice.D
        self.eta = float(eta)

    def __repr__(self):
        return f"SpectralModel(L={self.L}, D={self.D}, eta={self.eta})"

    def eigenvalue(self, k) -> float:
        """Eigenvalue of the update map at integer wave vector ``k``."""
        k = self.lattice.wrap(k)
        s = sum(math.cos(2.0 * math.pi * kj / self.L) for kj in k)
        return 1.0 - self.eta + self.eta * s / self.D

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        """All eigenvalues as an (L,)*D grid indexed by the wave vector."""
        cos1d = np.cos(2.0 * np.pi * np.arange(self.L) / self.L)
        s = np.zeros(self.lattice.shape)
        for axis in range(self.D):
            shape = [1] * self.D
            shape[axis] = self.L
            s = s + cos1d.reshape(shape)
        lam = 1.0 - self.eta + self.eta * s / self.D
        lam[(0,) * self.D] = 1.0
        lam.setflags(write=False)
        return lam

    @property
    def lambda_max(self) -> float:
        """Largest nondominant eigenvalue; attained at k = (1, 0, ...)."""
        return self.eigenvalue((1,) + (0,) * (self.D - 1))

    def apply_update_matrix(self, v: np.ndarray) -> np.ndarray:
        """Matrix-free application of the update map (no sources)."""
        v = np.asarray(v)
        if v.shape != self.lattice.shape:
            raise ValueError(f"expected field of shape {self.lattice.shape}")
        return (1.0 - self.eta) * v + self.eta / (2 * self.D) * neighbor_sum(v)

    def _embed_charges(self, q: np.ndarray) -> np.ndarray:
        """Lift a toric-plane charge array into the auxiliary lattice."""
        q = np.asarray(q, dtype=float)
        if q.shape == self.lattice.shape:
            return q
        if self.D == 3 and q.shape == (self.L, self.L):
            full = np.zeros(self.lattice.shape)
            full[:, :, 0] = q
            return full
        raise ValueError(f"charge array of shape {q.shape} does not fit L={self.L}, D={self.D}")

    def stationary_field(self, q: np.ndarray) -> np.ndarray:
        """Zero-mean fixed point of the rescaled dynamics for frozen charges.

        Computed by Fourier transform: each nonzero mode is divided by one
        minus its eigenvalue, the zero mode is dropped.  Charges given as an
        (L, L) plane are embedded at x3 = 0 when D = 3.
        """
        q = self._embed_charges(q)
        q_hat = np.fft.fftn(q)
        gaps = 1.0 - self.eigenvalues
        coeff = np.zeros_like(q_hat)
        nonzero = gaps != 0.0
        coeff[nonzero] = q_hat[nonzero] / gaps[nonzero]
        field = np.fft.ifftn(coeff)
        residue = float(np.abs(field.imag).max()) if field.size else 0.0
        assert residue < IMAG_TOL, f"imaginary residue {residue} exceeds {IMAG_TOL}"
        return field.real

    def stationary_field_direct(self, q: np.ndarray) -> np.ndarray:
        """Stationary field by explicit double Fourier sum, O(L^2D).

        Slow-path oracle for the transform implementation; intended for
        small lattices.
        """
        q = self._embed_charges(q)
        lat = self.lattice
        coords = np.indices(lat.shape).reshape(self.D, -1).T
        phase = np.exp(2j * np.pi * (coords @ coords.T) / self.L)
        q_hat = phase.conj().T @ q.ravel()
        gaps = 1.0 - self.eigenvalues.ravel()
        coeff = np.where(gaps != 0.0, q_hat / np.where(gaps == 0.0, 1.0, gaps), 0.0)
        field = (phase @ coeff) / lat.n_cells
        assert float(np.abs(field.imag).max()) < IMAG_TOL
        return field.real.reshape(lat.shape)

    @cached_property
    def unit_charge_field(self) -> np.ndarray:
        """Stationary field of a single charge at the origin."""
        q = np.zeros(self.lattice.shape)
        q[(0,) * self.D] = 1.0
        field = self.stationary_field(q)
        field.setflags(write=False)
        return field

    def equilibration_bound(self, t: int) -> float:
        """Decay factor exp(-(eta pi^2 / D) t / L^2) bounding the 2-norm error.

        Valid for L >= 4, where the nondominant spectral radius is at most
        1 - eta pi^2 / (D L^2).
        """
        if t < 0:
            raise ValueError("t must be >= 0")
        if self.L < 4:
            raise ValueError("equilibration bound requires L >= 4")
        return math.exp(-(self.eta * math.pi**2 / self.D) * t / self.L**2)

    def stationary_gradient_at_origin(self, y) -> np.ndarray:
        """Discrete gradient at the origin of the field of a charge at ``y``.

        Component j is the field difference between the origin and its +e_j
        neighbor; the magnitude is the pull a charge at distance ``y`` exerts
        on an excitation sitting at the origin.
        """
        y = self.lattice.wrap(y)
        if all(c == 0 for c in y):
            raise ValueError("self-gradient at the charge location is undefined")
        phi = self.unit_charge_field
        minus_y = tuple((-c) % self.L for c in y)
        grad = np.empty(self.D)
        for j in range(self.D):
            e_j = NEIGHBOR_STEPS[self.D][2 * j]
            shifted = tuple((e - c) % self.L for e, c in zip(e_j, y))
            grad[j] = phi[minus_y] - phi[shifted]
        return grad


def dense_update_matrix(L: int, D: int, eta: float) -> np.ndarray:
    """The update map as an explicit (L^D, L^D) matrix; test oracle only."""
    lat = TorusLattice(L, D)
    n = lat.n_cells
    G = np.zeros((n, n))
    np.fill_diagonal(G, 1.0 - eta)
    w = eta / (2 * D)
    for i in range(n):
        for j in lat.neighbor_indices[i]:
            G[i, j] += w
    return G


def _hop_step(D: int, hop_axis: int, hop_sign: int) -> tuple:
    e = [0] * D
    e[hop_axis] = hop_sign
    return tuple(e)


def self_interaction_chi(D: int, eta: float, x, hop_axis: int = 0,
                         hop_sign: int = 1) -> float:
    """Position factor chi(x) of the self-interaction time bound.

    ``x`` is the displacement from the cell a charge just hopped out of, and
    the hop went one step along ``hop_axis`` with ``hop_sign``.
    """
    if D not in (2, 3):
        raise ValueError("self-interaction bound requires D in {2, 3}")
    if not 0.0 < eta <= 0.5:
        raise ValueError(f"smoothing parameter must be in (0, 1/2], got {eta}")
    e = _hop_step(D, hop_axis, hop_sign)
    norm1 = sum(abs(2 * xi + ei) for xi, ei in zip(x, e))
    prefactor = math.pi**2 * eta * (D - 1) / (2 * math.e * D**2)
    base = D * norm1 * 2**D / (2 * eta)
    return prefactor * base ** (2.0 / (D - 1))


def self_interaction_chi_prime(D: int, eta: float, x) -> float:
    """Simplified upper bound on chi(x), independent of the hop direction."""
    if D not in (2, 3):
        raise ValueError("self-interaction bound requires D in {2, 3}")
    norm1 = sum(abs(xi) for xi in x)
    if D == 2:
        return 8.0 * (2 * norm1 + 1) ** 2 / eta
    return 5.0 * (2 * norm1 + 1)


def self_interaction_time(D: int, eta: float, x, epsilon: float,
                          hop_axis: int = 0, hop_sign: int = 1) -> float:
    """Field updates after which the residual self-field at ``x`` is <= epsilon.

    Upper bound chi(x) * epsilon^(2/(1-D)); after this many updates the
    leftover field of a charge that hopped away no longer masks gradients of
    size epsilon.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    chi = self_interaction_chi(D, eta, x, hop_axis, hop_sign)
    return chi * epsilon ** (2.0 / (1.0 - D))
