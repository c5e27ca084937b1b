"""Long-range Ising chain in a transverse field.

The chain of N spins is governed by

    H = - sum_{i<j} J_ij sigma_x^(i) sigma_x^(j) - B sum_i sigma_y^(i),

with power-law couplings J_ij = J0 / |i - j|^alpha on an open chain.  Units
put hbar = k_B = 1 and |J0| = 1, so the field enters as the swept ratio B/J0
and times are measured in 1/J0.

H is invariant under the Z2 operation sigma_x -> -sigma_x, sigma_y ->
sigma_y, realized by the product of sigma_y over all sites.  The spectrum
routines resolve every (near-)degenerate level into that parity basis so each
eigenvector carries a definite parity of +1 or -1, which pins down a unique
ground state even when the low-field ground manifold is two-fold degenerate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qcore import (
    MAX_SITES,
    SIGMA_X,
    SIGMA_Y,
    DensityMatrix,
    PureState,
    SpectralDecomposition,
    _fix_phases,
    embed_site_operator,
    hermitian_eig,
)

# Fraction of the spectral width below which two levels count as degenerate.
DEGENERACY_TOL_SCALE = 1e-8
PARITY_TOL = 1e-8


@dataclass(frozen=True)
class SpinChainParams:
    """Physical configuration of the chain."""

    n_sites: int
    j0: float = 1.0
    alpha: float = 1.0
    b_field: float = 1.0

    def __post_init__(self):
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        if self.n_sites > MAX_SITES:
            raise ValueError(f"n_sites {self.n_sites} exceeds dense cap {MAX_SITES}")
        if self.alpha <= 0.0:
            raise ValueError("alpha must be positive")

    @property
    def dim(self) -> int:
        return 2**self.n_sites


@dataclass(frozen=True)
class ModelSpectrum:
    """Parity-resolved eigensystem of the chain Hamiltonian."""

    params: SpinChainParams
    decomposition: SpectralDecomposition
    parity_values: np.ndarray
    degeneracy_tol: float

    def __post_init__(self):
        pv = np.asarray(self.parity_values, dtype=float).ravel()
        if pv.size != self.decomposition.dim:
            raise ValueError("one parity value per eigenstate required")
        if np.abs(np.abs(pv) - 1.0).max() > PARITY_TOL:
            raise ValueError("parity values must be +/-1 within tolerance")
        pv = np.array(pv, copy=True)
        pv.setflags(write=False)
        object.__setattr__(self, "parity_values", pv)

    @property
    def eigenvalues(self) -> np.ndarray:
        return self.decomposition.eigenvalues

    @property
    def eigenvectors(self) -> np.ndarray:
        return self.decomposition.eigenvectors


def coupling(i: int, j: int, j0: float, alpha: float) -> float:
    """Pair coupling J0 / |i - j|^alpha between two distinct sites."""
    if i == j:
        raise ValueError("coupling requires two distinct sites")
    return j0 / abs(i - j) ** alpha


def build_hamiltonian(params: SpinChainParams) -> np.ndarray:
    """Dense 2^N Hamiltonian matrix for the open chain."""
    n = params.n_sites
    dim = params.dim
    h = np.zeros((dim, dim), dtype=complex)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            left = np.eye(2 ** (i - 1), dtype=complex)
            mid = np.eye(2 ** (j - i - 1), dtype=complex)
            right = np.eye(2 ** (n - j), dtype=complex)
            term = np.kron(np.kron(np.kron(np.kron(left, SIGMA_X), mid), SIGMA_X), right)
            h -= coupling(i, j, params.j0, params.alpha) * term
    if params.b_field != 0.0:
        for i in range(1, n + 1):
            h -= params.b_field * embed_site_operator(SIGMA_Y, i, n)
    return h


def parity_operator(n_sites: int) -> np.ndarray:
    """Product of sigma_y over all sites; the Z2 symmetry of the Hamiltonian."""
    if n_sites < 1:
        raise ValueError("n_sites must be >= 1")
    p = np.array([[1.0 + 0.0j]])
    for _ in range(n_sites):
        p = np.kron(p, SIGMA_Y)
    return p


def spectrum(params: SpinChainParams, degeneracy_tol: float | None = None) -> ModelSpectrum:
    """Eigensystem of the chain with every level resolved into definite parity.

    Clusters of eigenvalues closer than `degeneracy_tol` (default: 1e-8 of
    the spectral width) are re-diagonalized in the parity operator; isolated
    eigenvectors are purified by projection onto their dominant parity
    sector.  Both steps leave the eigenvalues untouched.
    """
    h = build_hamiltonian(params)
    dec = hermitian_eig(h)
    w = np.array(dec.eigenvalues, copy=True)
    v = np.array(dec.eigenvectors, copy=True)
    dim = w.size

    if degeneracy_tol is None:
        width = float(w[-1] - w[0])
        degeneracy_tol = DEGENERACY_TOL_SCALE * width + 1e-14

    p = parity_operator(params.n_sites)

    # group consecutive levels separated by less than the tolerance
    clusters = []
    start = 0
    for k in range(1, dim):
        if w[k] - w[k - 1] >= degeneracy_tol:
            clusters.append((start, k))
            start = k
    clusters.append((start, dim))

    parities = np.empty(dim)
    for a, b in clusters:
        if b - a > 1:
            block = v[:, a:b]
            overlap = block.conj().T @ (p @ block)
            pdec = hermitian_eig(overlap)
            v[:, a:b] = block @ pdec.eigenvectors
            parities[a:b] = pdec.eigenvalues
        else:
            vec = v[:, a]
            parities[a] = (vec.conj() @ (p @ vec)).real

    # project each vector onto its dominant parity sector; for symmetry
    # multiplets this is a no-op, for isolated levels it strips the tiny
    # opposite-parity contamination the eigensolver leaves behind
    pv = p @ v
    signs = np.where(parities >= 0.0, 1.0, -1.0)
    v = v + signs * pv
    v /= np.linalg.norm(v, axis=0)
    v = _fix_phases(v)
    pv = p @ v
    parities = np.einsum("ik,ik->k", v.conj(), pv).real

    return ModelSpectrum(params, SpectralDecomposition(w, v), parities,
                         float(degeneracy_tol))


def energy_gap(spec: ModelSpectrum) -> float:
    """Gap between the two lowest levels of the globally sorted spectrum."""
    w = spec.eigenvalues
    if w.size < 2:
        raise ValueError("need at least two levels for a gap")
    return max(0.0, float(w[1] - w[0]))


def ground_state(spec: ModelSpectrum) -> PureState:
    """Lowest eigenstate; ties within the degeneracy tolerance resolve to parity +1.

    The +1 sector contains the strong-field product state with all spins
    along +y, so this choice continues the ground state adiabatically across
    the whole field range and keeps sweep output deterministic.
    """
    w = spec.eigenvalues
    members = np.nonzero(w - w[0] < spec.degeneracy_tol)[0]
    pick = int(members[0])
    if members.size > 1:
        positive = members[spec.parity_values[members] > 0.0]
        if positive.size:
            pick = int(positive[0])
    return PureState(spec.eigenvectors[:, pick], spec.params.n_sites)


def thermal_state(spec: ModelSpectrum, beta: float) -> DensityMatrix:
    """Gibbs state exp(-beta H)/Z built in the eigenbasis.

    Energies are shifted by the ground energy before exponentiation so large
    beta stays finite; beta = 0 gives the maximally mixed state.
    """
    if beta < 0.0:
        raise ValueError("beta must be >= 0")
    w = spec.eigenvalues
    weights = np.exp(-beta * (w - w[0]))
    weights /= weights.sum()
    v = spec.eigenvectors
    rho = (v * weights) @ v.conj().T
    rho = (rho + rho.conj().T) / 2.0
    return DensityMatrix(rho, spec.params.n_sites)
