"""Dense linear algebra and quantum-state primitives for N-qubit chains.

Everything here works on explicit 2^N-dimensional complex arrays.  Sites are
numbered 1..N from the left end of the chain, and site 1 occupies the most
significant bit of the computational (sigma_z product) basis index.  All
functions are pure; arrays stored on the domain types are locked read-only so
values can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Largest chain handled with dense 2^N x 2^N storage.
MAX_SITES = 14

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
ID2 = np.eye(2, dtype=complex)

for _p in (SIGMA_X, SIGMA_Y, SIGMA_Z, ID2):
    _p.setflags(write=False)

NORM_TOL = 1e-12
HERM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=complex, copy=True)
    out.setflags(write=False)
    return out


def _sites_from_dim(dim: int) -> int:
    n = int(round(math.log2(dim)))
    if 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def _check_site(site: int, n_sites: int) -> None:
    if not 1 <= site <= n_sites:
        raise ValueError(f"site {site} out of range 1..{n_sites}")


@dataclass(frozen=True)
class PureState:
    """Normalized state vector of an N-qubit chain."""

    amplitudes: np.ndarray
    n_sites: int

    def __post_init__(self):
        vec = np.asarray(self.amplitudes, dtype=complex).ravel()
        if self.n_sites < 1:
            raise ValueError("n_sites must be >= 1")
        if vec.size != 2**self.n_sites:
            raise ValueError(
                f"length {vec.size} does not match 2^{self.n_sites} amplitudes"
            )
        nrm = np.linalg.norm(vec)
        if abs(nrm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {nrm!r} deviates from 1 beyond {NORM_TOL}")
        object.__setattr__(self, "amplitudes", _frozen(vec))

    @classmethod
    def from_amplitudes(cls, vec) -> "PureState":
        vec = np.asarray(vec, dtype=complex).ravel()
        return cls(vec, _sites_from_dim(vec.size))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> "DensityMatrix":
        """|psi><psi| as a DensityMatrix."""
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()),
                             self.n_sites)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator on N qubits."""

    entries: np.ndarray
    n_sites: int

    def __post_init__(self):
        mat = np.asarray(self.entries, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("density matrix must be square")
        if mat.shape[0] != 2**self.n_sites:
            raise ValueError(
                f"dimension {mat.shape[0]} does not match 2^{self.n_sites}"
            )
        herm = np.abs(mat - mat.conj().T).max()
        if herm > HERM_TOL:
            raise ValueError(f"not Hermitian: max |A - A^dag| = {herm:.3e}")
        tr = mat.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"trace {tr!r} deviates from 1 beyond {TRACE_TOL}")
        low = np.linalg.eigvalsh((mat + mat.conj().T) / 2.0)[0]
        if low < -PSD_TOL:
            raise ValueError(f"negative eigenvalue {low:.3e} below -{PSD_TOL}")
        object.__setattr__(self, "entries", _frozen(mat))

    @classmethod
    def from_matrix(cls, mat) -> "DensityMatrix":
        mat = np.asarray(mat, dtype=complex)
        return cls(mat, _sites_from_dim(mat.shape[0]))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (ascending) and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.eigenvalues, dtype=float).ravel()
        v = np.asarray(self.eigenvectors, dtype=complex)
        if v.shape != (w.size, w.size):
            raise ValueError("eigenvector matrix shape does not match eigenvalues")
        if np.any(np.diff(w) < 0):
            raise ValueError("eigenvalues must be ascending")
        unit = np.abs(v.conj().T @ v - np.eye(w.size)).max()
        if unit > HERM_TOL:
            raise ValueError(f"eigenvectors not orthonormal: {unit:.3e}")
        wlock = np.array(w, copy=True)
        wlock.setflags(write=False)
        object.__setattr__(self, "eigenvalues", wlock)
        object.__setattr__(self, "eigenvectors", _frozen(v))

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        """V diag(w) V^dag."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


@dataclass(frozen=True)
class QubitBasis:
    """Orthonormal pair of single-qubit vectors defining a dephasing projector pair."""

    vec0: np.ndarray
    vec1: np.ndarray

    def __post_init__(self):
        v0 = np.asarray(self.vec0, dtype=complex).ravel()
        v1 = np.asarray(self.vec1, dtype=complex).ravel()
        if v0.size != 2 or v1.size != 2:
            raise ValueError("basis vectors must have length 2")
        if abs(np.vdot(v0, v0) - 1.0) > NORM_TOL or abs(np.vdot(v1, v1) - 1.0) > NORM_TOL:
            raise ValueError("basis vectors must be normalized")
        if abs(np.vdot(v0, v1)) > NORM_TOL:
            raise ValueError("basis vectors must be orthogonal")
        object.__setattr__(self, "vec0", _frozen(v0))
        object.__setattr__(self, "vec1", _frozen(v1))

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.outer(self.vec0, self.vec0.conj()),
                np.outer(self.vec1, self.vec1.conj()))


@dataclass(frozen=True)
class SchmidtData:
    """Two-term Schmidt form of a pure state across a single-site cut."""

    lambda0: float
    lambda1: float
    local_basis: QubitBasis
    rest_vectors: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not (self.lambda0 >= self.lambda1 >= 0.0):
            raise ValueError("Schmidt coefficients must satisfy lambda0 >= lambda1 >= 0")
        s = self.lambda0**2 + self.lambda1**2
        if abs(s - 1.0) > 1e-10:
            raise ValueError(f"Schmidt coefficients not normalized: sum of squares {s!r}")
        rv = np.asarray(self.rest_vectors, dtype=complex)
        if rv.shape[0] != 2:
            raise ValueError("rest_vectors must hold two row vectors")
        object.__setattr__(self, "rest_vectors", _frozen(rv))

    def reconstruct(self) -> np.ndarray:
        """Sum of lambda_i |phi_i> (x) |chi_i> as a flat state vector."""
        basis = (self.local_basis.vec0, self.local_basis.vec1)
        lam = (self.lambda0, self.lambda1)
        return sum(lam[i] * np.kron(basis[i], self.rest_vectors[i]) for i in range(2))


def _as_vector(psi) -> np.ndarray:
    if isinstance(psi, PureState):
        return psi.amplitudes
    vec = np.asarray(psi, dtype=complex).ravel()
    return vec


def _as_density(rho) -> np.ndarray:
    """Coerce DensityMatrix / PureState / ndarray input to a square array."""
    if isinstance(rho, DensityMatrix):
        return rho.entries
    if isinstance(rho, PureState):
        return np.outer(rho.amplitudes, rho.amplitudes.conj())
    arr = np.asarray(rho, dtype=complex)
    if arr.ndim == 1:
        return np.outer(arr, arr.conj())
    return arr


def embed_site_operator(op, site: int, n_sites: int) -> np.ndarray:
    """Embed a 2x2 operator at `site` of an N-site chain: I (x) ... op ... (x) I.

    Site 1 is the leftmost spin and occupies the most significant bit of the
    computational basis index.
    """
    op = np.asarray(op, dtype=complex)
    if op.shape != (2, 2):
        raise ValueError("op must be 2x2")
    _check_site(site, n_sites)
    if n_sites > MAX_SITES:
        raise ValueError(f"n_sites {n_sites} exceeds dense cap {MAX_SITES}")
    left = np.eye(2 ** (site - 1), dtype=complex)
    right = np.eye(2 ** (n_sites - site), dtype=complex)
    return np.kron(np.kron(left, op), right)


def partial_trace_keep_site(rho, site: int) -> DensityMatrix:
    """Reduced 2x2 state of one site, tracing out every other spin."""
    mat = _as_density(rho)
    n = _sites_from_dim(mat.shape[0])
    _check_site(site, n)
    dl = 2 ** (site - 1)
    dr = 2 ** (n - site)
    t = mat.reshape(dl, 2, dr, dl, 2, dr)
    red = np.einsum("iajibj->ab", t)
    red = (red + red.conj().T) / 2.0
    return DensityMatrix(red, 1)


def partial_trace_remove_site(rho, site: int) -> DensityMatrix:
    """Complementary reduction: trace out `site`, keep the remaining N-1 spins."""
    mat = _as_density(rho)
    n = _sites_from_dim(mat.shape[0])
    _check_site(site, n)
    if n < 2:
        raise ValueError("need at least 2 sites to keep a remainder")
    dl = 2 ** (site - 1)
    dr = 2 ** (n - site)
    t = mat.reshape(dl, 2, dr, dl, 2, dr)
    red = np.einsum("iajkal->ijkl", t).reshape(dl * dr, dl * dr)
    red = (red + red.conj().T) / 2.0
    return DensityMatrix(red, n - 1)


def partial_transpose_site(rho, site: int) -> np.ndarray:
    """Transpose the indices of one site only.

    The output is Hermitian and trace-preserving but generally not positive;
    its negative eigenvalues witness entanglement across the cut.
    """
    mat = _as_density(rho)
    n = _sites_from_dim(mat.shape[0])
    _check_site(site, n)
    dl = 2 ** (site - 1)
    dr = 2 ** (n - site)
    t = mat.reshape(dl, 2, dr, dl, 2, dr)
    return t.transpose(0, 4, 2, 3, 1, 5).reshape(mat.shape)


def trace_norm(a) -> float:
    """Trace norm: the sum of singular values.

    Computed by SVD for any square input; for Hermitian matrices this equals
    the sum of absolute eigenvalues (checked against an independent
    eigenvalue route in the tests).
    """
    mat = np.asarray(_as_density(a), dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("trace_norm expects a square matrix")
    return float(np.linalg.svd(mat, compute_uv=False).sum())


def trace_distance(rho, sigma) -> float:
    """Half the trace norm of the difference of two states."""
    a = _as_density(rho)
    b = _as_density(sigma)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return 0.5 * trace_norm(a - b)


def _fix_phases(v: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component of each column real and positive."""
    v = np.array(v, copy=True)
    for k in range(v.shape[1]):
        col = v[:, k]
        j = int(np.argmax(np.abs(col)))
        z = col[j]
        mag = abs(z)
        if mag > 0.0:
            col *= z.conjugate() / mag
            col[j] = col[j].real
    return v


def hermitian_eig(a) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix with a deterministic convention.

    Eigenvalues come out ascending (ties broken by the index of each vector's
    largest component) and every eigenvector is phased so its largest-magnitude
    component is real and positive, which makes repeated calls bit-identical.
    """
    mat = np.asarray(_as_density(a), dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("hermitian_eig expects a square matrix")
    herm = np.abs(mat - mat.conj().T).max()
    if herm > HERM_TOL:
        raise ValueError(f"input not Hermitian within {HERM_TOL}: {herm:.3e}")
    h = (mat + mat.conj().T) / 2.0
    w, v = np.linalg.eigh(h)
    v = _fix_phases(v)
    secondary = np.argmax(np.abs(v), axis=0)
    order = np.lexsort((secondary, w))
    w = w[order]
    v = v[:, order]
    recon_err = np.abs((v * w) @ v.conj().T - h).max()
    if recon_err > 1e-9:
        raise RuntimeError(f"eigensolver reconstruction error {recon_err:.3e}")
    return SpectralDecomposition(w, v)


def schmidt_qubit(psi, site: int) -> SchmidtData:
    """Schmidt decomposition of a pure state across the cut (site | rest).

    The local basis is the eigenbasis of the reduced state obtained through
    hermitian_eig, so degenerate Schmidt coefficients still yield a
    deterministic, reproducible basis.
    """
    vec = _as_vector(psi)
    n = _sites_from_dim(vec.size)
    if n < 2:
        raise ValueError("schmidt_qubit needs at least 2 sites")
    _check_site(site, n)
    nrm = np.linalg.norm(vec)
    if abs(nrm - 1.0) > NORM_TOL:
        raise ValueError(f"state norm {nrm!r} deviates from 1 beyond {NORM_TOL}")
    arr = np.moveaxis(vec.reshape((2,) * n), site - 1, 0)
    m = arr.reshape(2, -1)
    red = m @ m.conj().T
    dec = hermitian_eig(red)
    # descending populations
    local = [dec.eigenvectors[:, 1], dec.eigenvectors[:, 0]]
    rest = []
    lam = []
    dim_rest = m.shape[1]
    for phi in local:
        chi = m.T @ phi.conj()
        weight = np.linalg.norm(chi)
        lam.append(float(weight))
        if weight > 1e-12:
            rest.append(chi / weight)
        else:
            # rank-1 state: complete with a deterministic orthonormal partner
            anchor = rest[0] if rest else np.zeros(dim_rest, dtype=complex)
            j = int(np.argmin(np.abs(anchor)))
            cand = np.zeros(dim_rest, dtype=complex)
            cand[j] = 1.0
            cand -= anchor * np.vdot(anchor, cand)
            cand /= np.linalg.norm(cand)
            rest.append(_fix_phases(cand[:, None])[:, 0])
    if lam[0] < lam[1]:
        lam.reverse()
        local.reverse()
        rest.reverse()
    return SchmidtData(lam[0], lam[1], QubitBasis(local[0], local[1]),
                       np.vstack(rest))


def basis_from_bloch(cos_theta: float, phi: float) -> QubitBasis:
    """Eigenbasis of n.sigma for the Bloch axis n = (theta, phi)."""
    if not -1.0 <= cos_theta <= 1.0:
        raise ValueError("cos_theta must lie in [-1, 1]")
    c = math.sqrt((1.0 + cos_theta) / 2.0)
    s = math.sqrt((1.0 - cos_theta) / 2.0)
    ph = complex(math.cos(phi), math.sin(phi))
    vec0 = np.array([c, s * ph], dtype=complex)
    vec1 = np.array([-s * ph.conjugate(), c], dtype=complex)
    return QubitBasis(vec0, vec1)


def sample_qubit_basis(rng: np.random.Generator) -> QubitBasis:
    """Draw a uniformly distributed qubit basis from an explicit random stream.

    The Bloch axis is uniform on the unit sphere: cos(theta) uniform in
    [-1, 1], azimuth uniform in [0, 2*pi).
    """
    u = rng.uniform(-1.0, 1.0)
    phi = rng.uniform(0.0, 2.0 * math.pi)
    return basis_from_bloch(u, phi)


def make_ghz(n_sites: int, phase: float) -> PureState:
    """GHZ-type superposition (|up...> + e^{i phase}|down...>)/sqrt(2).

    Here up/down denote the +1/-1 eigenstates of sigma_x, so in the
    computational sigma_z basis the state is a uniform superposition over
    bit strings weighted by the parity of their popcount.
    """
    if n_sites < 2:
        raise ValueError("make_ghz needs at least 2 sites")
    if n_sites > MAX_SITES:
        raise ValueError(f"n_sites {n_sites} exceeds dense cap {MAX_SITES}")
    dim = 2**n_sites
    ph = complex(math.cos(phase), math.sin(phase))
    signs = np.array([(-1) ** bin(i).count("1") for i in range(dim)], dtype=float)
    amps = (1.0 + ph * signs) / (math.sqrt(2.0) * 2 ** (n_sites / 2.0))
    return PureState(amps, n_sites)


def bloch_vector(vec) -> np.ndarray:
    """(<sigma_x>, <sigma_y>, <sigma_z>) of a single-qubit pure state."""
    v = _as_vector(vec)
    if v.size != 2:
        raise ValueError("bloch_vector expects a single-qubit state")
    return np.array([np.vdot(v, p @ v).real for p in (SIGMA_X, SIGMA_Y, SIGMA_Z)])
