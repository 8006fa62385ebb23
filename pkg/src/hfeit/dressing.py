"""RF dressing of the Rydberg pair: Hamiltonian assembly and spectra.

The RF field couples the two Rydberg levels.  In the frame rotating at
the RF frequency the block Hamiltonian over their sublevels is

    H[i, j] = (Omega_RF / 2) * amplitude(i -> j)  + h.c.

with the upper-level diagonal shifted by -rf_detuning and per-state
energy offsets added on the diagonal (both default 0, the degenerate
resonant case).  All entries are linear frequencies in MHz; a uniform
2pi rescales eigenvalues and time axes together and is left out.

Eigenvalues come from a dense Hermitian diagonalization; the residual
contract ||H v - lambda v|| <= 1e-9 ||H|| is checked on every call.
Degenerate manifolds make most eigenvalues highly repeated, so results
also carry the clustered unique eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angular import HalfInteger, dipole_angular_factor
from .couplings import FieldSpec, enumerate_couplings
from .errors import NumericalContractError
from .model import StateBasis

__all__ = [
    "RfHamiltonian",
    "DressedResult",
    "build_rf_hamiltonian",
    "diagonalize",
    "unique_eigenvalues",
    "fine_structure_reference",
]

RESIDUAL_BOUND = 1e-9


@dataclass(frozen=True)
class RfHamiltonian:
    """Hermitian RF block over the two connected roles (MHz units).

    ``indices`` maps block rows back to global basis indices.
    """

    basis: StateBasis
    field: FieldSpec
    indices: tuple[int, ...]
    matrix: np.ndarray
    rf_detuning_mhz: float


@dataclass(frozen=True)
class DressedResult:
    """Eigen-decomposition of an RF block with clustered eigenvalues."""

    hamiltonian: RfHamiltonian
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    unique: np.ndarray
    cluster_tolerance: float


def build_rf_hamiltonian(
    basis: StateBasis, rf_field: FieldSpec, rf_detuning_mhz: float = 0.0
) -> RfHamiltonian:
    """Assemble the Hermitian RF coupling block on a basis.

    The block spans both connected roles in basis order; off-diagonal
    entries are (Omega/2) amplitude, the diagonal carries energy
    offsets and, on the second connected role, -rf_detuning.
    """
    role_lo, role_hi = rf_field.connects
    if {role_lo, role_hi} != {"rydberg_lower", "rydberg_upper"}:
        raise ValueError(
            "the RF field must connect rydberg_lower and rydberg_upper, "
            f"got {rf_field.connects}"
        )
    indices = tuple(sorted(basis.role_indices(role_lo) + basis.role_indices(role_hi)))
    pos = {g: k for k, g in enumerate(indices)}
    n = len(indices)
    h = np.zeros((n, n), dtype=complex)
    half = 0.5 * rf_field.rabi_radial_mhz
    for c in enumerate_couplings(basis, rf_field).couplings:
        a, b = pos[c.from_index], pos[c.to_index]
        h[a, b] += half * c.amplitude
        h[b, a] += half * np.conj(c.amplitude)
    for g in indices:
        s = basis.states[g]
        h[pos[g], pos[g]] += s.offset_mhz
        if s.role == role_hi:
            h[pos[g], pos[g]] -= rf_detuning_mhz
    return RfHamiltonian(basis, rf_field, indices, h, rf_detuning_mhz)


def diagonalize(ham: RfHamiltonian, cluster_tolerance: float | None = None) -> DressedResult:
    """Diagonalize an RF block and cluster its eigenvalue multiset.

    The default cluster tolerance is 1e-6 times the RF Rabi frequency
    (falling back to 1e-9 for a switched-off field).  Raises
    NumericalContractError when the eigensystem residual exceeds
    1e-9 ||H||.
    """
    h = ham.matrix
    scale = np.linalg.norm(h)
    herm = np.linalg.norm(h - h.conj().T)
    if scale > 0 and herm > 1e-12 * scale:
        raise NumericalContractError(
            f"RF Hamiltonian not Hermitian: ||H - H*|| = {herm:.3e}"
        )
    vals, vecs = np.linalg.eigh(h)
    residual = np.linalg.norm(h @ vecs - vecs * vals)
    if scale > 0 and residual > RESIDUAL_BOUND * scale:
        raise NumericalContractError(
            f"eigensystem residual {residual:.3e} exceeds {RESIDUAL_BOUND:.1e} * ||H|| = "
            f"{RESIDUAL_BOUND * scale:.3e}"
        )
    if cluster_tolerance is None:
        cluster_tolerance = 1e-6 * ham.field.rabi_radial_mhz
        if cluster_tolerance == 0.0:
            cluster_tolerance = 1e-9
    unique = unique_eigenvalues(vals, cluster_tolerance)
    return DressedResult(ham, vals, vecs, unique, cluster_tolerance)


def unique_eigenvalues(values, tolerance: float) -> np.ndarray:
    """Collapse a sorted-or-unsorted eigenvalue multiset into cluster means.

    Greedy left-to-right pass over the sorted values: a new cluster
    opens when a value exceeds the current cluster's seed (its first
    member) by more than ``tolerance``; each cluster is reported as the
    mean of its members.  Tolerance must be positive.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    vals = np.sort(np.asarray(values, dtype=float))
    if vals.size == 0:
        return vals
    reps: list[float] = []
    seed = vals[0]
    members: list[float] = []
    for v in vals:
        if v - seed > tolerance:
            reps.append(float(np.mean(members)))
            seed = v
            members = [v]
        else:
            members.append(v)
    reps.append(float(np.mean(members)))
    return np.asarray(reps)


def fine_structure_reference(j_lower, j_upper, rf: FieldSpec) -> np.ndarray:
    """Sorted eigenvalues of the hyperfine-free RF problem.

    Requires linear RF polarization: quantizing along the field leaves
    only q = 0 couplings, so the matrix is block-diagonal in m and
    sublevels of the lower manifold with |m| above j_upper stay
    uncoupled at zero.  This is the reference multiset the full
    hyperfine eigenvalues collapse onto when splittings vanish.
    """
    vec = np.asarray(rf.polarization, dtype=complex)
    phase = vec[int(np.argmax(np.abs(vec)))]
    aligned = vec * np.conj(phase / abs(phase))
    if float(np.max(np.abs(aligned.imag))) > 1e-12:
        raise ValueError("fine_structure_reference requires linear polarization")
    jl = HalfInteger.coerce(j_lower, "J")
    ju = HalfInteger.coerce(j_upper, "J'")
    half = 0.5 * rf.rabi_radial_mhz
    ms_lower = [HalfInteger(t) for t in range(-jl.twice, jl.twice + 1, 2)]
    ms_upper = [HalfInteger(t) for t in range(-ju.twice, ju.twice + 1, 2)]
    n = len(ms_lower) + len(ms_upper)
    h = np.zeros((n, n))
    for a, m in enumerate(ms_lower):
        for b, mu in enumerate(ms_upper):
            if m.twice != mu.twice:
                continue
            amp = half * dipole_angular_factor(jl, jl, m, ju, ju, mu, 0, 0)
            h[a, len(ms_lower) + b] = amp
            h[len(ms_lower) + b, a] = amp
    return np.sort(np.linalg.eigvalsh(h))
