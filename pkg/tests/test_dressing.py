"""RF-block assembly, diagonalization contracts, eigenvalue structure."""

import dataclasses
import math

import numpy as np
import pytest

from hfeit import (
    build_rf_hamiltonian,
    diagonalize,
    enumerate_couplings,
    fine_structure_reference,
    unique_eigenvalues,
)
from hfeit.errors import NumericalContractError
from hfeit.validate import fine_structure_blocks
from conftest import X, Z, probe_field, rf_field

RABI = 200.0
EXTREME = 100.0 / math.sqrt(10.0)   # widest dressed shift at RABI
INNER = 200.0 / math.sqrt(60.0)     # second nonzero shift at RABI

TRUNCATED_UNIQUE = [
    -31.622777, -31.196132, -31.035441, -30.966627, -28.292027,
    -27.572791, -27.065442, -25.819889, -20.192914, -18.112778,
    -13.892812, -8.548364, 0.0, 8.548364, 13.892812, 18.112778,
    20.192914, 25.819889, 27.065442, 27.572791, 28.292027,
    30.966627, 31.035441, 31.196132, 31.622777,
]


@pytest.fixture(scope="module")
def full_result(full_basis):
    return diagonalize(build_rf_hamiltonian(full_basis, rf_field(RABI)))


@pytest.fixture(scope="module")
def truncated_result(truncated_basis):
    return diagonalize(build_rf_hamiltonian(truncated_basis, rf_field(RABI)))


class TestHamiltonianStructure:
    def test_span_and_hermiticity(self, full_basis):
        ham = build_rf_hamiltonian(full_basis, rf_field(RABI))
        assert ham.matrix.shape == (80, 80)
        assert np.allclose(ham.matrix, ham.matrix.conj().T)

    def test_zero_diagonal_when_resonant(self, full_basis):
        ham = build_rf_hamiltonian(full_basis, rf_field(RABI))
        assert np.all(np.diag(ham.matrix) == 0.0)

    def test_off_diagonal_count_matches_couplings(self, full_basis):
        ham = build_rf_hamiltonian(full_basis, rf_field(RABI))
        assert np.count_nonzero(ham.matrix) == 2 * 84

    def test_bipartite_blocks(self, full_basis):
        ham = build_rf_hamiltonian(full_basis, rf_field(RABI))
        pos = {g: k for k, g in enumerate(ham.indices)}
        lower = [pos[i] for i in full_basis.role_indices("rydberg_lower")]
        upper = [pos[i] for i in full_basis.role_indices("rydberg_upper")]
        assert np.all(ham.matrix[np.ix_(lower, lower)] == 0.0)
        assert np.all(ham.matrix[np.ix_(upper, upper)] == 0.0)

    def test_detuning_shifts_upper_diagonal(self, full_basis):
        ham = build_rf_hamiltonian(full_basis, rf_field(RABI), rf_detuning_mhz=7.0)
        pos = {g: k for k, g in enumerate(ham.indices)}
        diag = np.diag(ham.matrix)
        assert all(diag[pos[i]] == -7.0 for i in full_basis.role_indices("rydberg_upper"))
        assert all(diag[pos[i]] == 0.0 for i in full_basis.role_indices("rydberg_lower"))

    def test_entries_are_half_rabi_times_amplitude(self, full_basis):
        field = rf_field(RABI)
        ham = build_rf_hamiltonian(full_basis, field)
        pos = {g: k for k, g in enumerate(ham.indices)}
        for c in enumerate_couplings(full_basis, field).couplings:
            assert ham.matrix[pos[c.from_index], pos[c.to_index]] == pytest.approx(
                0.5 * RABI * c.amplitude
            )

    def test_wrong_roles_raise(self, full_basis):
        with pytest.raises(ValueError, match="must connect"):
            build_rf_hamiltonian(full_basis, probe_field())


class TestDiagonalize:
    def test_full_unique_count_and_values(self, full_result):
        assert len(full_result.unique) == 5
        expected = [-EXTREME, -INNER, 0.0, INNER, EXTREME]
        assert np.max(np.abs(full_result.unique - expected)) <= 1e-9 * RABI

    def test_truncated_unique_count_and_values(self, truncated_result):
        assert len(truncated_result.unique) == 25
        assert np.max(np.abs(truncated_result.unique - TRUNCATED_UNIQUE)) <= 1e-6

    def test_eigenvalues_sorted(self, full_result):
        assert np.all(np.diff(full_result.eigenvalues) >= 0.0)

    def test_default_cluster_tolerance(self, full_result):
        assert full_result.cluster_tolerance == pytest.approx(1e-6 * RABI)

    def test_zero_field_tolerance_fallback(self, full_basis):
        res = diagonalize(build_rf_hamiltonian(full_basis, rf_field(0.0)))
        assert res.cluster_tolerance == 1e-9
        assert list(res.unique) == [0.0]

    def test_non_hermitian_input_raises(self, full_basis):
        ham = build_rf_hamiltonian(full_basis, rf_field(RABI))
        corrupt = ham.matrix.copy()
        corrupt[0, 1] += 1.0
        bad = dataclasses.replace(ham, matrix=corrupt)
        with pytest.raises(NumericalContractError, match="Hermitian"):
            diagonalize(bad)

    def test_chiral_pair_symmetry(self, full_result, truncated_result):
        for res in (full_result, truncated_result):
            vals = np.sort(res.eigenvalues)
            assert np.max(np.abs(vals + vals[::-1])) <= 1e-9 * RABI

    def test_eigenvalues_scale_linearly_with_rabi(self, full_basis, full_result):
        unit = diagonalize(build_rf_hamiltonian(full_basis, rf_field(1.0)))
        assert np.max(np.abs(RABI * unit.eigenvalues - full_result.eigenvalues)) <= 1e-9 * RABI


class TestBlockOracle:
    def test_truncated_multiset_matches_per_m_blocks(self, truncated_basis):
        # the pi-coupled block is direct-summed over m; diagonalize each
        # m sector independently and compare multisets
        field = rf_field(RABI)
        ham = build_rf_hamiltonian(truncated_basis, field)
        cs = enumerate_couplings(truncated_basis, field)
        sectors = {}
        for c in cs.couplings:
            sectors.setdefault(truncated_basis.states[c.from_index].m.twice, set()).update(
                (c.from_index, c.to_index)
            )
        vals: list[float] = []
        seen: set[int] = set()
        for members in sectors.values():
            idx = sorted(members)
            seen.update(idx)
            pos = {g: k for k, g in enumerate(idx)}
            block = np.zeros((len(idx), len(idx)))
            for c in cs.couplings:
                if c.from_index in pos:
                    amp = 0.5 * RABI * c.amplitude.real
                    block[pos[c.to_index], pos[c.from_index]] += amp
                    block[pos[c.from_index], pos[c.to_index]] += amp
            vals.extend(np.linalg.eigvalsh(block))
        vals.extend(0.0 for g in ham.indices if g not in seen)
        got = np.sort(diagonalize(ham).eigenvalues)
        assert np.max(np.abs(np.sort(vals) - got)) <= 1e-9 * RABI


class TestFineStructureReduction:
    def test_full_multiset_is_eight_reference_copies(self, full_result):
        reference = fine_structure_reference(2.5, 1.5, rf_field(RABI))
        expected = np.sort(np.repeat(reference, 8))
        assert np.max(np.abs(np.sort(full_result.eigenvalues) - expected)) <= 1e-9 * RABI

    def test_reference_matches_analytic_blocks(self):
        reference = fine_structure_reference(2.5, 1.5, rf_field(RABI))
        blocks = fine_structure_blocks(2.5, 1.5, RABI)
        assert np.max(np.abs(np.sort(reference) - np.sort(blocks))) <= 1e-12 * RABI

    def test_nonzero_ratio_is_sqrt6_over_2(self, full_result):
        mags = sorted({round(abs(u), 9) for u in full_result.unique if abs(u) > 1e-6})
        assert len(mags) == 2
        assert mags[1] / mags[0] == pytest.approx(math.sqrt(6.0) / 2.0, abs=1e-9)

    def test_reference_requires_linear_polarization(self):
        with pytest.raises(ValueError, match="linear"):
            fine_structure_reference(2.5, 1.5, rf_field(RABI, (1.0, -1j, 0.0)))

    def test_reference_accepts_global_phase(self):
        ref = fine_structure_reference(2.5, 1.5, rf_field(RABI, (0.0, 0.0, 1j)))
        base = fine_structure_reference(2.5, 1.5, rf_field(RABI))
        assert np.allclose(ref, base)


class TestRotationInvariance:
    def test_unique_set_fixed_under_linear_rotation(self, full_basis, full_result):
        for theta in (30.0, 45.0, 90.0):
            pol = (math.sin(math.radians(theta)), 0.0, math.cos(math.radians(theta)))
            res = diagonalize(build_rf_hamiltonian(full_basis, rf_field(RABI, pol)))
            assert len(res.unique) == 5
            assert np.max(np.abs(res.unique - full_result.unique)) <= 1e-9 * RABI

    def test_full_eigenvalue_multiset_rotation_invariant(self, full_basis, full_result):
        res = diagonalize(build_rf_hamiltonian(full_basis, rf_field(RABI, X)))
        assert np.max(np.abs(np.sort(res.eigenvalues) - np.sort(full_result.eigenvalues))) <= 1e-9 * RABI


class TestClustering:
    def test_greedy_cluster_means(self):
        got = unique_eigenvalues([0.0, 0.5, 1.0], 0.6)
        assert got == pytest.approx([0.25, 1.0])

    def test_tight_tolerance_keeps_all(self):
        got = unique_eigenvalues([0.0, 0.5, 1.0], 0.1)
        assert got == pytest.approx([0.0, 0.5, 1.0])

    def test_unsorted_input_allowed(self):
        got = unique_eigenvalues([1.0, 0.0, 1.0 + 1e-12], 1e-9)
        assert got == pytest.approx([0.0, 1.0])

    def test_nonpositive_tolerance_raises(self):
        with pytest.raises(ValueError):
            unique_eigenvalues([0.0, 1.0], 0.0)

    def test_empty_input(self):
        assert unique_eigenvalues([], 1.0).size == 0
