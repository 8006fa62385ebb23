"""Probe-transmission spectra: linear response, Lindblad oracle, scans.

Weak-probe model
----------------
With the probe far below saturation the excited-state coherences obey,
per ground sublevel g, the linear system

    [ (dp + d0_e) + i gamma_e / 2 ] x_e - sum_k V_ek x_k = b_e,

where d0 is the cumulative rotating-frame detuning offset (0 on the
intermediate level, dc on the lower Rydberg level, dc + d_rf on the
upper, each minus the state's energy offset), V is the Hermitian
coupling+RF block built from the same amplitude convention as the RF
Hamiltonian, and b_e = (Omega_p / 2) amplitude(g -> e).  The
susceptibility is

    chi = sum_g p_g conj( sum_e conj(b_e) x_e ),

normalized so that Im(chi) >= 0 is absorption.  Transparency windows
open where a dressed Rydberg eigenvalue crosses zero, i.e. at coupling
detunings equal to the RF-block eigenvalues.

All rates and detunings are linear frequencies in MHz; the uniform 2pi
cancels between drive terms and decay terms and is left out.

Cross-validation
----------------
``steady_state_lindblad`` solves the full master equation with a dense
superoperator (refused above 40 states) and decay modeled as direct
transfer to the ground manifold, branched uniformly over
selection-rule-allowed sublevels.  ``cross_validation_deviation`` runs
two small ladders through both solvers and reports the relative
disagreement, which must stay below 1e-2 at Omega_p = gamma / 10.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .angular import HalfInteger, triangle_ok
from .couplings import FieldSpec, enumerate_couplings
from .errors import (
    DegenerateSteadyStateError,
    NumericalContractError,
    SingularSystemError,
    SystemSizeError,
)
from .model import FineLevel, Scenario, StateBasis, build_basis

__all__ = [
    "DecayModel",
    "DriveConfig",
    "weak_probe_response",
    "scan_spectrum",
    "SpectrumSeries",
    "Peak",
    "find_peaks",
    "steady_state_lindblad",
    "susceptibility_from_rho",
    "cross_validation_systems",
    "cross_validation_deviation",
    "LINDBLAD_MAX_STATES",
]

LINDBLAD_MAX_STATES = 40

_EXCITED_ROLES = ("intermediate", "rydberg_lower", "rydberg_upper")


@dataclass(frozen=True)
class DecayModel:
    """Population decay rates per role plus extra coherence dephasing.

    Rates are linewidths in linear MHz.  Decay is modeled as direct
    transfer to the ground manifold; ``extra_dephasing_mhz`` adds to
    every excited coherence width without moving population.
    """

    gamma_mhz: dict = field(
        default_factory=lambda: {
            "ground": 0.0,
            "intermediate": 5.2,
            "rydberg_lower": 0.01,
            "rydberg_upper": 0.01,
        }
    )
    extra_dephasing_mhz: float = 0.0

    def __post_init__(self):
        for role, rate in self.gamma_mhz.items():
            if rate < 0:
                raise ValueError(f"negative decay rate for {role}")
        if self.extra_dephasing_mhz < 0:
            raise ValueError("negative dephasing rate")

    def rate(self, role: str) -> float:
        return self.gamma_mhz.get(role, 0.0)


@dataclass(frozen=True)
class DriveConfig:
    """The three drive fields and their rotating-frame detunings (MHz).

    ``coupling_detuning_mhz`` is the quantity scanned in a spectrum.
    ``ground_populations`` weights the incoherent ground mixture for
    the linear response; None means uniform.
    """

    probe: FieldSpec
    coupling: FieldSpec
    rf: FieldSpec
    probe_detuning_mhz: float = 0.0
    coupling_detuning_mhz: float = 0.0
    rf_detuning_mhz: float = 0.0
    ground_populations: tuple[float, ...] | None = None


class _LinearResponse:
    """Precomputed weak-probe system, solvable at many detunings."""

    def __init__(self, basis: StateBasis, drive: DriveConfig, decay: DecayModel):
        widths = [decay.rate(r) for r in _EXCITED_ROLES]
        if max(widths) == 0.0 and decay.extra_dephasing_mhz == 0.0:
            raise SingularSystemError(
                "all decay rates are zero, so the response system is singular "
                "on resonance; set a nonzero linewidth or dephasing"
            )
        self.basis = basis
        exc = [i for i, s in enumerate(basis.states) if s.role != "ground"]
        self.exc = exc
        pos = {g: k for k, g in enumerate(exc)}
        n = len(exc)

        core = np.zeros((n, n), dtype=complex)
        self.coupling_mask = np.zeros(n)
        for k, g in enumerate(exc):
            s = basis.states[g]
            gamma = decay.rate(s.role) / 2.0 + decay.extra_dephasing_mhz
            base = -s.offset_mhz
            if s.role == "rydberg_upper":
                base += drive.rf_detuning_mhz
            if s.role in ("rydberg_lower", "rydberg_upper"):
                self.coupling_mask[k] = 1.0
            core[k, k] = base + 1j * gamma
        for fs in (drive.coupling, drive.rf):
            for c in enumerate_couplings(basis, fs).couplings:
                amp = 0.5 * fs.rabi_radial_mhz * c.amplitude
                core[pos[c.to_index], pos[c.from_index]] -= amp
                core[pos[c.from_index], pos[c.to_index]] -= np.conj(amp)
        self.core = core

        grounds = basis.role_indices("ground")
        self.sources = np.zeros((n, len(grounds)), dtype=complex)
        gcol = {g: col for col, g in enumerate(grounds)}
        for c in enumerate_couplings(basis, drive.probe).couplings:
            amp = 0.5 * drive.probe.rabi_radial_mhz * c.amplitude
            self.sources[pos[c.to_index], gcol[c.from_index]] += amp
        if drive.ground_populations is None:
            self.weights = np.full(len(grounds), 1.0 / len(grounds))
        else:
            w = np.asarray(drive.ground_populations, dtype=float)
            if w.shape != (len(grounds),) or np.any(w < 0) or w.sum() <= 0:
                raise ValueError("ground_populations must be a nonnegative "
                                 "distribution over the ground sublevels")
            self.weights = w / w.sum()
        self.probe_detuning = drive.probe_detuning_mhz
        self.coupling_detuning = drive.coupling_detuning_mhz

    def chi(self, coupling_detuning_mhz: float | None = None,
            probe_detuning_mhz: float | None = None) -> complex:
        dc = self.coupling_detuning if coupling_detuning_mhz is None else coupling_detuning_mhz
        dp = self.probe_detuning if probe_detuning_mhz is None else probe_detuning_mhz
        a = self.core + np.diag(dp + dc * self.coupling_mask)
        x = np.linalg.solve(a, self.sources)
        per_ground = np.einsum("eg,eg->g", np.conj(self.sources), x)
        return complex(np.conj(np.dot(self.weights, per_ground)))


def weak_probe_response(basis: StateBasis, drive: DriveConfig, decay: DecayModel) -> complex:
    """Linear-response susceptibility at the drive's detunings.

    Raises SingularSystemError when every decay and dephasing rate is
    zero.  Im of the result is absorption (nonnegative).
    """
    return _LinearResponse(basis, drive, decay).chi()


@dataclass(frozen=True)
class Peak:
    """A transmission peak: refined position, height, prominence."""

    position_mhz: float
    height: float
    prominence: float


@dataclass(frozen=True)
class SpectrumSeries:
    """A coupling-detuning scan with normalized transmission and peaks."""

    detunings_mhz: np.ndarray
    absorption: np.ndarray
    reference_absorption: float
    transmission: np.ndarray
    optical_depth: float
    peaks: tuple[Peak, ...]


def find_peaks(x, y, min_prominence: float = 0.05) -> tuple[Peak, ...]:
    """Local maxima of y(x) with range-normalized prominence.

    A candidate is a strict local maximum; its prominence is the drop
    to the higher of the two bracketing minima (walking outward until a
    taller point or the series edge), normalized by the series range.
    Positions are refined by a three-point parabolic fit.
    """
    if not 0.0 < min_prominence < 1.0:
        raise ValueError("min_prominence must lie in (0, 1)")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d arrays of equal length")
    span = float(np.max(y) - np.min(y)) if y.size else 0.0
    if span <= 0 or y.size < 3:
        return ()
    peaks: list[Peak] = []
    for i in range(1, y.size - 1):
        if not (y[i] > y[i - 1] and y[i] > y[i + 1]):
            continue
        left_min = y[i]
        k = i - 1
        while k >= 0 and y[k] <= y[i]:
            left_min = min(left_min, y[k])
            k -= 1
        right_min = y[i]
        k = i + 1
        while k < y.size and y[k] <= y[i]:
            right_min = min(right_min, y[k])
            k += 1
        prom = (y[i] - max(left_min, right_min)) / span
        if prom < min_prominence:
            continue
        denom = y[i - 1] - 2.0 * y[i] + y[i + 1]
        shift = 0.0 if denom == 0 else 0.5 * (y[i - 1] - y[i + 1]) / denom
        h = 0.5 * (x[i + 1] - x[i - 1])
        peaks.append(Peak(float(x[i] + shift * h), float(y[i]), float(prom)))
    return tuple(peaks)


def scan_spectrum(
    basis: StateBasis,
    drive: DriveConfig,
    decay: DecayModel,
    detunings_mhz=None,
    optical_depth: float = 1.0,
    min_prominence: float = 0.05,
    jobs: int = 1,
) -> SpectrumSeries:
    """Scan the coupling detuning and return a normalized transmission.

    The reference is the bare two-level absorption (coupling and RF
    off) at the same probe detuning, so transmission is exp(-OD) far
    from any Rydberg resonance and approaches 1 inside a fully open
    transparency window.  ``jobs`` > 1 threads the per-detuning solves;
    results are independent of the thread count.
    """
    if detunings_mhz is None:
        detunings_mhz = np.linspace(-300.0, 300.0, 601)
    detunings_mhz = np.asarray(detunings_mhz, dtype=float)
    if detunings_mhz.size == 0:
        raise ValueError("detuning grid must be non-empty")
    if detunings_mhz.size > 1 and np.any(np.diff(detunings_mhz) <= 0):
        raise ValueError("detuning grid must be strictly increasing")
    if optical_depth <= 0:
        raise ValueError("optical_depth must be positive")

    system = _LinearResponse(basis, drive, decay)
    off = FieldSpec(drive.coupling.name, drive.coupling.connects, 0.0,
                    drive.coupling.polarization)
    rf_off = FieldSpec(drive.rf.name, drive.rf.connects, 0.0, drive.rf.polarization)
    bare = DriveConfig(drive.probe, off, rf_off, drive.probe_detuning_mhz,
                       0.0, 0.0, drive.ground_populations)
    reference = weak_probe_response(basis, bare, decay).imag
    if reference <= 0:
        raise NumericalContractError("reference absorption must be positive")

    absorption = np.empty_like(detunings_mhz)

    def fill(idx: int) -> None:
        absorption[idx] = system.chi(coupling_detuning_mhz=detunings_mhz[idx]).imag

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(fill, range(detunings_mhz.size)))
    else:
        for i in range(detunings_mhz.size):
            fill(i)

    floor = -1e-9 * max(reference, float(np.max(np.abs(absorption))))
    if float(np.min(absorption)) < floor:
        raise NumericalContractError("negative absorption in scan")
    transmission = np.exp(-optical_depth * absorption / reference)
    peaks = find_peaks(detunings_mhz, transmission, min_prominence)
    return SpectrumSeries(detunings_mhz, absorption, reference, transmission,
                          optical_depth, peaks)


def _decay_targets(basis: StateBasis, e: int) -> list[int]:
    se = basis.states[e]
    grounds = basis.role_indices("ground")
    allowed = [
        g
        for g in grounds
        if triangle_ok(se.f, 1, basis.states[g].f)
        and abs(se.m.twice - basis.states[g].m.twice) <= 2
    ]
    return allowed if allowed else list(grounds)


def steady_state_lindblad(basis: StateBasis, drive: DriveConfig, decay: DecayModel) -> np.ndarray:
    """Dense Lindblad steady state of the fully driven ladder.

    Refuses more than 40 states.  Decay moves population straight to
    the ground manifold, branched uniformly over selection-rule-allowed
    sublevels (uniform over the whole manifold when none is allowed).
    Raises DegenerateSteadyStateError when the generator's null space
    is not one-dimensional, NumericalContractError when the returned
    state is not Hermitian positive semidefinite to 1e-8.
    """
    n = len(basis)
    if n > LINDBLAD_MAX_STATES:
        raise SystemSizeError(
            f"dense Lindblad solve supports at most {LINDBLAD_MAX_STATES} states, got {n}"
        )

    ham = np.zeros((n, n), dtype=complex)
    for i, s in enumerate(basis.states):
        cum = {"ground": 0.0,
               "intermediate": drive.probe_detuning_mhz,
               "rydberg_lower": drive.probe_detuning_mhz + drive.coupling_detuning_mhz,
               "rydberg_upper": drive.probe_detuning_mhz + drive.coupling_detuning_mhz
               + drive.rf_detuning_mhz}[s.role]
        ham[i, i] = s.offset_mhz - cum if s.role != "ground" else s.offset_mhz
    for fs in (drive.probe, drive.coupling, drive.rf):
        for c in enumerate_couplings(basis, fs).couplings:
            amp = 0.5 * fs.rabi_radial_mhz * c.amplitude
            ham[c.from_index, c.to_index] += np.conj(amp)
            ham[c.to_index, c.from_index] += amp

    eye = np.eye(n)
    lind = -1j * (np.kron(ham, eye) - np.kron(eye, ham.T))

    def add_collapse(op: np.ndarray) -> None:
        nonlocal lind
        cdc = op.conj().T @ op
        lind += np.kron(op, op.conj())
        lind -= 0.5 * (np.kron(cdc, eye) + np.kron(eye, cdc.T))

    for e, s in enumerate(basis.states):
        rate = decay.rate(s.role)
        if s.role == "ground" or rate <= 0:
            continue
        targets = _decay_targets(basis, e)
        branch = rate / len(targets)
        for g in targets:
            op = np.zeros((n, n))
            op[g, e] = math.sqrt(branch)
            add_collapse(op)
    if decay.extra_dephasing_mhz > 0:
        for e, s in enumerate(basis.states):
            if s.role == "ground":
                continue
            op = np.zeros((n, n))
            op[e, e] = math.sqrt(2.0 * decay.extra_dephasing_mhz)
            add_collapse(op)

    singulars = np.linalg.svd(lind, compute_uv=False)
    null_dim = int(np.sum(singulars < 1e-10 * max(singulars[0], 1.0)))
    if null_dim != 1:
        raise DegenerateSteadyStateError(
            f"Lindblad generator has a {null_dim}-dimensional null space"
        )

    trace_row = np.zeros((1, n * n), dtype=complex)
    trace_row[0, :: n + 1] = 1.0
    stacked = np.vstack([lind, trace_row])
    rhs = np.zeros(n * n + 1, dtype=complex)
    rhs[-1] = 1.0
    vec, *_ = np.linalg.lstsq(stacked, rhs, rcond=None)
    rho = vec.reshape(n, n)

    herm_err = float(np.max(np.abs(rho - rho.conj().T)))
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    min_eig = float(np.min(np.linalg.eigvalsh(rho)))
    stationarity = float(np.linalg.norm(lind @ rho.reshape(-1)))
    scale = max(float(singulars[0]), 1.0)
    if herm_err > 1e-8 or min_eig < -1e-8 or stationarity > 1e-8 * scale:
        raise NumericalContractError(
            f"steady state violates contracts: hermiticity {herm_err:.2e}, "
            f"min eigenvalue {min_eig:.2e}, stationarity {stationarity:.2e}"
        )
    return rho


def susceptibility_from_rho(basis: StateBasis, drive: DriveConfig, rho: np.ndarray) -> complex:
    """Probe-mode susceptibility of a density matrix, normalized like
    :func:`weak_probe_response` (Im >= 0 is absorption)."""
    total = 0.0 + 0.0j
    for c in enumerate_couplings(basis, drive.probe).couplings:
        amp = 0.5 * drive.probe.rabi_radial_mhz * c.amplitude
        total += np.conj(amp) * rho[c.to_index, c.from_index]
    return complex(np.conj(total))


def _toy_level(role: str, label: str, j, f, m_max=None) -> FineLevel:
    return FineLevel(role, label, HalfInteger.coerce(j), (HalfInteger.coerce(f),),
                     None if m_max is None else HalfInteger.coerce(m_max))


def cross_validation_systems() -> dict:
    """Two small ladders solvable by both response models.

    ``three_level``: a J = 0 -> 1 -> 0 chain (RF off; one idle upper
    sublevel), the textbook EIT configuration.  ``twelve_state``: a
    J = 0 -> 1 -> 2 -> 1 ladder with the RF field at 45 degrees, which
    exercises multi-sublevel mixing.  Both use Omega_p = gamma / 10.
    """
    gamma = 5.2
    z = (0.0, 0.0, 1.0)
    diag = (math.sqrt(0.5), 0.0, math.sqrt(0.5))

    three = Scenario(
        name="toy-three-level",
        nuclear_spin=HalfInteger(0),
        levels=(
            _toy_level("ground", "g", 0, 0),
            _toy_level("intermediate", "e", 1, 1, m_max=0),
            _toy_level("rydberg_lower", "r", 0, 0),
            _toy_level("rydberg_upper", "u", 1, 1, m_max=0),
        ),
    )
    twelve = Scenario(
        name="toy-twelve-state",
        nuclear_spin=HalfInteger(0),
        levels=(
            _toy_level("ground", "g", 0, 0),
            _toy_level("intermediate", "e", 1, 1),
            _toy_level("rydberg_lower", "r", 2, 2),
            _toy_level("rydberg_upper", "u", 1, 1),
        ),
    )

    def drives(omega_c: float, omega_rf: float, rf_pol) -> DriveConfig:
        return DriveConfig(
            probe=FieldSpec("probe", ("ground", "intermediate"), gamma / 10.0, z),
            coupling=FieldSpec("coupling", ("intermediate", "rydberg_lower"), omega_c, z),
            rf=FieldSpec("rf", ("rydberg_lower", "rydberg_upper"), omega_rf, rf_pol),
        )

    decay = DecayModel(
        gamma_mhz={"ground": 0.0, "intermediate": gamma,
                   "rydberg_lower": 0.05, "rydberg_upper": 0.05}
    )
    return {
        "three_level": {
            "basis": build_basis(three),
            "drive": drives(8.0, 0.0, z),
            "decay": decay,
            "grid_mhz": np.linspace(-30.0, 30.0, 31),
        },
        "twelve_state": {
            "basis": build_basis(twelve),
            "drive": drives(12.0, 12.0, diag),
            "decay": decay,
            "grid_mhz": np.linspace(-40.0, 40.0, 33),
        },
    }


def cross_validation_deviation() -> dict:
    """Relative weak-probe vs Lindblad disagreement per toy system.

    For each system the two susceptibilities are compared over the
    coupling-detuning grid; the figure of merit is the largest pointwise
    difference relative to the susceptibility scale (the largest
    Lindblad magnitude on the grid).
    """
    out: dict[str, float] = {}
    for name, sysdef in cross_validation_systems().items():
        basis, drive, decay = sysdef["basis"], sysdef["drive"], sysdef["decay"]
        grid = sysdef["grid_mhz"]
        linear = _LinearResponse(basis, drive, decay)
        diffs = []
        scale = 0.0
        for dc in grid:
            run = DriveConfig(drive.probe, drive.coupling, drive.rf,
                              drive.probe_detuning_mhz, float(dc),
                              drive.rf_detuning_mhz)
            chi_l = susceptibility_from_rho(
                basis, run, steady_state_lindblad(basis, run, decay))
            chi_w = linear.chi(coupling_detuning_mhz=float(dc))
            diffs.append(abs(chi_w - chi_l))
            scale = max(scale, abs(chi_l))
        out[name] = max(diffs) / scale
    return out
