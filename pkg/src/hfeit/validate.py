"""Self-validation suite: independent oracles and the checks built on them.

Every oracle here deliberately re-derives its result through a
different route than the production code it checks:

* ``racah_wigner3j``/``racah_wigner6j``: direct Racah finite sums over
  exact big-integer factorials (no prime factorization, no square-free
  splitting).
* ``brute_force_couplings``: O(N^2) sweep over all state pairs.
* ``fine_structure_blocks``: analytic 1x1/2x2 block eigenvalues of the
  single-m RF sectors.
* ``lindblad`` cross-check: dense superoperator steady state versus the
  linear weak-probe solver (see spectrum module).

``run_validation`` executes the whole battery and reports per-check
results; the command line front end maps failures to exit code 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .angular import HalfInteger, dipole_angular_factor, wigner3j, wigner6j

__all__ = [
    "racah_wigner3j",
    "racah_wigner6j",
    "brute_force_couplings",
    "fine_structure_blocks",
    "CheckResult",
    "run_validation",
]


def _fac(n: int) -> int:
    if n < 0:
        raise ValueError("negative factorial in oracle")
    return math.factorial(n)


def _tw(x) -> int:
    return HalfInteger.coerce(x).twice


def racah_wigner3j(j1, j2, j3, m1, m2, m3) -> float:
    """Racah-sum 3j oracle: exact rationals, one final float square root."""
    tj1, tj2, tj3 = _tw(j1), _tw(j2), _tw(j3)
    tm1, tm2, tm3 = _tw(m1), _tw(m2), _tw(m3)
    if tm1 + tm2 + tm3 != 0:
        return 0.0
    if (tj1 + tj2 + tj3) % 2 != 0 or not abs(tj1 - tj2) <= tj3 <= tj1 + tj2:
        return 0.0

    a = (tj1 + tj2 - tj3) // 2
    b = (tj1 - tj2 + tj3) // 2
    c = (-tj1 + tj2 + tj3) // 2
    pref = Fraction(_fac(a) * _fac(b) * _fac(c), _fac((tj1 + tj2 + tj3) // 2 + 1))
    for tj, tm in ((tj1, tm1), (tj2, tm2), (tj3, tm3)):
        pref *= _fac((tj + tm) // 2) * _fac((tj - tm) // 2)

    total = Fraction(0)
    t_lo = max(0, -(tj3 - tj2 + tm1) // 2, -(tj3 - tj1 - tm2) // 2)
    t_hi = min(a, (tj1 - tm1) // 2, (tj2 + tm2) // 2)
    for t in range(t_lo, t_hi + 1):
        den = (
            _fac(t)
            * _fac(a - t)
            * _fac((tj1 - tm1) // 2 - t)
            * _fac((tj2 + tm2) // 2 - t)
            * _fac((tj3 - tj2 + tm1) // 2 + t)
            * _fac((tj3 - tj1 - tm2) // 2 + t)
        )
        total += Fraction(-1 if t % 2 else 1, den)

    sign = -1.0 if ((tj1 - tj2 - tm3) // 2) % 2 else 1.0
    return sign * math.sqrt(float(pref)) * float(total)


def racah_wigner6j(j1, j2, j3, j4, j5, j6) -> float:
    """Racah-sum 6j oracle: exact rationals, one final float square root."""
    ta, tb, tc, td, te, tf = (_tw(j) for j in (j1, j2, j3, j4, j5, j6))
    triads = ((ta, tb, tc), (ta, te, tf), (td, tb, tf), (td, te, tc))

    def _delta2(tx, ty, tz):
        if (tx + ty + tz) % 2 != 0 or not abs(tx - ty) <= tz <= tx + ty:
            return None
        return Fraction(
            _fac((tx + ty - tz) // 2)
            * _fac((tx - ty + tz) // 2)
            * _fac((-tx + ty + tz) // 2),
            _fac((tx + ty + tz) // 2 + 1),
        )

    pref = Fraction(1)
    for tr in triads:
        d2 = _delta2(*tr)
        if d2 is None:
            return 0.0
        pref *= d2

    sums = [(ta + tb + tc) // 2, (ta + te + tf) // 2, (td + tb + tf) // 2, (td + te + tc) // 2]
    caps = [(ta + tb + td + te) // 2, (tb + tc + te + tf) // 2, (ta + tc + td + tf) // 2]
    total = Fraction(0)
    for z in range(max(sums), min(caps) + 1):
        den = 1
        for s in sums:
            den *= _fac(z - s)
        for cseq in caps:
            den *= _fac(cseq - z)
        total += Fraction((-1 if z % 2 else 1) * _fac(z + 1), den)

    return math.sqrt(float(pref)) * float(total)


def brute_force_couplings(basis, fieldspec) -> list[tuple[int, int, int, complex]]:
    """O(N^2) enumeration oracle: sweep every ordered state pair.

    Returns (from_index, to_index, q, amplitude) for each nonzero
    coupling of ``fieldspec`` over ``basis``, with no use of the
    production enumeration path.
    """
    from .couplings import spherical_components

    role_from, role_to = fieldspec.connects
    comps = spherical_components(fieldspec.polarization)
    out = []
    for i, s_from in enumerate(basis.states):
        if s_from.role != role_from:
            continue
        for j, s_to in enumerate(basis.states):
            if s_to.role != role_to:
                continue
            dm = s_to.m.twice - s_from.m.twice
            if dm % 2 != 0 or abs(dm) > 2:
                continue
            q = dm // 2
            e_q = comps[q + 1]
            if e_q == 0:
                continue
            a = dipole_angular_factor(
                s_from.j, s_from.f, s_from.m, s_to.j, s_to.f, s_to.m, q, basis.nuclear_spin
            )
            if a == 0.0:
                continue
            out.append((i, j, q, e_q * a))
    return out


def fine_structure_blocks(j_lower, j_upper, rabi_radial_mhz: float) -> np.ndarray:
    """Analytic eigenvalues of the q=0 RF sector, block by block.

    With quantization along the RF polarization only m -> m couplings
    survive, so the matrix falls apart into 1x1 blocks (uncoupled |m| >
    J' states, eigenvalue 0) and 2x2 blocks with eigenvalues
    +/- (rabi/2)|A(m)|.  Sorted eigenvalue array, independent of any
    matrix diagonalization.
    """
    tjl, tju = _tw(j_lower), _tw(j_upper)
    eigs: list[float] = []
    tm = -tjl
    while tm <= tjl:
        if abs(tm) > tju:
            eigs.append(0.0)
        else:
            amp = racah_wigner3j(
                HalfInteger(tju), 1, HalfInteger(tjl),
                HalfInteger(-tm), 0, HalfInteger(tm),
            )
            lam = 0.5 * rabi_radial_mhz * abs(amp)
            eigs.extend([-lam, +lam])
        tm += 2
    # m sublevels of the upper manifold outside the lower's range: none for
    # J' < J, which is the only case used here, but keep it general.
    tm = -tju
    while tm <= tju:
        if abs(tm) > tjl:
            eigs.append(0.0)
        tm += 2
    return np.sort(np.asarray(eigs))


# ---------------------------------------------------------------------------
# The validation battery.


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        return [
            f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}"
            for c in self.checks
        ]


def _check_symbols(tolerance: float, j_max: float) -> CheckResult:
    worst = 0.0
    tj_max = int(round(2 * j_max))
    for tj1 in range(tj_max + 1):
        for tj2 in range(tj_max + 1):
            for tj3 in range(abs(tj1 - tj2), min(tj1 + tj2, tj_max) + 1, 2):
                for tm1 in range(-tj1, tj1 + 1, 2):
                    for tm2 in range(-tj2, tj2 + 1, 2):
                        tm3 = -tm1 - tm2
                        if abs(tm3) > tj3:
                            continue
                        args = [HalfInteger(t) for t in (tj1, tj2, tj3, tm1, tm2, tm3)]
                        worst = max(worst, abs(wigner3j(*args) - racah_wigner3j(*args)))
                for tj4 in range(0, tj_max + 1):
                    for tj5 in range(abs(tj3 - tj4), min(tj3 + tj4, tj_max) + 1, 2):
                        for tj6 in range(abs(tj1 - tj5), min(tj1 + tj5, tj_max) + 1, 2):
                            args = [HalfInteger(t) for t in (tj1, tj2, tj3, tj4, tj5, tj6)]
                            worst = max(worst, abs(wigner6j(*args) - racah_wigner6j(*args)))
    return CheckResult(
        "racah symbol oracle",
        worst <= tolerance,
        f"max |difference| = {worst:.3e} over all j <= {j_max}",
    )


def _check_enumeration() -> CheckResult:
    from .couplings import enumerate_couplings
    from .model import build_basis, scenario_full, scenario_truncated
    from .couplings import FieldSpec

    bad = []
    for make in (scenario_full, scenario_truncated):
        scenario = make()
        for pol in ((0.0, 0.0, 1.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0)):
            basis = build_basis(scenario)
            for name, connects in (
                ("probe", ("ground", "intermediate")),
                ("coupling", ("intermediate", "rydberg_lower")),
                ("rf", ("rydberg_lower", "rydberg_upper")),
            ):
                fs = FieldSpec(name=name, connects=connects, rabi_radial_mhz=1.0, polarization=pol)
                got = {
                    (c.from_index, c.to_index, c.q): c.amplitude
                    for c in enumerate_couplings(basis, fs).couplings
                }
                want = {(i, j, q): a for i, j, q, a in brute_force_couplings(basis, fs)}
                if set(got) != set(want):
                    bad.append(f"{scenario.name}/{name}/{pol}: index sets differ")
                    continue
                err = max(
                    (abs(got[k] - want[k]) for k in want), default=0.0
                )
                if err > 1e-12:
                    bad.append(f"{scenario.name}/{name}/{pol}: amplitude mismatch {err:.2e}")
    return CheckResult(
        "brute-force enumeration",
        not bad,
        "all presets and polarizations match" if not bad else "; ".join(bad),
    )


def _check_reduction(tolerance_rel: float, perturb: Callable | None) -> CheckResult:
    from .couplings import FieldSpec
    from .dressing import build_rf_hamiltonian, fine_structure_reference
    from .model import build_basis, scenario_full

    rabi = 200.0
    basis = build_basis(scenario_full())
    rf = FieldSpec(name="rf", connects=("rydberg_lower", "rydberg_upper"),
                   rabi_radial_mhz=rabi, polarization=(0.0, 0.0, 1.0))
    ham = build_rf_hamiltonian(basis, rf)
    matrix = ham.matrix if perturb is None else perturb(ham.matrix)
    full = np.sort(np.linalg.eigvalsh(matrix))

    reference = fine_structure_blocks(
        basis.level_for("rydberg_lower").j, basis.level_for("rydberg_upper").j, rabi
    )
    multiplicity = basis.nuclear_spin.twice + 1
    expected = np.sort(np.repeat(reference, multiplicity))
    if full.shape != expected.shape:
        return CheckResult("fine-structure reduction", False, "dimension mismatch")
    dev = float(np.max(np.abs(full - expected)))
    return CheckResult(
        "fine-structure reduction",
        dev <= tolerance_rel * rabi,
        f"max |eigenvalue deviation| = {dev:.3e} MHz (multiplicity {multiplicity})",
    )


def _check_weak_probe() -> CheckResult:
    from .spectrum import cross_validation_deviation

    devs = cross_validation_deviation()
    worst = max(devs.values())
    detail = ", ".join(f"{name}: {100 * d:.3f}%" for name, d in devs.items())
    return CheckResult("weak probe vs lindblad", worst <= 0.01, detail)


def run_validation(
    tolerance: float = 1e-12,
    j_max: float = 3,
    hamiltonian_perturbation: Callable | None = None,
) -> ValidationReport:
    """Run the oracle battery; raises ValueError before any check on bad args.

    ``j_max`` bounds the symbol sweep (the full acceptance suite uses 6;
    the command line default keeps the run short).
    ``hamiltonian_perturbation`` is a test hook applied to the RF
    Hamiltonian matrix before the reduction check.
    """
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if j_max < 1:
        raise ValueError("j_max must be at least 1")
    report = ValidationReport()
    report.checks.append(_check_symbols(tolerance, j_max))
    report.checks.append(_check_enumeration())
    report.checks.append(_check_reduction(1e-9, hamiltonian_perturbation))
    report.checks.append(_check_weak_probe())
    return report
