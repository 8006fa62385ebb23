"""Level-scheme model: hyperfine manifolds, scenarios and state bases.

A scenario is a four-level excitation ladder

    ground --probe--> intermediate --coupling--> rydberg_lower <--rf--> rydberg_upper

with one fine-structure level per role.  Each level splits into
hyperfine manifolds F = |J-I| .. J+I; a scenario may include only a
subset of those manifolds (the published level diagrams truncate the
Rydberg manifolds) and may cap |mF| per level.  Hyperfine splittings
are treated as degenerate: every state carries an energy offset that
defaults to 0 MHz and is kept only so detuned variants stay expressible.

Optical reachability is decided at the selection-rule level: a sublevel
is flagged reachable when a chain of probe-then-coupling steps allowed
by the manifold triangle rule (|dF| <= 1, F + F' >= 1) and the active
polarization components (dm = q with e_q != 0) connects it to the
ground manifold.  A single vanishing matrix element inside an addressed
manifold (the dF = 0, mF = 0 -> 0 case) does not remove a sublevel from
the addressed set; this is the convention under which the truncated
level diagrams show 50 RF arrows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .angular import HalfInteger, triangle_ok

__all__ = [
    "ROLE_ORDER",
    "FineLevel",
    "Scenario",
    "BasisState",
    "StateBasis",
    "hyperfine_manifolds",
    "scenario_full",
    "scenario_truncated",
    "build_basis",
    "DEFAULT_OPTICAL_POLARIZATIONS",
]

ROLE_ORDER = ("ground", "intermediate", "rydberg_lower", "rydberg_upper")

DEFAULT_OPTICAL_POLARIZATIONS = ((0.0, 0.0, 1.0), (0.0, 0.0, 1.0))


def hyperfine_manifolds(j, nuclear_spin) -> tuple[HalfInteger, ...]:
    """All hyperfine quantum numbers F = |J-I| .. J+I in unit steps."""
    tj = HalfInteger.coerce(j, "J").twice
    ti = HalfInteger.coerce(nuclear_spin, "I").twice
    return tuple(HalfInteger(t) for t in range(abs(tj - ti), tj + ti + 1, 2))


@dataclass(frozen=True)
class FineLevel:
    """One fine-structure level of the ladder with its included manifolds.

    Parameters
    ----------
    role : str
        One of ``ROLE_ORDER``.
    label : str
        Free-form spectroscopic name, e.g. ``"6P3/2"``.
    j : HalfInteger
        Electronic angular momentum.
    included_f : tuple of HalfInteger
        Hyperfine manifolds kept in the basis (ascending).
    m_max : HalfInteger or None
        Optional cap on |mF| across the level.
    f_offsets_mhz : tuple of float or None
        Per-manifold energy offsets, aligned with ``included_f``.
        None means degenerate (all zero), the regime studied here.
    """

    role: str
    label: str
    j: HalfInteger
    included_f: tuple[HalfInteger, ...]
    m_max: HalfInteger | None = None
    f_offsets_mhz: tuple[float, ...] | None = None

    def offset_for(self, f: HalfInteger) -> float:
        if self.f_offsets_mhz is None:
            return 0.0
        return self.f_offsets_mhz[self.included_f.index(f)]


@dataclass(frozen=True)
class Scenario:
    """A four-role excitation ladder over a single nuclear spin."""

    name: str
    nuclear_spin: HalfInteger
    levels: tuple[FineLevel, ...]

    def __post_init__(self):
        roles = tuple(level.role for level in self.levels)
        if roles != ROLE_ORDER:
            raise ValueError(
                f"scenario must define exactly the roles {ROLE_ORDER} in order, got {roles}"
            )
        for level in self.levels:
            allowed = hyperfine_manifolds(level.j, self.nuclear_spin)
            if not level.included_f:
                raise ValueError(f"level {level.label} includes no hyperfine manifold")
            for f in level.included_f:
                if f not in allowed:
                    raise ValueError(
                        f"F={f} is not a hyperfine manifold of {level.label} "
                        f"(J={level.j}, I={self.nuclear_spin})"
                    )
            if tuple(sorted(level.included_f, key=lambda h: h.twice)) != level.included_f:
                raise ValueError(f"included_f of {level.label} must be ascending")
            if level.f_offsets_mhz is not None and len(level.f_offsets_mhz) != len(level.included_f):
                raise ValueError(f"f_offsets_mhz of {level.label} must align with included_f")

    def level(self, role: str) -> FineLevel:
        for lv in self.levels:
            if lv.role == role:
                return lv
        raise KeyError(role)


@dataclass(frozen=True)
class BasisState:
    """A single |role, J, F, mF> basis state (energy offset in MHz)."""

    role: str
    label: str
    j: HalfInteger
    f: HalfInteger
    m: HalfInteger
    offset_mhz: float = 0.0

    def state_id(self) -> str:
        return f"{self.role}:F={self.f}:m={self.m}"


@dataclass(frozen=True)
class StateBasis:
    """Deterministically ordered state list for a scenario.

    States follow role order, then ascending (F, mF) within a role.
    ``optical_flags[i]`` marks reachability of state i through the
    probe-then-coupling selection-rule chain for the polarizations the
    basis was built with.
    """

    scenario: Scenario
    optical_polarizations: tuple[tuple[complex, ...], tuple[complex, ...]]
    states: tuple[BasisState, ...]
    optical_flags: tuple[bool, ...]
    _index: dict = field(repr=False, hash=False, compare=False, default_factory=dict)

    def __post_init__(self):
        lookup = {
            (s.role, s.f.twice, s.m.twice): i for i, s in enumerate(self.states)
        }
        object.__setattr__(self, "_index", lookup)

    def __len__(self) -> int:
        return len(self.states)

    @property
    def nuclear_spin(self) -> HalfInteger:
        return self.scenario.nuclear_spin

    def level_for(self, role: str) -> FineLevel:
        return self.scenario.level(role)

    def index_of(self, role: str, f, m) -> int:
        key = (role, HalfInteger.coerce(f).twice, HalfInteger.coerce(m).twice)
        return self._index[key]

    def role_indices(self, role: str) -> tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.states) if s.role == role)

    def reachable_indices(self, role: str | None = None) -> tuple[int, ...]:
        return tuple(
            i
            for i, s in enumerate(self.states)
            if self.optical_flags[i] and (role is None or s.role == role)
        )


def _level_states(level: FineLevel) -> list[BasisState]:
    out: list[BasisState] = []
    for f in level.included_f:
        cap = f.twice if level.m_max is None else min(f.twice, level.m_max.twice)
        if (cap - f.twice) % 2:
            cap -= 1  # mF steps in integers from -F, so the cap must share F's parity
        for tm in range(-cap, cap + 1, 2):
            out.append(
                BasisState(level.role, level.label, level.j, f, HalfInteger(tm), level.offset_for(f))
            )
    if not out:
        raise ValueError(
            f"level {level.label}: the m_max restriction removes every sublevel"
        )
    return out


def _active_q(polarization) -> tuple[int, ...]:
    # selection-rule support of a polarization: which dm = q are driven
    from .couplings import spherical_components

    comps = spherical_components(polarization)
    return tuple(q for q in (-1, 0, +1) if abs(comps[q + 1]) > 1e-15)


def build_basis(scenario: Scenario, optical_polarizations=DEFAULT_OPTICAL_POLARIZATIONS) -> StateBasis:
    """Assemble the ordered basis and its optical reachability flags.

    ``optical_polarizations`` is the (probe, coupling) polarization
    pair used only for the reachability flags; both default to z.
    """
    states: list[BasisState] = []
    for level in scenario.levels:
        states.extend(_level_states(level))

    reachable = [False] * len(states)
    frontier = [i for i, s in enumerate(states) if s.role == "ground"]
    for i in frontier:
        reachable[i] = True
    chain = (("ground", "intermediate"), ("intermediate", "rydberg_lower"))
    for (role_from, role_to), pol in zip(chain, optical_polarizations):
        qs = _active_q(pol)
        nxt: list[int] = []
        for i in frontier:
            origin = states[i]
            for j, target in enumerate(states):
                if target.role != role_to or reachable[j]:
                    continue
                if not triangle_ok(origin.f, 1, target.f):
                    continue
                if (target.m.twice - origin.m.twice) // 2 in qs and abs(
                    target.m.twice - origin.m.twice
                ) <= 2:
                    reachable[j] = True
                    nxt.append(j)
        frontier = nxt

    return StateBasis(
        scenario=scenario,
        optical_polarizations=tuple(tuple(complex(c) for c in p) for p in optical_polarizations),
        states=tuple(states),
        optical_flags=tuple(reachable),
    )


def _h(x) -> HalfInteger:
    return HalfInteger.coerce(x)


def scenario_full() -> Scenario:
    """Cs ladder with every hyperfine manifold of both Rydberg levels."""
    return Scenario(
        name="full",
        nuclear_spin=_h(Fraction(7, 2)),
        levels=(
            FineLevel("ground", "6S1/2", _h(Fraction(1, 2)), (_h(4),)),
            FineLevel("intermediate", "6P3/2", _h(Fraction(3, 2)), (_h(5),)),
            FineLevel(
                "rydberg_lower", "52D5/2", _h(Fraction(5, 2)),
                tuple(_h(f) for f in range(1, 7)),
            ),
            FineLevel(
                "rydberg_upper", "53P3/2", _h(Fraction(3, 2)),
                tuple(_h(f) for f in range(2, 6)),
            ),
        ),
    )


def scenario_truncated() -> Scenario:
    """Cs ladder keeping only the optically drawn Rydberg manifolds."""
    return Scenario(
        name="truncated",
        nuclear_spin=_h(Fraction(7, 2)),
        levels=(
            FineLevel("ground", "6S1/2", _h(Fraction(1, 2)), (_h(4),)),
            FineLevel("intermediate", "6P3/2", _h(Fraction(3, 2)), (_h(5),)),
            FineLevel(
                "rydberg_lower", "52D5/2", _h(Fraction(5, 2)),
                tuple(_h(f) for f in range(4, 7)),
            ),
            FineLevel(
                "rydberg_upper", "53P3/2", _h(Fraction(3, 2)),
                tuple(_h(f) for f in range(3, 6)),
            ),
        ),
    )
