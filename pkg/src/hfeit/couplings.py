"""Field definitions and dipole-coupling enumeration.

A field connects two roles of the ladder with a radial Rabi frequency
(linear MHz, i.e. Omega/2pi) and a lab-frame polarization vector.  The
per-pair drive amplitude factorizes as

    amplitude(i -> j) = e_q * A(i -> j),   q = mF(j) - mF(i),

where e_q are the spherical components of the unit polarization and A
is the dimensionless hyperfine dipole factor from :mod:`hfeit.angular`
(reduced matrix element normalized to 1; all radial physics lives in
``rabi_radial_mhz``).  Amplitudes are stored as complex numbers; for
polarizations in the x-z plane they are purely real and the sign is
physical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .angular import HalfInteger, dipole_angular_factor
from .model import ROLE_ORDER, StateBasis

__all__ = [
    "FieldSpec",
    "Coupling",
    "CouplingSet",
    "spherical_components",
    "enumerate_couplings",
    "count_transitions",
    "reachable_origin_filter",
    "export_diagram",
]

_AMPLITUDE_FLOOR = 1e-15


def spherical_components(polarization) -> tuple[complex, complex, complex]:
    """Spherical components (e_{-1}, e_0, e_{+1}) of a polarization vector.

    Uses e_0 = ez and e_{+-1} = -+ (ex +- i ey) / sqrt(2) on the
    normalized vector; the input may be complex (circular states).
    """
    vec = [complex(c) for c in polarization]
    if len(vec) != 3:
        raise ValueError("polarization must be a 3-vector")
    norm = math.sqrt(sum(abs(c) ** 2 for c in vec))
    if norm == 0.0:
        raise ValueError("polarization must be nonzero")
    ex, ey, ez = (c / norm for c in vec)
    e_plus = -(ex + 1j * ey) / math.sqrt(2.0)
    e_minus = (ex - 1j * ey) / math.sqrt(2.0)
    return (e_minus, ez, e_plus)


@dataclass(frozen=True)
class FieldSpec:
    """A drive field: name, connected roles, radial Rabi, polarization.

    The polarization is normalized at construction; ``connects`` must
    name two distinct roles.  ``rabi_radial_mhz`` may be 0 (field off).
    """

    name: str
    connects: tuple[str, str]
    rabi_radial_mhz: float
    polarization: tuple[complex, ...] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if len(self.connects) != 2 or self.connects[0] == self.connects[1]:
            raise ValueError("connects must name two distinct roles")
        for role in self.connects:
            if role not in ROLE_ORDER:
                raise ValueError(f"unknown role {role!r}")
        if self.rabi_radial_mhz < 0:
            raise ValueError("rabi_radial_mhz must be >= 0")
        vec = tuple(complex(c) for c in self.polarization)
        if len(vec) != 3:
            raise ValueError("polarization must be a 3-vector")
        norm = math.sqrt(sum(abs(c) ** 2 for c in vec))
        if norm == 0.0:
            raise ValueError("polarization must be nonzero")
        object.__setattr__(self, "polarization", tuple(c / norm for c in vec))

    def components(self) -> tuple[complex, complex, complex]:
        return spherical_components(self.polarization)


@dataclass(frozen=True)
class Coupling:
    """One driven pair: basis indices, spherical q, complex amplitude."""

    from_index: int
    to_index: int
    q: int
    amplitude: complex

    @property
    def strength(self) -> float:
        return abs(self.amplitude) ** 2


@dataclass(frozen=True)
class CouplingSet:
    """All couplings a field drives on a basis, in deterministic order."""

    field: FieldSpec
    basis: StateBasis
    couplings: tuple[Coupling, ...]

    def __len__(self) -> int:
        return len(self.couplings)

    def max_strength(self) -> float:
        return max((abs(c.amplitude) for c in self.couplings), default=0.0)


def enumerate_couplings(basis: StateBasis, fieldspec: FieldSpec) -> CouplingSet:
    """Enumerate every nonzero driven pair of a field on a basis.

    Pairs run from the first connected role to the second, ordered by
    (from_index, to_index); each pair appears once (the reverse
    direction is the conjugate and is implied).
    """
    role_from, role_to = fieldspec.connects
    comps = fieldspec.components()
    ispin = basis.nuclear_spin
    out: list[Coupling] = []
    for i in basis.role_indices(role_from):
        a = basis.states[i]
        for j in basis.role_indices(role_to):
            b = basis.states[j]
            dm = (b.m.twice - a.m.twice) // 2
            if dm * 2 != b.m.twice - a.m.twice or abs(dm) > 1:
                continue
            e_q = comps[dm + 1]
            if abs(e_q) <= _AMPLITUDE_FLOOR:
                continue
            ang = dipole_angular_factor(a.j, a.f, a.m, b.j, b.f, b.m, dm, ispin)
            if ang == 0.0:
                continue
            out.append(Coupling(i, j, dm, complex(e_q) * ang))
    return CouplingSet(fieldspec, basis, tuple(out))


def count_transitions(coupling_set: CouplingSet, state_filter=None) -> int:
    """Count couplings, optionally keeping only (from_state, to_state)
    pairs accepted by ``state_filter``."""
    if state_filter is None:
        return len(coupling_set.couplings)
    states = coupling_set.basis.states
    return sum(
        1
        for c in coupling_set.couplings
        if state_filter(states[c.from_index], states[c.to_index])
    )


def reachable_origin_filter(basis: StateBasis):
    """Filter keeping couplings whose origin is optically reachable."""
    flags = {s.state_id(): r for s, r in zip(basis.states, basis.optical_flags)}

    def accept(state_from, state_to) -> bool:
        return flags[state_from.state_id()]

    return accept


_ROLE_HEIGHT = {"ground": 0.0, "intermediate": 1.0, "rydberg_lower": 2.2, "rydberg_upper": 3.4}
_F_SPREAD = 0.12


def export_diagram(basis: StateBasis, coupling_sets) -> dict:
    """JSON-shaped level diagram: sublevel nodes plus coupling edges.

    Nodes carry a vertical offset (role height plus a small per-F fan)
    and the optical reachability flag; edge strengths are |amplitude|^2
    normalized to the strongest edge of the same field.
    """
    nodes = []
    for state, reach in zip(basis.states, basis.optical_flags):
        level = basis.level_for(state.role)
        fan = (state.f.twice - level.included_f[0].twice) // 2
        nodes.append(
            {
                "id": state.state_id(),
                "role": state.role,
                "label": state.label,
                "f": str(state.f),
                "m_f": str(state.m),
                "vertical_offset": _ROLE_HEIGHT[state.role] + _F_SPREAD * fan,
                "optically_reachable": bool(reach),
            }
        )
    edges = []
    for cs in coupling_sets:
        top = cs.max_strength()
        scale = top * top if top > 0 else 1.0
        for c in cs.couplings:
            edges.append(
                {
                    "from": basis.states[c.from_index].state_id(),
                    "to": basis.states[c.to_index].state_id(),
                    "field": cs.field.name,
                    "q": c.q,
                    "amplitude": c.amplitude.real,
                    "amplitude_imag": c.amplitude.imag,
                    "strength": c.strength / scale,
                    "origin_reachable": bool(basis.optical_flags[c.from_index]),
                }
            )
    return {"nodes": nodes, "edges": edges}
