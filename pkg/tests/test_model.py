"""Level-scheme model: manifolds, presets, ordering, reachability."""

import pytest

from hfeit import (
    FineLevel,
    HalfInteger,
    Scenario,
    build_basis,
    hyperfine_manifolds,
    scenario_full,
    scenario_truncated,
)
from conftest import X


def _h(x):
    return HalfInteger.coerce(x)


def _lvl(role, label, j, fs, m_max=None):
    return FineLevel(role, label, _h(j), tuple(_h(f) for f in fs),
                     None if m_max is None else _h(m_max))


class TestManifolds:
    def test_cesium_levels(self):
        assert [float(f) for f in hyperfine_manifolds(0.5, 3.5)] == [3.0, 4.0]
        assert [float(f) for f in hyperfine_manifolds(1.5, 3.5)] == [2.0, 3.0, 4.0, 5.0]
        assert [float(f) for f in hyperfine_manifolds(2.5, 3.5)] == [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]

    def test_zero_nuclear_spin(self):
        assert [float(f) for f in hyperfine_manifolds(1, 0)] == [1.0]


class TestScenarioValidation:
    def test_wrong_role_order_raises(self):
        levels = (
            _lvl("intermediate", "e", 0, (0,)),
            _lvl("ground", "g", 0, (0,)),
            _lvl("rydberg_lower", "r", 0, (0,)),
            _lvl("rydberg_upper", "u", 0, (0,)),
        )
        with pytest.raises(ValueError, match="in order"):
            Scenario("bad", _h(0), levels)

    def test_unphysical_f_raises(self):
        levels = (
            _lvl("ground", "g", 0.5, (5,)),
            _lvl("intermediate", "e", 1.5, (5,)),
            _lvl("rydberg_lower", "r", 2.5, (6,)),
            _lvl("rydberg_upper", "u", 1.5, (5,)),
        )
        with pytest.raises(ValueError, match="not a hyperfine manifold"):
            Scenario("bad", _h(3.5), levels)

    def test_descending_f_raises(self):
        levels = (
            _lvl("ground", "g", 0.5, (4, 3)),
            _lvl("intermediate", "e", 1.5, (5,)),
            _lvl("rydberg_lower", "r", 2.5, (6,)),
            _lvl("rydberg_upper", "u", 1.5, (5,)),
        )
        with pytest.raises(ValueError, match="ascending"):
            Scenario("bad", _h(3.5), levels)

    def test_empty_manifold_list_raises(self):
        levels = (
            _lvl("ground", "g", 0.5, ()),
            _lvl("intermediate", "e", 1.5, (5,)),
            _lvl("rydberg_lower", "r", 2.5, (6,)),
            _lvl("rydberg_upper", "u", 1.5, (5,)),
        )
        with pytest.raises(ValueError, match="no hyperfine manifold"):
            Scenario("bad", _h(3.5), levels)

    def test_misaligned_offsets_raise(self):
        with pytest.raises(ValueError, match="align"):
            Scenario(
                "bad",
                _h(3.5),
                (
                    FineLevel("ground", "g", _h(0.5), (_h(3), _h(4)), None, (0.0,)),
                    _lvl("intermediate", "e", 1.5, (5,)),
                    _lvl("rydberg_lower", "r", 2.5, (6,)),
                    _lvl("rydberg_upper", "u", 1.5, (5,)),
                ),
            )


class TestPresets:
    def test_full_sizes(self, full_basis):
        assert len(full_basis) == 100
        assert len(full_basis.role_indices("ground")) == 9
        assert len(full_basis.role_indices("intermediate")) == 11
        assert len(full_basis.role_indices("rydberg_lower")) == 48
        assert len(full_basis.role_indices("rydberg_upper")) == 32

    def test_truncated_sizes(self, truncated_basis):
        assert len(truncated_basis) == 80
        assert len(truncated_basis.role_indices("rydberg_lower")) == 33
        assert len(truncated_basis.role_indices("rydberg_upper")) == 27

    def test_truncated_keeps_upper_manifolds(self):
        scen = scenario_truncated()
        assert [float(f) for f in scen.level("rydberg_lower").included_f] == [4.0, 5.0, 6.0]
        assert [float(f) for f in scen.level("rydberg_upper").included_f] == [3.0, 4.0, 5.0]

    def test_degenerate_offsets(self, full_basis):
        assert all(s.offset_mhz == 0.0 for s in full_basis.states)


class TestOrdering:
    def test_role_then_f_then_m(self, full_basis):
        roles = [s.role for s in full_basis.states]
        order = {"ground": 0, "intermediate": 1, "rydberg_lower": 2, "rydberg_upper": 3}
        assert roles == sorted(roles, key=order.__getitem__)
        for role in order:
            keys = [
                (s.f.twice, s.m.twice)
                for s in full_basis.states
                if s.role == role
            ]
            assert keys == sorted(keys)

    def test_state_id_round_trip(self, full_basis):
        i = full_basis.index_of("rydberg_lower", 4, -2)
        state = full_basis.states[i]
        assert state.state_id() == "rydberg_lower:F=4:m=-2"

    def test_deterministic(self, full_basis):
        again = build_basis(scenario_full())
        assert [s.state_id() for s in again.states] == [
            s.state_id() for s in full_basis.states
        ]
        assert again.optical_flags == full_basis.optical_flags


class TestReachability:
    def test_reachable_rydberg_count(self, full_basis):
        assert len(full_basis.reachable_indices("rydberg_lower")) == 27

    def test_reachable_set_is_low_m_f456(self, full_basis):
        got = {
            full_basis.states[i].state_id()
            for i in full_basis.reachable_indices("rydberg_lower")
        }
        want = {
            f"rydberg_lower:F={f}:m={m}" for f in (4, 5, 6) for m in range(-4, 5)
        }
        assert got == want

    def test_upper_rydberg_never_optically_flagged(self, full_basis):
        assert full_basis.reachable_indices("rydberg_upper") == ()

    def test_ground_always_flagged(self, full_basis):
        assert len(full_basis.reachable_indices("ground")) == 9

    def test_truncated_reachable_subset_of_full(self, full_basis, truncated_basis):
        full_ids = {
            full_basis.states[i].state_id() for i in full_basis.reachable_indices()
        }
        trunc_ids = {
            truncated_basis.states[i].state_id()
            for i in truncated_basis.reachable_indices()
        }
        assert trunc_ids <= full_ids

    def test_sigma_polarizations_shift_reachable_window(self):
        # sigma+ probe and coupling push the reachable m range up by two
        sigma_plus = (1.0, -1j, 0.0)
        basis = build_basis(scenario_full(), (sigma_plus, sigma_plus))
        ms = {
            float(basis.states[i].m)
            for i in basis.reachable_indices("rydberg_lower")
        }
        assert min(ms) == -2.0 and max(ms) == 6.0

    def test_x_polarization_widens_reachable_window(self):
        basis = build_basis(scenario_full(), (X, X))
        assert len(basis.reachable_indices("rydberg_lower")) > 27

    def test_m_cap_keeps_single_sublevel(self):
        levels = (
            _lvl("ground", "g", 0.5, (3,)),
            _lvl("intermediate", "e", 1.5, (4,), m_max=0),
            _lvl("rydberg_lower", "r", 2.5, (5,)),
            _lvl("rydberg_upper", "u", 1.5, (4,)),
        )
        scen = Scenario("capped", _h(3.5), levels)
        assert len(build_basis(scen).role_indices("intermediate")) == 1

    def test_m_cap_respects_half_integer_parity(self):
        # F = 5/2 sublevels are half-integer; a cap of 1 keeps only +-1/2
        levels = (
            _lvl("ground", "g", 0, (0.5,)),
            _lvl("intermediate", "e", 1, (0.5,)),
            _lvl("rydberg_lower", "r", 2, (2.5,), m_max=1),
            _lvl("rydberg_upper", "u", 1, (0.5,)),
        )
        scen = Scenario("halfcap", _h(0.5), levels)
        ms = {
            float(s.m)
            for s in build_basis(scen).states
            if s.role == "rydberg_lower"
        }
        assert ms == {-0.5, 0.5}

    def test_m_cap_that_empties_a_level_raises(self):
        # no mF = 0 exists in a half-integer manifold, so m_max = 0 empties it
        levels = (
            _lvl("ground", "g", 0, (0.5,)),
            _lvl("intermediate", "e", 1, (0.5,), m_max=0),
            _lvl("rydberg_lower", "r", 2, (1.5,)),
            _lvl("rydberg_upper", "u", 1, (0.5,)),
        )
        scen = Scenario("emptied", _h(0.5), levels)
        with pytest.raises(ValueError, match="removes every sublevel"):
            build_basis(scen)


class TestLevelAccess:
    def test_level_for(self, full_basis):
        assert full_basis.level_for("ground").label == scenario_full().level("ground").label
        with pytest.raises(KeyError):
            full_basis.level_for("nope")

    def test_nuclear_spin(self, full_basis):
        assert float(full_basis.nuclear_spin) == 3.5
