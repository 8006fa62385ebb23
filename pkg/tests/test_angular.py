"""Exact 3j/6j engine: frozen values, identities, oracle agreement."""

import math
from fractions import Fraction

import pytest

from hfeit.angular import (
    HalfInteger,
    SymbolValue,
    clebsch_gordan,
    dipole_angular_factor,
    triangle_ok,
    wigner3j,
    wigner6j,
)
from hfeit.validate import racah_wigner3j, racah_wigner6j


def halves(j_max):
    return [HalfInteger(t) for t in range(0, 2 * j_max + 1)]


class TestHalfInteger:
    def test_coerce_accepts_ints_floats_fractions(self):
        assert HalfInteger.coerce(2).twice == 4
        assert HalfInteger.coerce(3.5).twice == 7
        assert HalfInteger.coerce(Fraction(7, 2)).twice == 7
        assert HalfInteger.coerce(HalfInteger(5)).twice == 5

    def test_coerce_rejects_thirds(self):
        with pytest.raises(ValueError):
            HalfInteger.coerce(Fraction(1, 3))

    def test_str_forms(self):
        assert str(HalfInteger(7)) == "7/2"
        assert str(HalfInteger(-5)) == "-5/2"
        assert str(HalfInteger(8)) == "4"

    def test_ordering_and_float(self):
        assert HalfInteger(3) < HalfInteger(4)
        assert float(HalfInteger(5)) == 2.5
        assert HalfInteger(5).value == Fraction(5, 2)


class TestWigner3j:
    def test_frozen_values(self):
        assert wigner3j(1, 1, 0, 0, 0, 0) == pytest.approx(-1 / math.sqrt(3), abs=1e-15)
        assert wigner3j(2.5, 1, 1.5, -0.5, 0, 0.5) == pytest.approx(
            1 / math.sqrt(10), abs=1e-15
        )
        assert wigner3j(2, 2, 2, 0, 0, 0) == pytest.approx(-math.sqrt(2.0 / 35.0), abs=1e-15)

    def test_selection_rule_zeros_are_exact(self):
        # odd total j with all m = 0, and a violated m sum
        for args in ((5, 1, 5, 0, 0, 0), (1, 1, 1, 0, 0, 0), (1, 1, 2, 1, 0, 0)):
            value = wigner3j(*args)
            assert value == 0.0
            assert isinstance(value, SymbolValue) and value.exact

    def test_triangle_violation_is_exact_zero(self):
        value = wigner3j(3, 1, 1, 0, 0, 0)
        assert value == 0.0 and value.exact

    def test_malformed_arguments_raise(self):
        with pytest.raises(ValueError):
            wigner3j(1, 1, 1, 2, -1, -1)  # |m| > j
        with pytest.raises(ValueError):
            wigner3j(1, 1, 1, 0.5, 0, -0.5)  # j - m not an integer
        with pytest.raises(ValueError):
            wigner3j(-1, 1, 1, 0, 0, 0)

    def test_even_column_permutation_invariance(self):
        for (j1, j2, j3, m1, m2, m3) in (
            (2, 1.5, 0.5, 1, -1.5, 0.5),
            (3, 2, 1, -2, 1, 1),
        ):
            a = wigner3j(j1, j2, j3, m1, m2, m3)
            b = wigner3j(j2, j3, j1, m2, m3, m1)
            c = wigner3j(j3, j1, j2, m3, m1, m2)
            assert a == pytest.approx(b, abs=1e-15)
            assert a == pytest.approx(c, abs=1e-15)

    def test_odd_permutation_and_m_negation_phase(self):
        j1, j2, j3, m1, m2, m3 = 2, 1.5, 0.5, 1, -1.5, 0.5
        phase = (-1) ** int(j1 + j2 + j3)
        a = wigner3j(j1, j2, j3, m1, m2, m3)
        assert wigner3j(j2, j1, j3, m2, m1, m3) == pytest.approx(phase * a, abs=1e-15)
        assert wigner3j(j1, j2, j3, -m1, -m2, -m3) == pytest.approx(phase * a, abs=1e-15)

    def test_orthogonality_j_leq_2(self):
        # sum over (m1, m2) of (2 j3 + 1) 3j(j3, m3) 3j(j3', m3) = delta
        for tj1 in range(5):
            for tj2 in range(5):
                tjs = range(abs(tj1 - tj2), tj1 + tj2 + 1, 2)
                for tj3 in tjs:
                    for tj3p in tjs:
                        for tm3 in range(-min(tj3, tj3p), min(tj3, tj3p) + 1, 2):
                            total = 0.0
                            for tm1 in range(-tj1, tj1 + 1, 2):
                                tm2 = -tm1 - tm3
                                if abs(tm2) > tj2:
                                    continue
                                total += (
                                    (tj3 + 1)
                                    * wigner3j(*map(HalfInteger, (tj1, tj2, tj3, tm1, tm2, tm3)))
                                    * wigner3j(*map(HalfInteger, (tj1, tj2, tj3p, tm1, tm2, tm3)))
                                )
                            expected = 1.0 if tj3 == tj3p else 0.0
                            assert total == pytest.approx(expected, abs=1e-12)


class TestWigner6j:
    def test_frozen_values(self):
        assert wigner6j(1, 1, 1, 1, 1, 1) == pytest.approx(1 / 6, abs=1e-15)
        assert wigner6j(0.5, 0.5, 1, 0.5, 0.5, 1) == pytest.approx(1 / 6, abs=1e-15)
        assert wigner6j(2, 2, 2, 2, 2, 2) == pytest.approx(-3 / 70, abs=1e-15)

    def test_triad_violation_is_exact_zero(self):
        value = wigner6j(1, 1, 3, 1, 1, 1)
        assert value == 0.0 and value.exact

    def test_negative_argument_raises(self):
        with pytest.raises(ValueError):
            wigner6j(-0.5, 0.5, 1, 0.5, 0.5, 1)

    def test_column_permutation_invariance(self):
        a = wigner6j(2, 1.5, 1.5, 1, 1.5, 1.5)
        assert wigner6j(1.5, 2, 1.5, 1.5, 1, 1.5) == pytest.approx(a, abs=1e-15)
        assert wigner6j(1.5, 1.5, 2, 1.5, 1.5, 1) == pytest.approx(a, abs=1e-15)

    def test_row_swap_invariance(self):
        # swapping upper and lower entries in any two columns
        a = wigner6j(2, 1.5, 0.5, 1, 1.5, 1.5)
        assert a != 0.0
        assert wigner6j(1, 1.5, 0.5, 2, 1.5, 1.5) == pytest.approx(a, abs=1e-15)
        assert wigner6j(1, 1.5, 1.5, 2, 1.5, 0.5) == pytest.approx(a, abs=1e-15)

    def test_orthogonality_j_leq_2(self):
        # sum over x of (2x+1)(2p+1) {a b x; c d p}{a b x; c d q} = delta_pq
        js = halves(2)
        for a in js:
            for b in js:
                for c in js:
                    for d in js:
                        ps = [
                            p
                            for p in js
                            if triangle_ok(a, d, p) and triangle_ok(c, b, p)
                        ]
                        for p in ps:
                            for q in ps:
                                total = 0.0
                                for x in halves(4):
                                    if not (triangle_ok(a, b, x) and triangle_ok(c, d, x)):
                                        continue
                                    total += (
                                        (x.twice + 1)
                                        * (p.twice + 1)
                                        * wigner6j(a, b, x, c, d, p)
                                        * wigner6j(a, b, x, c, d, q)
                                    )
                                expected = 1.0 if p == q else 0.0
                                assert total == pytest.approx(expected, abs=1e-12)


class TestOracleAgreement:
    def test_3j_matches_racah_sum_j_leq_6(self):
        worst = 0.0
        for tj1 in range(13):
            for tj2 in range(tj1 + 1):
                for tj3 in range(abs(tj1 - tj2), min(tj1 + tj2, 12) + 1, 2):
                    for tm1 in range(-tj1, tj1 + 1, 2):
                        for tm2 in range(-tj2, tj2 + 1, 2):
                            tm3 = -tm1 - tm2
                            if abs(tm3) > tj3:
                                continue
                            args = [HalfInteger(t) for t in (tj1, tj2, tj3, tm1, tm2, tm3)]
                            worst = max(worst, abs(wigner3j(*args) - racah_wigner3j(*args)))
        assert worst <= 1e-12

    def test_6j_matches_racah_sum_j_leq_4(self):
        worst = 0.0
        for tj1 in range(9):
            for tj2 in range(tj1 + 1):
                for tj3 in range(abs(tj1 - tj2), min(tj1 + tj2, 8) + 1, 2):
                    for tj4 in range(9):
                        for tj5 in range(abs(tj3 - tj4), min(tj3 + tj4, 8) + 1, 2):
                            for tj6 in range(abs(tj1 - tj5), min(tj1 + tj5, 8) + 1, 2):
                                args = [
                                    HalfInteger(t)
                                    for t in (tj1, tj2, tj3, tj4, tj5, tj6)
                                ]
                                worst = max(
                                    worst, abs(wigner6j(*args) - racah_wigner6j(*args))
                                )
        assert worst <= 1e-12


class TestClebschGordan:
    def test_spin_half_coupling(self):
        assert clebsch_gordan(0.5, 0.5, 0.5, -0.5, 1, 0) == pytest.approx(
            1 / math.sqrt(2), abs=1e-15
        )
        assert clebsch_gordan(0.5, 0.5, 0.5, -0.5, 0, 0) == pytest.approx(
            1 / math.sqrt(2), abs=1e-15
        )
        assert clebsch_gordan(0.5, 0.5, 0.5, 0.5, 1, 1) == pytest.approx(1.0, abs=1e-15)


class TestDipoleAngularFactor:
    I_CS = 3.5

    def test_frozen_value(self):
        a = dipole_angular_factor(2.5, 4, 1, 1.5, 3, 1, 0, self.I_CS)
        assert a == pytest.approx(-0.20229339842817176, abs=1e-15)

    def test_zero_when_q_mismatched(self):
        assert dipole_angular_factor(2.5, 4, 1, 1.5, 3, 2, 0, self.I_CS) == 0.0
        assert dipole_angular_factor(2.5, 4, 1, 1.5, 3, 1, 1, self.I_CS) == 0.0

    def test_invalid_q_raises(self):
        with pytest.raises(ValueError):
            dipole_angular_factor(2.5, 4, 1, 1.5, 3, 1, 2, self.I_CS)

    def test_incompatible_f_raises(self):
        with pytest.raises(ValueError):
            dipole_angular_factor(2.5, 7, 0, 1.5, 3, 0, 0, self.I_CS)

    def test_total_strength_is_m_independent(self):
        # the summed line strength out of |F, m> cannot depend on m
        totals = set()
        for m in range(-4, 5):
            total = 0.0
            for fp in (2, 3, 4, 5):
                for q in (-1, 0, 1):
                    if abs(m + q) > fp:
                        continue
                    total += dipole_angular_factor(2.5, 4, m, 1.5, fp, m + q, q, self.I_CS) ** 2
            totals.add(round(total, 12))
        assert len(totals) == 1

    def test_total_strength_matches_6j_sum(self):
        total = sum(
            dipole_angular_factor(2.5, 4, 0, 1.5, fp, q, q, self.I_CS) ** 2
            for fp in (2, 3, 4, 5)
            for q in (-1, 0, 1)
            if abs(q) <= fp
        )
        expected = sum(
            (2 * fp + 1) * float(racah_wigner6j(2.5, 1.5, 1, fp, 4, self.I_CS)) ** 2
            for fp in (2, 3, 4, 5)
        )
        assert total == pytest.approx(expected, abs=1e-13)
