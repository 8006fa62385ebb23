"""Exact angular-momentum algebra for hyperfine dipole couplings.

Phase conventions, fixed once for the whole package:

* Clebsch-Gordan coefficients are real in the Condon-Shortley
  convention; ``wigner3j``/``wigner6j`` are the standard invariant
  symbols built on it.
* ``dipole_angular_factor`` reduces a rank-1 (dipole) operator that
  acts on the electronic angular momentum J into the coupled basis
  |(J I) F mF> and carries the (-1)**(F' + J + 1 + I) recoupling
  phase.  The electronic reduced matrix element is set to 1, so the
  radial physics of a transition lives entirely in the per-field Rabi
  frequency and the factor returned here is dimensionless.
* The Wigner-Eckart 3j is written with the destination state in its
  first slot, which makes the photon spherical component obey
  q = mF(to) - mF(from).

Individual signs are convention, not physics: only phase-invariant
combinations (line strengths, dressed eigenvalues, spectra) are
observable, and the tests pin those.

Symbols are evaluated exactly.  Factorial products are carried as
prime-exponent vectors, the Racah sum is accumulated as a big-integer
rational, and the only floating-point rounding is the final square
root of a square-free integer.  Selection-rule zeros are therefore an
exact 0.0, and values are reproducible bit-for-bit across runs (the
evaluation cache is a plain ``functools.lru_cache``, safe for
concurrent readers).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "HalfInteger",
    "SymbolValue",
    "wigner3j",
    "wigner6j",
    "clebsch_gordan",
    "dipole_angular_factor",
    "triangle_ok",
]


@dataclass(frozen=True, order=True)
class HalfInteger:
    """An integer or half-integer quantum number stored as 2*value."""

    twice: int

    @classmethod
    def coerce(cls, x, what: str = "angular momentum") -> "HalfInteger":
        """Accept HalfInteger, int, Fraction or an exactly-half float."""
        if isinstance(x, HalfInteger):
            return x
        try:
            doubled = 2 * Fraction(x)
        except (TypeError, ValueError):
            raise ValueError(f"{what} must be a number, got {x!r}") from None
        if doubled.denominator != 1:
            raise ValueError(
                f"{what} must be integral or half-integral, got {x!r}"
            )
        return cls(int(doubled))

    @property
    def value(self) -> float:
        return self.twice / 2

    def __float__(self) -> float:
        return self.twice / 2

    def __str__(self) -> str:
        return str(self.twice // 2) if self.twice % 2 == 0 else f"{self.twice}/2"


class SymbolValue(float):
    """Float subclass tagging values produced by the exact evaluation path."""

    exact: bool

    def __new__(cls, value: float, exact: bool = True) -> "SymbolValue":
        out = super().__new__(cls, value)
        out.exact = exact
        return out


def _twice(x, what: str) -> int:
    return HalfInteger.coerce(x, what).twice


def _triangle_t(ta: int, tb: int, tc: int) -> bool:
    # triangle rule on twice-values, including the integer-perimeter rule
    if (ta + tb + tc) % 2 != 0:
        return False
    return abs(ta - tb) <= tc <= ta + tb


def triangle_ok(a, b, c) -> bool:
    """True when (a, b, c) can couple: |a-b| <= c <= a+b with integer sum."""
    return _triangle_t(_twice(a, "a"), _twice(b, "b"), _twice(c, "c"))


# ---------------------------------------------------------------------------
# Exact factorial machinery: n! as a prime-exponent vector (Legendre).

_PRIMES: list[int] = [2, 3, 5, 7, 11, 13]


def _primes_upto(n: int) -> list[int]:
    while _PRIMES[-1] < n:
        cand = _PRIMES[-1] + 2
        while any(cand % p == 0 for p in _PRIMES if p * p <= cand):
            cand += 2
        _PRIMES.append(cand)
    return [p for p in _PRIMES if p <= n]


@lru_cache(maxsize=None)
def _fact_exponents(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n! as ((prime, exponent), ...)."""
    if n < 0:
        raise ValueError("factorial of a negative number")
    out = []
    for p in _primes_upto(max(n, 2)):
        if p > n:
            break
        e, q = 0, p
        while q <= n:
            e += n // q
            q *= p
        out.append((p, e))
    return tuple(out)


def _vec_add(acc: dict[int, int], fac: tuple[tuple[int, int], ...], sign: int) -> None:
    for p, e in fac:
        acc[p] = acc.get(p, 0) + sign * e


def _sqrt_split(vec: dict[int, int]) -> tuple[Fraction, int]:
    """Split prod(p**e) into (rational)**2 * squarefree; return (rational, squarefree)."""
    num, den, free = 1, 1, 1
    for p, e in vec.items():
        if e == 0:
            continue
        half = e >> 1  # floor division keeps the residue in {0, 1}
        if half >= 0:
            num *= p ** half
        else:
            den *= p ** (-half)
        if e - 2 * half:
            free *= p
    return Fraction(num, den), free


def _delta_vec(acc: dict[int, int], ta: int, tb: int, tc: int) -> None:
    # squared triangle coefficient Delta^2(a b c), accumulated into acc
    _vec_add(acc, _fact_exponents((ta + tb - tc) // 2), +1)
    _vec_add(acc, _fact_exponents((ta - tb + tc) // 2), +1)
    _vec_add(acc, _fact_exponents((-ta + tb + tc) // 2), +1)
    _vec_add(acc, _fact_exponents((ta + tb + tc) // 2 + 1), -1)


def _finish(sign_exponent: int, pref: dict[int, int], racah_sum: Fraction) -> SymbolValue:
    if racah_sum == 0:
        return SymbolValue(0.0)
    rational, squarefree = _sqrt_split(pref)
    magnitude = rational * abs(racah_sum)
    value = float(magnitude) * math.sqrt(squarefree)
    if (racah_sum < 0) ^ (sign_exponent % 2 != 0):
        value = -value
    return SymbolValue(value)


# ---------------------------------------------------------------------------
# The symbols themselves.


@lru_cache(maxsize=None)
def _wigner3j_t(tj1: int, tj2: int, tj3: int, tm1: int, tm2: int, tm3: int) -> SymbolValue:
    if tm1 + tm2 + tm3 != 0 or not _triangle_t(tj1, tj2, tj3):
        return SymbolValue(0.0)

    # integer Racah parameters (all guaranteed integral here)
    j1pj2mj3 = (tj1 + tj2 - tj3) // 2
    j1mm1 = (tj1 - tm1) // 2
    j2pm2 = (tj2 + tm2) // 2
    j3mj2pm1 = (tj3 - tj2 + tm1) // 2
    j3mj1mm2 = (tj3 - tj1 - tm2) // 2

    t_min = max(0, -j3mj2pm1, -j3mj1mm2)
    t_max = min(j1pj2mj3, j1mm1, j2pm2)
    total = Fraction(0)
    for t in range(t_min, t_max + 1):
        den = (
            math.factorial(t)
            * math.factorial(j1pj2mj3 - t)
            * math.factorial(j1mm1 - t)
            * math.factorial(j2pm2 - t)
            * math.factorial(j3mj2pm1 + t)
            * math.factorial(j3mj1mm2 + t)
        )
        total += Fraction(-1 if t % 2 else 1, den)

    pref: dict[int, int] = {}
    _delta_vec(pref, tj1, tj2, tj3)
    for tj, tm in ((tj1, tm1), (tj2, tm2), (tj3, tm3)):
        _vec_add(pref, _fact_exponents((tj + tm) // 2), +1)
        _vec_add(pref, _fact_exponents((tj - tm) // 2), +1)

    return _finish((tj1 - tj2 - tm3) // 2, pref, total)


def wigner3j(j1, j2, j3, m1, m2, m3) -> SymbolValue:
    """Wigner 3j symbol (j1 j2 j3 / m1 m2 m3).

    Violated triangle or m-sum rules give an exact 0.0; malformed
    arguments (|m| > j, non-integral j - m, j < 0) raise ValueError.
    """
    tj = (_twice(j1, "j1"), _twice(j2, "j2"), _twice(j3, "j3"))
    tm = (_twice(m1, "m1"), _twice(m2, "m2"), _twice(m3, "m3"))
    for k in range(3):
        if tj[k] < 0:
            raise ValueError(f"j{k + 1} must be non-negative")
        if abs(tm[k]) > tj[k]:
            raise ValueError(f"|m{k + 1}| exceeds j{k + 1}")
        if (tj[k] - tm[k]) % 2 != 0:
            raise ValueError(f"j{k + 1} - m{k + 1} must be an integer")
    return _wigner3j_t(*tj, *tm)


@lru_cache(maxsize=None)
def _wigner6j_t(ta: int, tb: int, tc: int, td: int, te: int, tf: int) -> SymbolValue:
    triads = ((ta, tb, tc), (ta, te, tf), (td, tb, tf), (td, te, tc))
    if not all(_triangle_t(*tr) for tr in triads):
        return SymbolValue(0.0)

    abc = (ta + tb + tc) // 2
    aef = (ta + te + tf) // 2
    dbf = (td + tb + tf) // 2
    dec = (td + te + tc) // 2
    abde = (ta + tb + td + te) // 2
    bcef = (tb + tc + te + tf) // 2
    acdf = (ta + tc + td + tf) // 2

    total = Fraction(0)
    for z in range(max(abc, aef, dbf, dec), min(abde, bcef, acdf) + 1):
        den = (
            math.factorial(z - abc)
            * math.factorial(z - aef)
            * math.factorial(z - dbf)
            * math.factorial(z - dec)
            * math.factorial(abde - z)
            * math.factorial(bcef - z)
            * math.factorial(acdf - z)
        )
        total += Fraction((-1 if z % 2 else 1) * math.factorial(z + 1), den)

    pref: dict[int, int] = {}
    for tr in triads:
        _delta_vec(pref, *tr)
    return _finish(0, pref, total)


def wigner6j(j1, j2, j3, j4, j5, j6) -> SymbolValue:
    """Wigner 6j symbol {j1 j2 j3 / j4 j5 j6}.

    Triad triangle violations give an exact 0.0; negative or
    non-half-integral arguments raise ValueError.
    """
    t = tuple(_twice(j, f"j{k + 1}") for k, j in enumerate((j1, j2, j3, j4, j5, j6)))
    if any(tj < 0 for tj in t):
        raise ValueError("6j arguments must be non-negative")
    return _wigner6j_t(*t)


def clebsch_gordan(j1, m1, j2, m2, j3, m3) -> SymbolValue:
    """Condon-Shortley Clebsch-Gordan coefficient <j1 m1 j2 m2 | j3 m3>."""
    tj3 = _twice(j3, "j3")
    tm3 = _twice(m3, "m3")
    sym = wigner3j(j1, j2, j3, m1, m2, HalfInteger(-tm3))
    if sym == 0.0:
        return SymbolValue(0.0)
    exponent = (_twice(j1, "j1") - _twice(j2, "j2") + tm3) // 2
    value = math.sqrt(tj3 + 1) * sym
    return SymbolValue(-value if exponent % 2 else value)


def dipole_angular_factor(j1, f1, m1, j2, f2, m2, q: int, nuclear_spin) -> float:
    """Dimensionless hyperfine dipole factor for |J F mF> -> |J' F' mF'>.

    Wigner-Eckart reduction of a rank-1 electronic operator with unit
    reduced matrix element:

        (-1)**(F' + J + 1 + I) * sqrt((2F+1)(2F'+1)) * {J J' 1; F' F I}
        * (-1)**(F' - mF') * threej(F', 1, F; -mF', q, mF)

    Nonzero only when q = mF' - mF, |F - F'| <= 1 and the F/F' triads
    close.  q outside {-1, 0, +1} or an F incompatible with (J, I) is a
    caller error and raises.
    """
    if q not in (-1, 0, 1):
        raise ValueError(f"spherical component q must be -1, 0 or +1, got {q!r}")
    tj1, tf1, tm1 = _twice(j1, "J"), _twice(f1, "F"), _twice(m1, "mF")
    tj2, tf2, tm2 = _twice(j2, "J'"), _twice(f2, "F'"), _twice(m2, "mF'")
    ti = _twice(nuclear_spin, "I")
    if not _triangle_t(tj1, ti, tf1):
        raise ValueError(f"F={f1} cannot arise from J={j1}, I={nuclear_spin}")
    if not _triangle_t(tj2, ti, tf2):
        raise ValueError(f"F'={f2} cannot arise from J'={j2}, I={nuclear_spin}")
    if tm2 - tm1 != 2 * q:
        return 0.0
    if not _triangle_t(tj1, tj2, 2):
        return 0.0

    sixj = _wigner6j_t(tj1, tj2, 2, tf2, tf1, ti)
    if sixj == 0.0:
        return 0.0
    threej = _wigner3j_t(tf2, 2, tf1, -tm2, 2 * q, tm1)
    if threej == 0.0:
        return 0.0

    # (F' + J + 1 + I) and (F' - mF') are integers whenever the triads close
    exponent = (tf2 + tj1 + ti) // 2 + 1 + (tf2 - tm2) // 2
    value = math.sqrt((tf1 + 1) * (tf2 + 1)) * sixj * threej
    return -value if exponent % 2 else value
