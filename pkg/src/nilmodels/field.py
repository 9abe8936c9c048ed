"""Exact scalars over Q and F_p, and square classes k*/(k*)^2.

Rational modes (Q, R, C) all compute with ``gmpy2.mpq``; the
mode only changes which rationals are identified as squares. The prime
mode computes with :class:`Residue`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from numbers import Rational

from gmpy2 import mpq

from sympy import factorint, isprime, perfect_power, primerange
from sympy.ntheory import sqrt_mod

__all__ = [
    "FieldError",
    "BadMode",
    "ZeroElement",
    "FactorizationTooHard",
    "Residue",
    "FieldMode",
    "SquareClass",
    "INFINITE",
    "square_class",
    "same_class",
    "square_class_count",
    "rational_class_count",
    "rational_class_in_mode",
    "squarefree_part",
    "exact_sqrt",
    "is_square",
]

FACTOR_BOUND = 10**12


class FieldError(ValueError):
    pass


class BadMode(FieldError):
    pass


class ZeroElement(FieldError):
    pass


class FactorizationTooHard(FieldError):
    pass


class Residue:
    """Residue class modulo an odd prime ``p``, stored in ``[0, p-1]``."""

    __slots__ = ("value", "p")

    def __init__(self, value, p):
        if isinstance(value, Residue):
            value = value.value
        elif not isinstance(value, int) and isinstance(value, Rational):
            if value.denominator % p == 0:
                raise ZeroDivisionError(f"{value} has no image mod {p}")
            value = int(value.numerator) * pow(int(value.denominator), -1, p)
        self.value = int(value) % p
        self.p = p

    @classmethod
    def _raw(cls, value, p):
        r = object.__new__(cls)
        r.value = value % p
        r.p = p
        return r

    def _coerce(self, other):
        if isinstance(other, Residue):
            if other.p != self.p:
                raise BadMode(f"mixing residues mod {self.p} and {other.p}")
            return other
        if isinstance(other, (int, Fraction, type(mpq()))):
            return Residue(other, self.p)
        return NotImplemented

    def __add__(self, other):
        if other.__class__ is Residue and other.p == self.p:
            return Residue._raw(self.value + other.value, self.p)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Residue(self.value + other.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        if other.__class__ is Residue and other.p == self.p:
            return Residue._raw(self.value - other.value, self.p)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Residue(self.value - other.value, self.p)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Residue(other.value - self.value, self.p)

    def __mul__(self, other):
        if other.__class__ is Residue and other.p == self.p:
            return Residue._raw(self.value * other.value, self.p)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Residue(self.value * other.value, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.value == 0:
            raise ZeroDivisionError("division by zero residue")
        return Residue(self.value * pow(other.value, -1, self.p), self.p)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __neg__(self):
        return Residue._raw(-self.value, self.p)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if k < 0:
            return Residue(pow(self.value, -1, self.p), self.p) ** (-k)
        return Residue(pow(self.value, k, self.p), self.p)

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.value == other.value

    def __hash__(self):
        return hash((self.value, self.p))

    def __repr__(self):
        return f"Residue({self.value}, {self.p})"

    def __str__(self):
        return f"{self.value} mod {self.p}"


_MODE_RE = re.compile(r"^\s*(Q|R|C|F(\d+))\s*$")


@dataclass(frozen=True)
class FieldMode:
    """Field semantics: ``"Q"``, ``"R"``, ``"C"`` or ``"Fp"`` with ``p`` an odd prime.

    Arithmetic in Q/R/C is exact rational; R and C only change which
    rationals count as squares.
    """

    kind: str
    p: int | None = field(default=None)

    def __post_init__(self):
        if self.kind not in ("Q", "R", "C", "Fp"):
            raise BadMode(f"unknown field mode {self.kind!r}")
        if self.kind == "Fp":
            if self.p is None or self.p == 2 or not isprime(self.p):
                raise BadMode(f"F_p needs an odd prime p, got {self.p}")
        elif self.p is not None:
            raise BadMode(f"mode {self.kind} takes no prime")

    @classmethod
    def parse(cls, text: str) -> "FieldMode":
        if isinstance(text, FieldMode):
            return text
        m = _MODE_RE.match(str(text))
        if not m:
            raise BadMode(f"cannot parse field mode {text!r}")
        if m.group(2):
            return cls("Fp", int(m.group(2)))
        return cls(m.group(1))

    def __str__(self):
        return f"F{self.p}" if self.kind == "Fp" else self.kind

    @property
    def is_prime(self) -> bool:
        return self.kind == "Fp"

    @property
    def base(self) -> "FieldMode":
        """The exact field the arithmetic actually happens in."""
        return self if self.is_prime else Q

    def __call__(self, x):
        """Coerce an int, Fraction, Residue or string to a scalar of this field."""
        if isinstance(x, str):
            return self.parse_scalar(x)
        if self.is_prime:
            return Residue(x, self.p)
        if isinstance(x, Residue):
            raise BadMode("residue given to a rational mode")
        return mpq(x)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    def parse_scalar(self, text: str):
        text = text.strip()
        if " mod " in text:
            val, mod = text.split(" mod ")
            if not self.is_prime or int(mod) != self.p:
                raise BadMode(f"scalar {text!r} does not live in {self}")
            return Residue(int(val), self.p)
        return self(mpq(Fraction(text)))

    def format(self, x) -> str:
        if isinstance(x, Residue):
            return str(x)
        x = mpq(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


Q = FieldMode("Q")
R = FieldMode("R")
C = FieldMode("C")

INFINITE = float("inf")


SMALL_PRIME_LIMIT = 10**4


def _factor_cofactor(n: int, bound: int) -> dict[int, int]:
    if n == 1:
        return {}
    if isprime(n):
        return {n: 1}
    pp = perfect_power(n)
    if pp:
        base, e = pp
        return {int(q): k * int(e) for q, k in _factor_cofactor(int(base), bound).items()}
    if n > bound:
        raise FactorizationTooHard(f"cofactor {n} exceeds factorization bound {bound}")
    return factorint(n)


def _trial_factor(n: int, bound: int = FACTOR_BOUND) -> dict[int, int]:
    """Prime factorization of a positive integer.

    Primes below ``SMALL_PRIME_LIMIT`` are stripped first; the cofactor is
    accepted when prime or a perfect power of something factorable, fully
    factored when at most ``bound``, and refused otherwise.
    """
    out: dict[int, int] = {}
    for q in primerange(2, SMALL_PRIME_LIMIT):
        if q * q > n:
            break
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    for q, e in _factor_cofactor(n, bound).items():
        out[q] = out.get(q, 0) + e
    return out


def squarefree_part(x, bound: int = FACTOR_BOUND) -> int:
    """Signed squarefree integer in the square class of the rational ``x``."""
    x = mpq(x)
    if x == 0:
        raise ZeroElement("0 has no square class")
    sign = -1 if x < 0 else 1
    out = 1
    for n in (int(abs(x.numerator)), int(x.denominator)):
        for q, e in _trial_factor(n, bound).items():
            if e % 2:
                out *= q
    # numerator and denominator are coprime, so no prime is counted twice
    return sign * out


@lru_cache(maxsize=None)
def least_nonresidue(p: int) -> int:
    a = 2
    while pow(a, (p - 1) // 2, p) == 1:
        a += 1
    return a


@dataclass(frozen=True)
class SquareClass:
    """An element of k*/(k*)^2, held by its canonical representative."""

    representative: object
    mode: FieldMode

    @property
    def trivial(self) -> bool:
        return self.representative == 1

    def __str__(self):
        return self.mode.format(self.representative)


def _check_mode(mode) -> FieldMode:
    mode = FieldMode.parse(mode)
    return mode


def square_class(x, mode) -> SquareClass:
    """Canonical representative of the class of ``x`` in k*/(k*)^2.

    Q: signed squarefree integer; R: +-1; C: 1; F_p: 1 or the least
    quadratic non-residue mod p.
    """
    mode = _check_mode(mode)
    if not x:
        raise ZeroElement("0 has no square class")
    if mode.is_prime:
        v = Residue(x, mode.p).value
        if pow(v, (mode.p - 1) // 2, mode.p) == 1:
            return SquareClass(Residue(1, mode.p), mode)
        return SquareClass(Residue(least_nonresidue(mode.p), mode.p), mode)
    x = mpq(x)
    if mode.kind == "C":
        return SquareClass(mpq(1), mode)
    if mode.kind == "R":
        return SquareClass(mpq(1 if x > 0 else -1), mode)
    return SquareClass(mpq(squarefree_part(x)), mode)


def same_class(x, y, mode) -> bool:
    return square_class(x, mode) == square_class(y, mode)


def square_class_count(mode):
    """|k*/(k*)^2|: 1 for C, 2 for R and F_p, infinite for Q."""
    mode = _check_mode(mode)
    return {"C": 1, "R": 2, "Fp": 2, "Q": INFINITE}[mode.kind]


def rational_class_count(mode):
    """s = |Q*/((k*)^2 ∩ Q*)| for k = Q, R or C: infinite, 2, 1."""
    mode = _check_mode(mode)
    if mode.is_prime:
        raise BadMode("rational_class_count needs Q, R or C")
    return {"C": 1, "R": 2, "Q": INFINITE}[mode.kind]


def rational_class_in_mode(a, mode) -> SquareClass:
    """Class of the rational ``a`` in Q*/((k*)^2 ∩ Q*) for k = Q, R or C."""
    mode = _check_mode(mode)
    if mode.is_prime:
        raise BadMode("rational_class_in_mode needs Q, R or C")
    return square_class(mpq(a), mode)


def exact_sqrt(x, mode=Q):
    """A square root of ``x`` inside the exact base field, or None."""
    mode = _check_mode(mode)
    if isinstance(x, Residue) or mode.is_prime:
        r = Residue(x, mode.p)
        roots = sqrt_mod(r.value, r.p, all_roots=True)
        if not roots:
            return None
        return Residue(min(roots), r.p)
    x = mpq(x)
    if x < 0:
        return None
    num, den = int(x.numerator), int(x.denominator)
    n, d = isqrt(num), isqrt(den)
    if n * n == num and d * d == den:
        return mpq(n, d)
    return None


def is_square(x, mode) -> bool:
    """Whether ``x`` is a square in the field named by ``mode``."""
    mode = _check_mode(mode)
    if not x:
        return True
    return square_class(x, mode).trivial
