"""Closed 2-forms, the Pfaffian form on them, and symplectic witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations, combinations_with_replacement, product
from math import factorial

from .algebra import MinimalAlgebra
from .multilinear import ExteriorElement, Subspace, kernel, wedge

__all__ = [
    "UnsupportedMode",
    "PfaffianForm",
    "SymplecticVerdict",
    "closed_two_forms",
    "pfaffian_cubic",
    "decide_symplectic",
    "is_symplectic_form",
    "pairing_prefilter",
    "CERTIFICATE",
]

CERTIFICATE = "pfaffian-cubic-zero"
MAX_WIDTH = 2


class UnsupportedMode(ValueError):
    """Non-existence of a symplectic form cannot be certified over a finite field."""


def closed_two_forms(alg: MinimalAlgebra) -> Subspace:
    """Z² = ker(d: Λ² -> Λ³)."""
    if alg.n < 2:
        return Subspace.zero(alg.n, 2, alg.field)
    return kernel(alg.d_map(2), alg.n, 2)


def _power(omega: ExteriorElement, k: int) -> ExteriorElement:
    out = omega
    for _ in range(k - 1):
        out = wedge(out, omega)
    return out


@dataclass(frozen=True)
class PfaffianForm:
    """c(t) with (Σ t_i β_i)^{n/2} = c(t) x_1⋯x_n for the echelon basis β of Z².

    ``terms`` maps sorted index tuples (a monomial in the t's) to coefficients.
    """

    basis: tuple
    degree: int
    terms: dict = dc_field(default_factory=dict)

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, t):
        total = 0
        for mono, c in self.terms.items():
            v = c
            for i in mono:
                v = v * t[i]
            total = total + v
        return total

    def coordinates(self, omega: ExteriorElement) -> list:
        """t with Σ t_i β_i = ω; ValueError if ω is not closed."""
        t = []
        for b in self.basis:
            pivot = b.terms()[0][0]
            t.append(omega.coeffs.get(pivot, 0))
        if self.form(t) != omega:
            raise ValueError("form is not closed")
        return t

    def form(self, t) -> ExteriorElement:
        n = self.basis[0].n
        out = ExteriorElement(n, 2)
        for ti, b in zip(t, self.basis):
            if ti:
                out = out + b.scale(ti)
        return out


def pfaffian_cubic(alg: MinimalAlgebra) -> PfaffianForm:
    """Expand the top power of a general closed 2-form exactly (n even)."""
    n, f = alg.n, alg.field
    if n % 2:
        raise ValueError("the Pfaffian form needs an even number of generators")
    k = n // 2
    basis = tuple(closed_two_forms(alg).basis())
    top = tuple(range(n))
    terms = {}
    for mono in combinations_with_replacement(range(len(basis)), k):
        prod = basis[mono[0]]
        for i in mono[1:]:
            prod = wedge(prod, basis[i])
        c = prod.coeffs.get(top)
        if not c:
            continue
        mult = factorial(k)
        for i in set(mono):
            mult //= factorial(mono.count(i))
        terms[mono] = c * f(mult)
    return PfaffianForm(basis, k, terms)


def is_symplectic_form(alg: MinimalAlgebra, omega: ExteriorElement) -> bool:
    """dω = 0 and ω^{n/2} ≠ 0, checked directly."""
    if alg.n % 2 or omega.degree != 2:
        return False
    return not alg.d(omega) and bool(_power(omega, alg.n // 2))


def pairing_prefilter(alg: MinimalAlgebra) -> bool:
    """Necessary condition: the monomials used by closed 2-forms admit a perfect matching.

    ω^{n/2} ≠ 0 forces ω to contain x_{i1}x_{i2}, …, x_{i(n-1)}x_{in} for some
    permutation of the indices.
    """
    edges = set()
    for row in closed_two_forms(alg).basis():
        edges.update(row.coeffs)

    def match(free):
        if not free:
            return True
        a = free[0]
        return any((a, b) in edges and match([x for x in free[1:] if x != b]) for b in free[1:])

    return alg.n % 2 == 0 and match(list(range(alg.n)))


def _search_order(m: int, width: int):
    """Coefficient tuples with max |t_i| = width, by support size, then lexicographically."""
    values = []
    for v in range(1, width + 1):
        values += [v, -v]
    for s in range(1, m + 1):
        for pos in combinations(range(m), s):
            for vals in product(values, repeat=s):
                if max(abs(v) for v in vals) != width:
                    continue
                t = [0] * m
                for p, v in zip(pos, vals):
                    t[p] = v
                yield t


@dataclass(frozen=True)
class SymplecticVerdict:
    symplectic: bool
    omega: ExteriorElement | None = None
    certificate: str | None = None
    cubic: PfaffianForm | None = None

    def to_json(self, field=None) -> dict:
        if self.symplectic:
            return {"symplectic": True, "omega": self.omega.to_json(field) if field else self.omega.to_json()}
        return {"symplectic": False, "certificate": self.certificate}


def decide_symplectic(alg: MinimalAlgebra, max_width: int = MAX_WIDTH) -> SymplecticVerdict:
    """A witness ω, or a certificate that the Pfaffian form vanishes identically.

    Over an infinite field a nonzero form of degree n/2 ≤ 3 has a zero-free
    point with entries in {-2..2}, so the search is complete for Q/R/C.
    Over F_p a search failure raises :class:`UnsupportedMode`.
    """
    f = alg.field
    cubic = pfaffian_cubic(alg)
    if cubic.is_zero():
        return SymplecticVerdict(False, None, CERTIFICATE, cubic)
    m = len(cubic.basis)
    for width in range(1, max_width + 1):
        for t in _search_order(m, width):
            if cubic([f(x) for x in t]):
                omega = cubic.form([f(x) for x in t])
                if not is_symplectic_form(alg, omega):
                    raise AssertionError("Pfaffian form disagrees with direct check")
                return SymplecticVerdict(True, omega, None, cubic)
    if alg.mode.is_prime:
        raise UnsupportedMode(f"no witness found over {alg.mode}; non-existence is not certified")
    raise AssertionError("nonzero Pfaffian form without a small witness")
