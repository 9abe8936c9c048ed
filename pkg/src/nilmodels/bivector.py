"""Normal forms of 2-vectors and the quadratic invariant of a pencil of them."""

from __future__ import annotations

from dataclasses import dataclass

from .field import FieldMode, Q, Residue, SquareClass, is_square, square_class
from .multilinear import ExteriorElement, Subspace, mat_rank, wedge

__all__ = [
    "DependentPencil",
    "BivectorNormalForm",
    "PencilInvariant",
    "normal_form",
    "support",
    "contraction",
    "pencil_invariant",
    "TWO_POINTS",
    "TANGENT",
    "CONTAINED",
    "EMPTY",
]

TWO_POINTS = "TwoPoints"
TANGENT = "Tangent"
CONTAINED = "Contained"
EMPTY = "Empty"


class DependentPencil(ValueError):
    pass


def _field_of(phi: ExteriorElement) -> FieldMode:
    for c in phi.coeffs.values():
        if isinstance(c, Residue):
            return FieldMode("Fp", c.p)
    return Q


def contraction(phi: ExteriorElement, i: int, field: FieldMode = Q) -> list:
    """ι_i φ as a degree-1 vector: the coefficients of x_b in φ paired against e_i."""
    v = [field.zero] * phi.n
    for (a, b), c in phi.coeffs.items():
        if a == i:
            v[b] = v[b] + c
        elif b == i:
            v[a] = v[a] - c
    return v


def _outer(p, q, n):
    """p ∧ q for degree-1 vectors given as coordinate lists."""
    terms = {}
    for a in range(n):
        for b in range(a + 1, n):
            c = p[a] * q[b] - p[b] * q[a]
            if c:
                terms[(a, b)] = c
    return ExteriorElement(n, 2, terms)


@dataclass(frozen=True)
class BivectorNormalForm:
    """φ = Σ basis[2i] ∧ basis[2i+1] over the first ``rank`` vectors.

    ``basis`` continues past the symplectic part with a complement of the
    support inside the ambient subspace, so it is a full basis of W.
    """

    rank: int
    basis: tuple
    support: Subspace

    @property
    def pairs(self):
        return [(self.basis[2 * i], self.basis[2 * i + 1]) for i in range(self.rank // 2)]

    def reconstruct(self, n: int, field: FieldMode = Q) -> ExteriorElement:
        out = ExteriorElement(n, 2)
        for p, q in self.pairs:
            out = out + _outer(p, q, n)
        return out


def normal_form(phi: ExteriorElement, w: Subspace | None = None, field: FieldMode | None = None) -> BivectorNormalForm:
    """Skew Gram reduction of φ, deterministic under the monomial order.

    Repeatedly takes the first monomial x_i x_j (coefficient c) still present
    and splits off p ∧ q with p = -ι_j φ / c and q = ι_i φ, which lowers the
    rank by exactly two.
    """
    n = phi.n
    field = field or _field_of(phi)
    if w is None:
        w = Subspace.full(n, 1, field)
    rest = phi
    pairs = []
    while rest:
        (i, j), c = rest.terms()[0]
        p = [-x / c for x in contraction(rest, j, field)]
        q = contraction(rest, i, field)
        pairs.append((p, q))
        rest = rest - _outer(p, q, n)
    vecs = [v for pq in pairs for v in pq]
    sup = Subspace(n, 1, vecs, field)
    if not w.contains_subspace(sup):
        raise ValueError("bivector does not lie in Λ²W")
    extra = []
    cur = sup
    for r in w.rows:
        if not cur.contains(r):
            extra.append(r)
            cur = cur + Subspace(n, 1, [r], field)
    return BivectorNormalForm(2 * len(pairs), tuple(tuple(v) for v in vecs + extra), sup)


def support(phi: ExteriorElement, w: Subspace | None = None, field: FieldMode | None = None) -> Subspace:
    """Image of the contraction map W* -> W, i.e. span of all ι_i φ."""
    field = field or _field_of(phi)
    return Subspace(phi.n, 1, [contraction(phi, i, field) for i in range(phi.n)], field)


def rank(phi: ExteriorElement, field: FieldMode | None = None) -> int:
    return support(phi, field=field).dim


@dataclass(frozen=True)
class PencilInvariant:
    """q(s,t) = (sφ₅ + tφ₆)² / vol = αs² + βst + γt² and what it says about the pencil."""

    alpha: object
    beta: object
    gamma: object
    disc: object
    verdict: str
    parameter: SquareClass | None = None

    def __str__(self):
        if self.verdict == EMPTY:
            return f"{EMPTY}({self.parameter})"
        return self.verdict


def _volume(w: Subspace | None, n: int, field: FieldMode) -> ExteriorElement:
    if w is None:
        if n != 4:
            raise ValueError("pass the 4-dimensional subspace the pencil lives on")
        return ExteriorElement(4, 4, {(0, 1, 2, 3): field.one})
    if w.dim != 4:
        raise ValueError("pencil must live on a 4-dimensional space")
    b = w.basis()
    return wedge(wedge(b[0], b[1]), wedge(b[2], b[3]))


def _ratio(top: ExteriorElement, vol: ExteriorElement, field: FieldMode):
    if not top:
        return field.zero
    key, c = vol.terms()[0]
    return top.coeffs.get(key, field.zero) / c


def pencil_invariant(phi5: ExteriorElement, phi6: ExteriorElement, w: Subspace | None = None,
                     mode="Q") -> PencilInvariant:
    """Classify the line through φ₅, φ₆ against the rank-≤2 quadric in P(Λ²F₁).

    Contained when every member has rank ≤ 2, Tangent for a double point,
    TwoPoints for two rational points, Empty with the discriminant's square
    class otherwise.
    """
    mode = FieldMode.parse(mode)
    field = mode.base
    if mat_rank([phi5.to_vector(field), phi6.to_vector(field)]) < 2:
        raise DependentPencil("φ₅ and φ₆ are linearly dependent")
    vol = _volume(w, phi5.n, field)
    alpha = _ratio(wedge(phi5, phi5), vol, field)
    beta = 2 * _ratio(wedge(phi5, phi6), vol, field)
    gamma = _ratio(wedge(phi6, phi6), vol, field)
    disc = beta * beta - 4 * alpha * gamma
    if not (alpha or beta or gamma):
        return PencilInvariant(alpha, beta, gamma, disc, CONTAINED)
    if not disc:
        return PencilInvariant(alpha, beta, gamma, disc, TANGENT)
    if is_square(disc, mode):
        return PencilInvariant(alpha, beta, gamma, disc, TWO_POINTS)
    return PencilInvariant(alpha, beta, gamma, disc, EMPTY, square_class(disc, mode))
