"""Minimal algebras generated in degree 1 and their nilpotent Lie duals.

A :class:`MinimalAlgebra` is the free graded-commutative algebra on
generators x_1..x_n of degree 1 with differentials ``dx_i`` in Λ². Indices
are 0-based internally and 1-based in every text or JSON rendering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from math import comb

from .field import FieldMode, Q
from .multilinear import (
    ExteriorElement,
    LinearMap,
    Subspace,
    identity,
    image,
    kernel,
    mat_inv,
    monomial_index,
    monomials,
    preimage,
    wedge,
)

__all__ = [
    "AlgebraError",
    "NotClosed",
    "NotNilpotent",
    "BadDimension",
    "MinimalAlgebra",
    "LieAlgebra",
    "FiltrationResult",
    "H2Classes",
    "validate",
    "from_lie",
    "to_lie",
    "filtration",
    "betti",
    "h2_classes",
    "load_json",
    "loads",
]

MAX_CLASSIFY_DIM = 6


class AlgebraError(ValueError):
    pass


class NotClosed(AlgebraError):
    def __init__(self, index, triple=None):
        self.index = index
        self.triple = triple
        msg = f"d(dx{index + 1}) != 0"
        if triple is not None:
            msg += "; Jacobi fails on X%d, X%d, X%d" % tuple(t + 1 for t in triple)
        super().__init__(msg)


class NotNilpotent(AlgebraError):
    pass


class BadDimension(AlgebraError):
    pass


def _as_bivector(n, value, field):
    if isinstance(value, ExteriorElement):
        if value.is_zero():
            return ExteriorElement(n, 2)
        if value.degree != 2 or value.n != n:
            raise AlgebraError("differentials must be quadratic in the generators")
        return ExteriorElement(n, 2, {k: field(c) for k, c in value.coeffs.items()})
    if not value:
        return ExteriorElement(n, 2)
    return ExteriorElement.from_terms(n, value, field)


class MinimalAlgebra:
    """(Λ(x_1..x_n), d) with |x_i| = 1.

    ``diffs[i]`` is dx_{i+1}; it may be an :class:`ExteriorElement` of degree
    2, a list of ``(coeff, (j, k))`` pairs (0-based), or empty/None for a
    closed generator.
    """

    def __init__(self, n: int, diffs=None, mode="Q"):
        self.mode = FieldMode.parse(mode)
        self.n = n
        diffs = list(diffs) if diffs is not None else [None] * n
        if len(diffs) != n:
            raise AlgebraError(f"{len(diffs)} differentials for {n} generators")
        self.diffs = tuple(_as_bivector(n, d, self.field) for d in diffs)

    @property
    def field(self) -> FieldMode:
        return self.mode.base

    @classmethod
    def from_strings(cls, rows, mode="Q"):
        """Build from 1-based shorthand such as ``["", "", "x1x2", "x1x3+2x2x4"]``."""
        n = len(rows)
        mode = FieldMode.parse(mode)
        return cls(n, [_parse_poly(r, n, mode.base) for r in rows], mode)

    def with_mode(self, mode) -> "MinimalAlgebra":
        mode = FieldMode.parse(mode)
        if mode.base != self.field:
            if mode.is_prime and not self.mode.is_prime:
                return MinimalAlgebra(self.n, [[(mode.base(c), k) for k, c in d.coeffs.items()] for d in self.diffs], mode)
            raise AlgebraError(f"cannot move an algebra over {self.mode} to {mode}")
        return MinimalAlgebra(self.n, self.diffs, mode)

    def __eq__(self, other):
        if not isinstance(other, MinimalAlgebra):
            return NotImplemented
        return self.n == other.n and self.field == other.field and self.diffs == other.diffs

    def __hash__(self):
        return hash((self.n, self.diffs))

    def __repr__(self):
        body = ", ".join(f"dx{i + 1}={d}" for i, d in enumerate(self.diffs) if d)
        return f"MinimalAlgebra(n={self.n}, {self.mode}: {body or 'abelian'})"

    def rows(self) -> list[str]:
        return [str(d) if d else "0" for d in self.diffs]

    # -------------------------------------------------------- differential

    def d(self, u: ExteriorElement) -> ExteriorElement:
        """Extend d to Λ as a degree +1 derivation."""
        out = ExteriorElement(self.n, u.degree + 1) if u.degree < self.n else None
        if out is None:
            return ExteriorElement(self.n, self.n)  # placeholder zero
        for key, c in u.coeffs.items():
            for s, i in enumerate(key):
                di = self.diffs[i]
                if not di:
                    continue
                left = ExteriorElement(self.n, s, {key[:s]: self.field.one})
                right = ExteriorElement(self.n, len(key) - s - 1, {key[s + 1 :]: self.field.one})
                term = wedge(wedge(left, di), right)
                out = out + term.scale(c if s % 2 == 0 else -c)
        return out

    def d_map(self, k: int) -> LinearMap:
        """Matrix of d: Λ^k -> Λ^{k+1} in monomial bases."""
        return self._d_maps[k]

    @cached_property
    def _d_maps(self):
        maps = {}
        for k in range(self.n + 1):
            codim = comb(self.n, k + 1)
            cols = []
            for m in monomials(self.n, k):
                if k == self.n:
                    cols.append([])
                    continue
                cols.append(self.d(ExteriorElement(self.n, k, {m: self.field.one})).to_vector(self.field))
            maps[k] = LinearMap(cols, codim, self.field)
        return maps

    # ------------------------------------------------------ basis changes

    def change_basis(self, g) -> "MinimalAlgebra":
        """Algebra in the generators y_j = sum_i g[j][i] x_i.

        ``g`` is invertible; its rows express new generators in the old ones.
        """
        f = self.field
        g = [[f(c) for c in row] for row in g]
        r = mat_inv(g, f)  # x_a = sum_c r[a][c] y_c
        idx = monomial_index(self.n, 2)
        pairs = monomials(self.n, 2)
        old_in_new = {}
        for a, b in pairs:
            vec = [f.zero] * len(pairs)
            for (c, d), pos in idx.items():
                v = r[a][c] * r[b][d] - r[a][d] * r[b][c]
                if v:
                    vec[pos] = v
            old_in_new[(a, b)] = vec
        new = []
        for row in g:
            acc = [f.zero] * len(pairs)
            for i, gi in enumerate(row):
                if not gi:
                    continue
                for key, c in self.diffs[i].coeffs.items():
                    w = gi * c
                    acc = [x + w * y for x, y in zip(acc, old_in_new[key])]
            new.append(ExteriorElement.from_vector(self.n, 2, acc))
        return MinimalAlgebra(self.n, new, self.mode)

    def restrict(self, basis) -> "MinimalAlgebra":
        """Subalgebra on the span of ``basis`` (rows in x-coordinates), which must be d-stable."""
        f = self.field
        basis = [[f(c) for c in row] for row in basis]
        k = len(basis)
        sub = Subspace(self.n, 1, basis, f)
        full = Subspace.full(self.n, 1, f)
        g = basis + sub.complement_in(full)
        moved = self.change_basis(g)
        diffs = []
        for i in range(k):
            terms = {}
            for (a, b), c in moved.diffs[i].coeffs.items():
                if a >= k or b >= k:
                    raise AlgebraError("subspace is not closed under d")
                terms[(a, b)] = c
            diffs.append(ExteriorElement(k, 2, terms) if k >= 2 else ExteriorElement(k, 0))
        if k < 2:
            diffs = [None] * k
        return MinimalAlgebra(k, diffs, self.mode)

    # --------------------------------------------------------- invariants

    def validate(self) -> "MinimalAlgebra":
        return validate(self)

    @cached_property
    def filtration(self) -> "FiltrationResult":
        return filtration(self)

    @cached_property
    def betti(self) -> tuple[int, ...]:
        return betti(self)

    def to_lie(self) -> "LieAlgebra":
        return to_lie(self)

    def to_json(self) -> dict:
        return {
            "field": str(self.mode),
            "dim": self.n,
            "diffs": [
                [{"i": a + 1, "j": b + 1, "c": self.field.format(c)} for (a, b), c in d.terms()]
                for d in self.diffs
            ],
        }


def _parse_poly(text, n, field):
    """Parse ``"x1x3 + 2*x2x4 - x5x6"`` (1-based) into a degree-2 element."""
    import re

    text = (text or "").replace(" ", "")
    if text in ("", "0"):
        return None
    terms = []
    for sign, coeff, mono in re.findall(r"([+-]?)([0-9/]*\*?)((?:x\d)+)", text):
        c = field(coeff.rstrip("*")) if coeff.rstrip("*") else field.one
        if sign == "-":
            c = -c
        idx = [int(t) - 1 for t in re.findall(r"x(\d)", mono)]
        terms.append((c, idx))
    return ExteriorElement.from_terms(n, terms, field)


@dataclass(frozen=True)
class LieAlgebra:
    """Structure constants: ``brackets[(j, k)] = {i: a^i_jk}`` with j < k (0-based)."""

    n: int
    brackets: dict
    mode: FieldMode = Q

    def bracket_vector(self, j, k):
        f = self.mode.base
        if j == k:
            return [f.zero] * self.n
        sign = 1
        if j > k:
            j, k, sign = k, j, -1
        out = [f.zero] * self.n
        for i, c in self.brackets.get((j, k), {}).items():
            out[i] = f(c) * sign
        return out

    def bracket(self, u, v):
        f = self.mode.base
        out = [f.zero] * self.n
        for j, uj in enumerate(u):
            if not uj:
                continue
            for k, vk in enumerate(v):
                if vk and j != k:
                    w = uj * vk
                    out = [o + w * b for o, b in zip(out, self.bracket_vector(j, k))]
        return out

    def jacobi_failures(self):
        f = self.mode.base
        e = [[f.one if i == j else f.zero for i in range(self.n)] for j in range(self.n)]
        bad = []
        for a in range(self.n):
            for b in range(a + 1, self.n):
                for c in range(b + 1, self.n):
                    s = [f.zero] * self.n
                    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                        t = self.bracket(e[x], self.bracket(e[y], e[z]))
                        s = [p + q for p, q in zip(s, t)]
                    if any(s):
                        bad.append((a, b, c))
        return bad


def from_lie(g: LieAlgebra) -> MinimalAlgebra:
    """Chevalley-Eilenberg differential: dx_i = -sum_{j<k} a^i_jk x_j x_k."""
    f = g.mode.base
    bad = g.jacobi_failures()
    terms = [[] for _ in range(g.n)]
    for (j, k), vec in g.brackets.items():
        if j == k:
            continue
        sign = -1 if j < k else 1
        for i, c in vec.items():
            terms[i].append((f(c) * sign, (j, k)))
    alg = MinimalAlgebra(g.n, [t or None for t in terms], g.mode)
    if bad:
        i = next(i for i in range(g.n) if alg.d(alg.diffs[i]))
        raise NotClosed(i, bad[0])
    return validate(alg)


def to_lie(alg: MinimalAlgebra) -> LieAlgebra:
    brackets: dict = {}
    for i, d in enumerate(alg.diffs):
        for (j, k), c in d.coeffs.items():
            brackets.setdefault((j, k), {})[i] = -c
    return LieAlgebra(alg.n, brackets, alg.mode)


@dataclass(frozen=True)
class FiltrationResult:
    """W_1 ⊂ ... ⊂ W_m = V with signature f_k = dim W_k - dim W_{k-1}.

    ``basis`` lists generators adapted to the filtration (rows in the
    input coordinates), grouped by layer.
    """

    subspaces: tuple
    signature: tuple
    basis: tuple

    @property
    def layers(self):
        out, start = [], 0
        for f in self.signature:
            out.append(list(range(start, start + f)))
            start += f
        return out


def _wedge_square(space: Subspace, n, field) -> Subspace:
    basis = space.basis()
    prods = [wedge(basis[a], basis[b]) for a in range(len(basis)) for b in range(a + 1, len(basis))]
    return Subspace(n, 2, [p.to_vector(field) for p in prods], field)


def filtration(alg: MinimalAlgebra) -> FiltrationResult:
    """W_1 = ker d ∩ V, W_k = d^{-1}(Λ² W_{k-1}), iterated to a fixed point."""
    n, f = alg.n, alg.field
    if n == 0:
        return FiltrationResult((), (), ())
    d1 = alg.d_map(1)
    chain = [kernel(d1, n, 1)]
    if n and chain[0].dim == 0:
        raise NotNilpotent("no closed generators")
    while chain[-1].dim < n:
        nxt = preimage(d1, _wedge_square(chain[-1], n, f), n, 1)
        if nxt.dim == chain[-1].dim:
            raise NotNilpotent(f"filtration stabilizes at dimension {nxt.dim} < {n}")
        chain.append(nxt)
    sig = []
    basis = []
    prev = Subspace.zero(n, 1, f)
    for w in chain:
        sig.append(w.dim - prev.dim)
        basis.extend(prev.complement_in(w))
        prev = w
    return FiltrationResult(tuple(chain), tuple(sig), tuple(tuple(r) for r in basis))


def validate(alg: MinimalAlgebra) -> MinimalAlgebra:
    """Check d² = 0 and nilpotency; returns the algebra."""
    for i, di in enumerate(alg.diffs):
        if alg.n >= 3 and alg.d(di):
            raise NotClosed(i)
    if alg.n:
        alg.filtration  # raises NotNilpotent
    return alg


def betti(alg: MinimalAlgebra) -> tuple[int, ...]:
    """b_k = dim ker(d on Λ^k) - rank(d on Λ^{k-1}), by full rank computation."""
    ranks = [alg.d_map(k).rank for k in range(alg.n + 1)]
    out = []
    for k in range(alg.n + 1):
        dim = comb(alg.n, k)
        out.append(dim - ranks[k] - (ranks[k - 1] if k else 0))
    return tuple(out)


@dataclass(frozen=True)
class H2Classes:
    """Degree-2 cohomology of the subalgebra on W_k, in its own coordinates.

    ``basis`` gives the subalgebra's generators as rows in the input
    coordinates; ``closed``/``exact`` live in Λ² of the subalgebra;
    ``representatives`` complement ``exact`` inside ``closed``.
    """

    level: int
    basis: tuple
    sub: MinimalAlgebra
    closed: Subspace
    exact: Subspace
    representatives: tuple

    @property
    def dim(self) -> int:
        return self.closed.dim - self.exact.dim


def h2_classes(alg: MinimalAlgebra, level: int | None = None) -> H2Classes:
    filt = alg.filtration
    level = len(filt.signature) if level is None else level
    k = sum(filt.signature[:level])
    basis = filt.basis[:k]
    sub = alg.restrict(basis) if k < alg.n else alg
    if k == alg.n:
        basis = tuple(tuple(r) for r in identity(alg.n, alg.field))
    closed = kernel(sub.d_map(2), k, 2) if k >= 2 else Subspace.zero(k, 2, alg.field)
    exact = image(sub.d_map(1), k, 2) if k >= 2 else Subspace.zero(k, 2, alg.field)
    reps = tuple(ExteriorElement.from_vector(k, 2, r) for r in exact.complement_in(closed))
    return H2Classes(level, tuple(basis), sub, closed, exact, reps)


# ------------------------------------------------------------------ JSON


def load_json(doc, mode=None) -> MinimalAlgebra:
    """Parse the algebra JSON schema (differential or Lie-bracket presentation).

    A differential is a list of ``{"i", "j", "c"}`` terms (1-based) or a
    shorthand string such as ``"x1x3+2*x2x4"``.
    """
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    if not isinstance(doc, dict):
        raise AlgebraError("expected a JSON object")
    mode = FieldMode.parse(mode or doc.get("field", "Q"))
    f = mode.base
    if "brackets" in doc:
        n = int(doc["dim"]) if "dim" in doc else 1 + max(
            max(b["i"], b["j"], b["k"]) for b in doc["brackets"]) - 1
        brackets: dict = {}
        for b in doc["brackets"]:
            j, k, i = int(b["j"]) - 1, int(b["k"]) - 1, int(b["i"]) - 1
            c = f(str(b.get("c", "1")))
            if j > k:
                j, k, c = k, j, -c
            brackets.setdefault((j, k), {})
            brackets[(j, k)][i] = brackets[(j, k)].get(i, f.zero) + c
        return from_lie(LieAlgebra(n, brackets, mode))
    diffs = doc["diffs"]
    n = int(doc.get("dim", len(diffs)))
    if len(diffs) != n:
        raise AlgebraError(f"dim {n} but {len(diffs)} differentials")
    rows = []
    for d in diffs:
        if isinstance(d, str):
            rows.append(_parse_poly(d, n, f))
            continue
        rows.append([(f(str(t.get("c", "1"))), (int(t["i"]) - 1, int(t["j"]) - 1)) for t in d] or None)
    return MinimalAlgebra(n, rows, mode)


def loads(text, mode=None) -> MinimalAlgebra:
    return load_json(json.loads(text), mode)
