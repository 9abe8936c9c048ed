"""Canonical forms of minimal algebras of dimension at most 6.

The classifier works one filtration layer at a time. It canonicalizes the
subalgebra on W_{m-1} recursively, then normalizes the top differentials
using explicit automorphisms of that lower model. Every move is an exact
substitution matrix, so the result carries a witness ``matrix`` with
``A.change_basis(matrix) == target``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .algebra import MAX_CLASSIFY_DIM, BadDimension, MinimalAlgebra, filtration, validate
from .bivector import CONTAINED, EMPTY, TANGENT, TWO_POINTS, contraction, normal_form, pencil_invariant, support
from .field import C, FieldMode, Q, R, SquareClass, exact_sqrt, least_nonresidue, square_class
from .multilinear import (
    ExteriorElement,
    LinearMap,
    NoSolution,
    Subspace,
    identity,
    kernel,
    mat_inv,
    mat_mul,
    solve,
    wedge,
)

__all__ = [
    "ClassifyError",
    "UnreachableSignature",
    "UnknownLabel",
    "ParameterNotAllowed",
    "WitnessMismatch",
    "ClassLabel",
    "Classification",
    "REGISTRY",
    "FAMILIES",
    "canonical_model",
    "classify",
    "enumerate_classes",
    "family_member",
    "homotopy_equivalent",
    "parse_label",
]


class ClassifyError(ValueError):
    pass


class UnreachableSignature(ClassifyError):
    pass


class UnknownLabel(ClassifyError):
    pass


class ParameterNotAllowed(ClassifyError):
    pass


class WitnessMismatch(AssertionError):
    """The recorded basis change does not reproduce the canonical model (a bug)."""


# ----------------------------------------------------------------- registry

# name -> (signature, {generator: differential}); "a" marks the family parameter.
_TABLE = {
    0: [("A0", (), {})],
    1: [("A1", (1,), {})],
    2: [("A2", (2,), {})],
    3: [("A3", (3,), {}), ("L3", (2, 1), {3: "x1x2"})],
    4: [
        ("A4", (4,), {}),
        ("L3+A1", (3, 1), {4: "x1x2"}),
        ("L4", (2, 1, 1), {3: "x1x2", 4: "x1x3"}),
    ],
    5: [
        ("A5", (5,), {}),
        ("L3+A2", (4, 1), {5: "x1x2"}),
        ("L5_1", (4, 1), {5: "x1x2+x3x4"}),
        ("L5_2", (3, 2), {4: "x1x2", 5: "x1x3"}),
        ("L4+A1", (3, 1, 1), {4: "x1x2", 5: "x1x4"}),
        ("L5_3", (3, 1, 1), {4: "x1x2", 5: "x1x4+x2x3"}),
        ("L5_5", (2, 1, 2), {3: "x1x2", 4: "x1x3", 5: "x2x3"}),
        ("L5_4", (2, 1, 1, 1), {3: "x1x2", 4: "x1x3", 5: "x1x4"}),
        ("L5_6", (2, 1, 1, 1), {3: "x1x2", 4: "x1x3", 5: "x1x4+x2x3"}),
    ],
    6: [
        ("A6", (6,), {}),
        ("L3+A3", (5, 1), {6: "x1x2"}),
        ("L5_1+A1", (5, 1), {6: "x1x2+x3x4"}),
        ("L5_2+A1", (4, 2), {5: "x1x2", 6: "x1x3"}),
        ("L3+L3", (4, 2), {5: "x1x2", 6: "x3x4"}),
        ("L6_1", (4, 2), {5: "x1x2", 6: "x1x3+x2x4"}),
        ("L6_2", (4, 2), {5: "x1x3+a*x2x4", 6: "x1x4+x2x3"}),
        ("L4+A2", (4, 1, 1), {5: "x1x2", 6: "x1x5"}),
        ("L6_3", (4, 1, 1), {5: "x1x2", 6: "x1x5+x3x4"}),
        ("L5_3+A1", (4, 1, 1), {5: "x1x2", 6: "x1x5+x2x3"}),
        ("L6_4", (3, 3), {4: "x1x2", 5: "x1x3", 6: "x2x3"}),
        ("L6_5", (3, 2, 1), {4: "x1x2", 5: "x1x3", 6: "x1x4"}),
        ("L6_6", (3, 2, 1), {4: "x1x2", 5: "x1x3", 6: "x2x4"}),
        ("L6_7", (3, 2, 1), {4: "x1x2", 5: "x1x3", 6: "x1x5+x2x4"}),
        ("L6_8", (3, 2, 1), {4: "x1x2", 5: "x1x3", 6: "x2x4+a*x3x5"}),
        ("L6_9", (3, 2, 1), {4: "x1x2", 5: "x1x3", 6: "x1x4+x2x3"}),
        ("L5_5+A1", (3, 1, 2), {4: "x1x2", 5: "x1x4", 6: "x2x4"}),
        ("L6_10", (3, 1, 2), {4: "x1x2", 5: "x1x4", 6: "x2x3+x2x4"}),
        ("L6_11", (3, 1, 2), {4: "x1x2", 5: "x1x4", 6: "x1x3+x2x4"}),
        ("L6_12", (3, 1, 2), {4: "x1x2", 5: "x1x4+x2x3", 6: "x1x3+a*x2x4"}),
        ("L5_4+A1", (3, 1, 1, 1), {4: "x1x2", 5: "x1x4", 6: "x1x5"}),
        ("L6_13", (3, 1, 1, 1), {4: "x1x2", 5: "x1x4", 6: "x1x5+x2x3"}),
        ("L5_6+A1", (3, 1, 1, 1), {4: "x1x2", 5: "x1x4", 6: "x1x5+x2x4"}),
        ("L6_14", (3, 1, 1, 1), {4: "x1x2", 5: "x1x4", 6: "x1x5+x2x3+x2x4"}),
        ("L6_15", (3, 1, 1, 1), {4: "x1x2", 5: "x1x4+x2x3", 6: "x1x5-x3x4"}),
        ("L6_16", (2, 1, 2, 1), {3: "x1x2", 4: "x1x3", 5: "x2x3", 6: "x1x4"}),
        ("L6_17", (2, 1, 2, 1), {3: "x1x2", 4: "x1x3", 5: "x2x3", 6: "x1x4+a*x2x5"}),
        ("L6_18", (2, 1, 1, 1, 1), {3: "x1x2", 4: "x1x3", 5: "x1x4", 6: "x1x5"}),
        ("L6_19", (2, 1, 1, 1, 1), {3: "x1x2", 4: "x1x3", 5: "x1x4", 6: "x1x5+x2x3"}),
        ("L6_20", (2, 1, 1, 1, 1), {3: "x1x2", 4: "x1x3", 5: "x1x4", 6: "x2x5-x3x4"}),
        ("L6_21", (2, 1, 1, 1, 1), {3: "x1x2", 4: "x1x3", 5: "x1x4+x2x3", 6: "x1x5+x2x4"}),
        ("L6_22", (2, 1, 1, 1, 1), {3: "x1x2", 4: "x1x3", 5: "x1x4+x2x3", 6: "x2x5-x3x4"}),
    ],
}

REGISTRY = {name: (dim, sig, rows) for dim, entries in _TABLE.items() for name, sig, rows in entries}

# families whose parameter may not be the trivial class, and what they become when it is
FAMILIES = {"L6_2": "L3+L3", "L6_8": None, "L6_12": "L6_10", "L6_17": None}
_NONTRIVIAL_ONLY = {"L6_2", "L6_12"}

_TERM = re.compile(r"([+-]?)(a\*)?((?:x\d)+)")


def _instantiate(name: str, a, field: FieldMode) -> MinimalAlgebra:
    dim, _, rows = REGISTRY[name]
    diffs = []
    for i in range(1, dim + 1):
        text = rows.get(i)
        if not text:
            diffs.append(None)
            continue
        terms = []
        for sign, par, mono in _TERM.findall(text):
            c = field.one if not par else field(a)
            if sign == "-":
                c = -c
            terms.append((c, [int(t) - 1 for t in re.findall(r"x(\d)", mono)]))
        diffs.append(ExteriorElement.from_terms(dim, terms, field))
    return MinimalAlgebra(dim, diffs, field)


# ------------------------------------------------------------------ labels


@dataclass(frozen=True)
class ClassLabel:
    """Registry name plus, for the four families, a square-class parameter.

    ``parameter`` is None for rigid classes and for symbolic family labels
    over Q (``symbolic=True``).
    """

    name: str
    parameter: SquareClass | None = None
    signature: tuple = ()
    symbolic: bool = False

    def __str__(self):
        if self.symbolic:
            return f"{self.name}[a]"
        if self.parameter is None:
            return self.name
        return f"{self.name}[a={self.parameter}]"

    @property
    def dim(self) -> int:
        return REGISTRY[self.name][0]


def _label(name, parameter=None, symbolic=False) -> ClassLabel:
    return ClassLabel(name, parameter, REGISTRY[name][1], symbolic)


_LABEL_RE = re.compile(r"^\s*([A-Za-z0-9_+]+)\s*(?:\[\s*a\s*(?:=\s*([^\]]+))?\])?\s*$")


def parse_label(text: str, mode="Q") -> ClassLabel:
    """Parse ``"L6_8[a=-1]"``, ``"L3+A3"`` or ``"L6_2[a]"``."""
    mode = FieldMode.parse(mode)
    m = _LABEL_RE.match(text)
    if not m or m.group(1) not in REGISTRY:
        raise UnknownLabel(f"unknown class label {text!r}")
    name, par = m.group(1), m.group(2)
    if "[" in text and par is None:
        return _label(name, None, symbolic=True)
    if par is None:
        return _label(name)
    return _label(name, square_class(mode.parse_scalar(par), mode))


def _class_reps(mode: FieldMode):
    if mode.kind == "C":
        return [Q.one]
    if mode.kind == "R":
        return [Q.one, -Q.one]
    if mode.is_prime:
        return [mode.one, mode(least_nonresidue(mode.p))]
    return None


def family_member(name: str, a, mode="Q") -> MinimalAlgebra:
    """The registry template for ``name`` with the raw value ``a`` substituted (0 and squares allowed)."""
    mode = FieldMode.parse(mode)
    if name not in FAMILIES:
        raise ParameterNotAllowed(f"{name} is not a one-parameter family")
    if isinstance(a, str):
        a = mode.parse_scalar(a)
    return _instantiate(name, mode.base(a), mode.base).with_mode(mode)


def canonical_model(label, mode="Q") -> MinimalAlgebra:
    """The registry differentials, with the parameter's canonical representative substituted."""
    mode = FieldMode.parse(mode)
    if isinstance(label, str):
        label = parse_label(label, mode)
    if label.name not in REGISTRY:
        raise UnknownLabel(label.name)
    if label.name not in FAMILIES:
        if label.parameter is not None:
            raise ParameterNotAllowed(f"{label.name} takes no parameter")
        return _instantiate(label.name, None, mode.base).with_mode(mode)
    if label.parameter is None:
        raise ParameterNotAllowed(f"{label.name} needs a parameter")
    cls = square_class(label.parameter.representative, mode)
    if label.name in _NONTRIVIAL_ONLY and cls.trivial:
        raise ParameterNotAllowed(f"{label.name} needs a non-square parameter, got {cls} over {mode}")
    return _instantiate(label.name, cls.representative, mode.base).with_mode(mode)


def enumerate_classes(mode="Q", dim: int = 6) -> list[ClassLabel]:
    """Every isomorphism class in dimension ``dim`` over ``mode``.

    Over Q the square classes are infinite, so each family appears once with
    a symbolic parameter.
    """
    mode = FieldMode.parse(mode)
    if dim not in _TABLE:
        raise BadDimension(f"no classification in dimension {dim}")
    reps = _class_reps(mode)
    out = []
    for name, _, _ in _TABLE[dim]:
        if name not in FAMILIES:
            out.append(_label(name))
        elif reps is None:
            out.append(_label(name, None, symbolic=True))
        else:
            for r in reps:
                cls = square_class(r, mode)
                if name in _NONTRIVIAL_ONLY and cls.trivial:
                    continue
                out.append(_label(name, cls))
    return out


# ------------------------------------------------------------ the machine


class _Frame:
    """Current algebra plus the accumulated basis change (1-based helpers)."""

    def __init__(self, alg: MinimalAlgebra):
        self.alg = alg
        self.f = alg.field
        self.n = alg.n
        self.g = identity(alg.n, self.f)
        self.k = alg.n

    def move(self, q):
        q = [[self.f(c) for c in row] for row in q]
        self.alg = self.alg.change_basis(q)
        self.g = mat_mul(q, self.g)

    def sub(self, mapping):
        """Replace generators: ``{i: {j: c}}`` sets new x_i = sum c x_j (1-based)."""
        q = identity(self.n, self.f)
        for i, row in mapping.items():
            q[i - 1] = [self.f.zero] * self.n
            for j, c in row.items():
                q[i - 1][j - 1] = q[i - 1][j - 1] + self.f(c)
        self.move(q)

    def auto(self, mapping):
        """A substitution that must fix the lower model's differentials."""
        before = self.alg.diffs[: self.k]
        self.sub(mapping)
        if self.alg.diffs[: self.k] != before:
            raise WitnessMismatch(f"move {mapping} is not an automorphism of the lower model")

    def scale(self, i, c):
        self.auto({i: {i: c}})

    def set_lower(self, vectors):
        rows = []
        for v in vectors:
            v = list(v) + [self.f.zero] * (self.n - len(v))
            rows.append(v)
        self.move(rows + identity(self.n, self.f)[len(rows):])

    def tops(self, m):
        """Recombine the top generators with the matrix ``m``."""
        q = identity(self.n, self.f)
        t = self.n - self.k
        for a in range(t):
            q[self.k + a] = [self.f.zero] * self.k + [self.f(c) for c in m[a]]
        self.move(q)

    def normalize(self, i, a, b):
        c = self.c(i, a, b)
        if not c:
            raise WitnessMismatch(f"expected a nonzero x{a}x{b} term in dx{i}")
        self.sub({i: {i: 1 / c}})

    def phi(self, i) -> ExteriorElement:
        return self.alg.diffs[i - 1]

    def c(self, i, a, b):
        if a > b:
            return -self.c(i, b, a)
        return self.phi(i).coeffs.get((a - 1, b - 1), self.f.zero)

    def reduce(self):
        """Subtract exact parts so every top differential is the echelon residual."""
        k = self.k
        lower = [d.to_vector(self.f) for d in self.alg.diffs[:k]]
        exact = Subspace(self.n, 2, lower, self.f)
        dmap = LinearMap(lower, len(lower[0]) if lower else 0, self.f)
        mapping = {}
        for i in range(k + 1, self.n + 1):
            v = self.phi(i).to_vector(self.f)
            r = exact.residual(v)
            diff = [x - y for x, y in zip(v, r)]
            if not any(diff):
                continue
            sol = solve(dmap, diff)
            if sol is NoSolution:
                raise WitnessMismatch("exact part not in the image of d")
            row = {i: 1}
            for j, s in enumerate(sol):
                if s:
                    row[j + 1] = -s
            mapping[i] = row
        if mapping:
            self.sub(mapping)


def _det_one_partner(u, f):
    """w with det[u; w] = 1."""
    if u[0]:
        return [f.zero, 1 / u[0]]
    return [-1 / u[1], f.zero]


def _congruence_diag(m, f):
    """B with B^T m B diagonal; its first entry is nonzero unless m = 0."""
    one, zero = f.one, f.zero
    a, b, c = m[0][0], m[0][1], m[1][1]
    if a:
        B = [[one, -b / a], [zero, one]]
    elif c:
        B = [[zero, one], [one, -b / c]]
    elif b:
        B = [[one, -one / 2], [one, one / 2]]
    else:
        B = [[one, zero], [zero, one]]
    d = mat_mul(mat_mul([list(r) for r in zip(*B)], m), B)
    if d[0][1] or d[1][0]:
        raise WitnessMismatch("congruence diagonalization failed")
    return B, (d[0][0], d[1][1])


def _factor(psi: ExteriorElement, y, f):
    """u with psi = y ∧ u, for a decomposable psi whose support contains y."""
    i = next(i for i, c in enumerate(y) if c)
    return [x / y[i] for x in contraction(psi, i, f)]


def _extend(vecs, n, f, limit):
    """Append standard vectors among the first ``limit`` until ``vecs`` spans them."""
    out = [list(v) for v in vecs]
    cur = Subspace(n, 1, out, f)
    for e in identity(limit, f):
        e = e + [f.zero] * (n - limit)
        if not cur.contains(e):
            out.append(e)
            cur = cur + Subspace(n, 1, [e], f)
    return out


def _h_abelian_one(fr: _Frame):
    k = fr.k
    w = Subspace(fr.n, 1, [e + [fr.f.zero] * (fr.n - k) for e in identity(k, fr.f)], fr.f)
    nf = normal_form(fr.phi(k + 1), w, fr.f)
    fr.set_lower([v[:k] for v in nf.basis])
    n = fr.n
    if nf.rank == 2:
        return "L3" if n == 3 else f"L3+A{n - 3}"
    return "L5_1" if n == 5 else "L5_1+A1"


def _line_pair(fr: _Frame, psi_a, psi_b):
    """Set x1 = common line, psi_a = x1x2, psi_b = x1x3."""
    f, n = fr.f, fr.n
    line = support(psi_a, field=f).intersect(support(psi_b, field=f))
    if line.dim != 1:
        raise WitnessMismatch("supports do not meet in a line")
    y1 = line.rows[0]
    u, v = _factor(psi_a, y1, f), _factor(psi_b, y1, f)
    fr.set_lower([r[: fr.k] for r in _extend([y1, u, v], n, f, fr.k)])


def _h_three_two(fr: _Frame):
    _line_pair(fr, fr.phi(4), fr.phi(5))
    return "L5_2"


def _skew(phi, k, f):
    m = [[f.zero] * k for _ in range(k)]
    for (a, b), c in phi.coeffs.items():
        m[a][b], m[b][a] = c, -c
    return m


def _h_pencil(fr: _Frame):
    f, n = fr.f, fr.n
    w = Subspace(n, 1, [e + [f.zero] * 2 for e in identity(4, f)], f)
    inv = pencil_invariant(fr.phi(5), fr.phi(6), w, mode=f)
    if inv.verdict == CONTAINED:
        _line_pair(fr, fr.phi(5), fr.phi(6))
        return "L5_2+A1", None
    al, be, ga = inv.alpha, inv.beta, inv.gamma
    if inv.verdict == TWO_POINTS:
        s = exact_sqrt(inv.disc, f)
        if al:
            roots = [[-be + s, 2 * al], [-be - s, 2 * al]]
        else:
            roots = [[f.one, f.zero], [-ga, be]]
        fr.tops(roots)
        p1, q1 = normal_form(fr.phi(5), w, f).pairs[0]
        p2, q2 = normal_form(fr.phi(6), w, f).pairs[0]
        fr.set_lower([v[:4] for v in (p1, q1, p2, q2)])
        return "L3+L3", None
    if inv.verdict == TANGENT:
        root = [-be, 2 * al] if al else [f.one, f.zero]
        other = [f.zero, f.one] if root[0] else [f.one, f.zero]
        fr.tops([root, other])
        fr.set_lower([v[:4] for v in normal_form(fr.phi(5), w, f).basis])
        c = fr.c
        x3 = [f.zero, c(6, 1, 2), c(6, 1, 3), c(6, 1, 4)]
        x4 = [f.zero, f.zero, c(6, 2, 3), c(6, 2, 4)]
        fr.set_lower([[f.one, f.zero, f.zero, f.zero], [f.zero, f.one, f.zero, f.zero], x3, x4])
        return "L6_1", None
    # no rank-2 member: make the pencil orthogonal, then read T = φ5♯ ∘ (φ6♯)^-1
    fr.tops([[f.one, -be / (2 * ga)], [f.zero, f.one]])
    m5, m6 = _skew(fr.phi(5), 4, f), _skew(fr.phi(6), 4, f)
    t = mat_mul(m5, mat_inv(m6, f))
    t2 = mat_mul(t, t)
    a = t2[0][0]
    if t2 != [[a if i == j else f.zero for j in range(4)] for i in range(4)]:
        raise WitnessMismatch("T^2 is not scalar on an orthogonal pencil")
    apply = lambda v: [sum((t[i][j] * v[j] for j in range(4)), f.zero) for i in range(4)]
    y1 = [f.one, f.zero, f.zero, f.zero]
    y2 = [x / a for x in apply(y1)]
    # y4 ↦ y1∧y4 + y2∧T(y4) is linear; solve it against φ6
    cols = []
    for e in identity(4, f):
        img = _wedge_vec(y1, e, f) + _wedge_vec(y2, apply(e), f)
        cols.append(img.to_vector(f))
    phi6 = ExteriorElement(4, 2, fr.phi(6).coeffs)
    y4 = solve(LinearMap(cols, 6, f), phi6)
    if y4 is NoSolution:
        raise WitnessMismatch("no Darboux partner for the orthogonal pencil")
    fr.set_lower([y1, y2, apply(y4), y4])
    return "L6_2", a


def _wedge_vec(u, v, f):
    k = len(u)
    a = ExteriorElement(k, 1, {(i,): c for i, c in enumerate(u) if c})
    b = ExteriorElement(k, 1, {(i,): c for i, c in enumerate(v) if c})
    return wedge(a, b)


def _h_three_three(fr: _Frame):
    c = fr.c
    m = [[c(i, 1, 2), c(i, 1, 3), c(i, 2, 3)] for i in (4, 5, 6)]
    fr.tops(mat_inv(m, fr.f))
    return "L6_4"


def _h_l3_one(fr: _Frame):
    fr.reduce()
    u = [fr.c(4, 1, 3), fr.c(4, 2, 3)]
    w = _det_one_partner(u, fr.f)
    fr.auto({1: {1: u[0], 2: u[1]}, 2: {1: w[0], 2: w[1]}})
    fr.reduce()
    return "L4"


def _h_l3_two(fr: _Frame):
    fr.reduce()
    m = [[fr.c(i, 1, 3), fr.c(i, 2, 3)] for i in (4, 5)]
    fr.tops(mat_inv(m, fr.f))
    return "L5_5"


def _h_l4_one(fr: _Frame):
    fr.reduce()
    fr.normalize(5, 1, 4)
    b = fr.c(5, 2, 3)
    if not b:
        return "L5_4"
    fr.auto({2: {2: b}, 3: {3: b}, 4: {4: b}})
    fr.normalize(5, 1, 4)
    return "L5_6"


def _h_l3a1_one(fr: _Frame):
    fr.reduce()
    u = [fr.c(5, 1, 4), fr.c(5, 2, 4)]
    w = _det_one_partner(u, fr.f)
    fr.auto({1: {1: u[0], 2: u[1]}, 2: {1: w[0], 2: w[1]}})
    fr.reduce()
    fr.auto({4: {4: 1, 3: fr.c(5, 1, 3)}})
    fr.reduce()
    c23 = fr.c(5, 2, 3)
    if not c23:
        return "L4+A1"
    fr.scale(3, c23)
    return "L5_3"


def _h_l3a2_one(fr: _Frame):
    fr.reduce()
    u = [fr.c(6, 1, 5), fr.c(6, 2, 5)]
    w = _det_one_partner(u, fr.f)
    fr.auto({1: {1: u[0], 2: u[1]}, 2: {1: w[0], 2: w[1]}})
    fr.reduce()
    fr.auto({5: {5: 1, 2: fr.c(6, 1, 2), 3: fr.c(6, 1, 3), 4: fr.c(6, 1, 4)}})
    fr.reduce()
    c23, c24, c34 = fr.c(6, 2, 3), fr.c(6, 2, 4), fr.c(6, 3, 4)
    if not (c23 or c24 or c34):
        return "L4+A2"
    if not c34:
        if c23:
            fr.auto({3: {3: c23, 4: c24}})
        else:
            fr.auto({3: {4: c24}, 4: {3: 1}})
        fr.reduce()
        return "L5_3+A1"
    fr.auto({3: {3: 1, 2: c24 / c34}, 4: {4: c34, 2: -c23}})
    fr.reduce()
    return "L6_3"


def _h_l52_one(fr: _Frame):
    f = fr.f
    fr.reduce()
    c = fr.c
    m = [[c(6, 2, 4), c(6, 2, 5)], [c(6, 3, 4), c(6, 3, 5)]]
    if m[0][1] != m[1][0]:
        raise WitnessMismatch("closed form on L5_2 is not symmetric")
    B, (d1, d2) = _congruence_diag(m, f)
    A = mat_inv(B, f)
    fr.auto({2: {2: A[0][0], 3: A[0][1]}, 3: {2: A[1][0], 3: A[1][1]},
             4: {4: A[0][0], 5: A[0][1]}, 5: {4: A[1][0], 5: A[1][1]}})
    fr.reduce()
    d1, d2 = c(6, 2, 4), c(6, 3, 5)
    if d1:
        fr.auto({2: {2: 1, 1: c(6, 1, 4) / d1}})
        if d2:
            fr.auto({3: {3: 1, 1: c(6, 1, 5) / d2}})
        fr.reduce()
        fr.auto({4: {4: 1, 3: c(6, 2, 3) / d1}})
        fr.reduce()
        if d2:
            fr.normalize(6, 2, 4)
            return "L6_8", c(6, 3, 5)
        q = c(6, 1, 5)
        if not q:
            fr.normalize(6, 2, 4)
            return "L6_6", None
        r = q / d1
        fr.auto({3: {3: r}, 5: {5: r}})
        fr.normalize(6, 2, 4)
        return "L6_7", None
    p, q = c(6, 1, 4), c(6, 1, 5)
    w = [f.zero, f.one] if p else [f.one, f.zero]
    fr.auto({2: {2: p, 3: q}, 3: {2: w[0], 3: w[1]}, 4: {4: p, 5: q}, 5: {4: w[0], 5: w[1]}})
    fr.reduce()
    lam = c(6, 2, 3)
    if not lam:
        return "L6_5", None
    fr.auto({3: {3: lam}, 5: {5: lam}})
    return "L6_9", None


def _left_kernel(m, f):
    ker = kernel(LinearMap([list(r) for r in m], 2, f))
    if ker.dim != 1:
        raise WitnessMismatch("expected a one-dimensional left kernel")
    return ker.rows[0]


def _h_l3a1_two(fr: _Frame):
    f = fr.f
    one, zero = f.one, f.zero

    def frame():
        fr.reduce()
        u = [[fr.c(i, 1, 4), fr.c(i, 2, 4)] for i in (5, 6)]
        fr.tops(mat_inv(u, f))
        fr.reduce()
        return [[fr.c(5, 1, 3), fr.c(5, 2, 3)], [fr.c(6, 1, 3), fr.c(6, 2, 3)]]

    def shift4(mu):
        fr.auto({4: {4: 1, 3: mu}})
        return frame()

    def gl2(m):
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        fr.auto({1: {1: m[0][0], 2: m[0][1]}, 2: {1: m[1][0], 2: m[1][1]}, 4: {4: det}})
        return frame()

    p = frame()
    half = (p[0][0] + p[1][1]) / 2
    psi = [[p[0][0] - half, p[0][1]], [p[1][0], p[1][1] - half]]
    delta = -(psi[0][0] * psi[1][1] - psi[0][1] * psi[1][0])
    if not any(psi[0] + psi[1]):
        shift4(half)
        return "L5_5+A1", None
    if not delta:
        p = shift4(half)
        m2 = [one, zero] if any(p[0]) else [zero, one]
        m1 = [m2[0] * p[0][j] + m2[1] * p[1][j] for j in range(2)]
        p = gl2([m1, m2])
        fr.scale(3, p[1][0])
        frame()
        return "L6_11", None
    s = exact_sqrt(delta, f)
    if s is not None:
        p = shift4(half - s)
        m1 = _left_kernel(p, f)
        m2 = _left_kernel([[p[0][0] - 2 * s, p[0][1]], [p[1][0], p[1][1] - 2 * s]], f)
        p = gl2([m1, m2])
        fr.scale(3, p[1][1])
        frame()
        return "L6_10", None
    p = shift4(half)
    p = gl2([[one, zero], list(p[0])])
    fr.scale(3, p[0][1])
    p = frame()
    fr.tops([[one, zero], [zero, 1 / p[1][0]]])
    return "L6_12", fr.c(6, 2, 4)


def _h_l4a1_one(fr: _Frame):
    fr.reduce()
    fr.normalize(6, 1, 5)
    fr.auto({5: {5: 1, 3: fr.c(6, 1, 3)}})
    fr.reduce()
    beta = fr.c(6, 2, 4)
    if beta:
        fr.auto({2: {2: beta}, 4: {4: beta}, 5: {5: beta}})
        fr.normalize(6, 1, 5)
    gamma = fr.c(6, 2, 3)
    if gamma:
        fr.scale(3, gamma)
    fr.reduce()
    return {(False, False): "L5_4+A1", (False, True): "L6_13",
            (True, False): "L5_6+A1", (True, True): "L6_14"}[(bool(beta), bool(gamma))]


def _h_l53_one(fr: _Frame):
    fr.reduce()
    fr.normalize(6, 1, 5)
    r = fr.c(6, 2, 3) / 2
    fr.auto({3: {3: 1, 1: r}, 4: {4: 1, 2: r}})
    fr.reduce()
    fr.auto({3: {3: 1, 2: -fr.c(6, 2, 4)}})
    fr.reduce()
    fr.auto({5: {5: 1, 3: fr.c(6, 1, 3)}})
    fr.reduce()
    return "L6_15"


def _h_l55_one(fr: _Frame):
    f = fr.f
    fr.reduce()
    c = fr.c
    a = [[c(6, 1, 4), c(6, 1, 5)], [c(6, 2, 4), c(6, 2, 5)]]
    if a[0][1] != a[1][0]:
        raise WitnessMismatch("closed form on L5_5 is not symmetric")
    B, _ = _congruence_diag(a, f)
    M = mat_inv(B, f)
    det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
    fr.auto({1: {1: M[0][0], 2: M[0][1]}, 2: {1: M[1][0], 2: M[1][1]}, 3: {3: det},
             4: {4: det * M[0][0], 5: det * M[0][1]}, 5: {4: det * M[1][0], 5: det * M[1][1]}})
    fr.reduce()
    fr.normalize(6, 1, 4)
    a2 = c(6, 2, 5)
    if not a2:
        return "L6_16", None
    return "L6_17", a2


def _h_l54_one(fr: _Frame):
    fr.reduce()
    c = fr.c
    if not c(6, 2, 5):
        fr.normalize(6, 1, 5)
        b = c(6, 2, 3)
        if not b:
            return "L6_18"
        fr.auto({i: {i: b} for i in (2, 3, 4, 5)})
        fr.normalize(6, 1, 5)
        return "L6_19"
    fr.normalize(6, 2, 5)
    fr.auto({2: {2: 1, 1: c(6, 1, 5)}})
    fr.reduce()
    r = c(6, 2, 3) / 2
    fr.auto({4: {4: 1, 2: r}, 5: {5: 1, 3: r}})
    fr.reduce()
    return "L6_20"


def _h_l56_one(fr: _Frame):
    fr.reduce()
    c = fr.c
    if not c(6, 2, 5):
        fr.normalize(6, 1, 5)
        alpha = -c(6, 2, 3) / 2
        fr.auto({2: {2: 1, 1: alpha}, 5: {5: 1, 4: alpha}})
        fr.reduce()
        return "L6_21"
    fr.normalize(6, 2, 5)
    alpha = c(6, 1, 5)
    fr.auto({2: {2: 1, 1: alpha}, 5: {5: 1, 4: alpha}})
    fr.reduce()
    r = c(6, 2, 3) / 2
    fr.auto({4: {4: 1, 2: r}, 5: {5: 1, 3: r}})
    fr.reduce()
    return "L6_22"


def _plain(h):
    def run(fr):
        return h(fr), None

    return run


# (lower class, number of top generators) -> handler returning (name, parameter)
_HANDLERS = {
    **{(f"A{k}", 1): _plain(_h_abelian_one) for k in (2, 3, 4, 5)},
    ("A3", 2): _plain(_h_three_two),
    ("A4", 2): _h_pencil,
    ("A3", 3): _plain(_h_three_three),
    ("L3", 1): _plain(_h_l3_one),
    ("L3", 2): _plain(_h_l3_two),
    ("L4", 1): _plain(_h_l4_one),
    ("L3+A1", 1): _plain(_h_l3a1_one),
    ("L3+A2", 1): _plain(_h_l3a2_one),
    ("L5_2", 1): _h_l52_one,
    ("L3+A1", 2): _h_l3a1_two,
    ("L4+A1", 1): _plain(_h_l4a1_one),
    ("L5_3", 1): _plain(_h_l53_one),
    ("L5_5", 1): _h_l55_one,
    ("L5_4", 1): _plain(_h_l54_one),
    ("L5_6", 1): _plain(_h_l56_one),
}


def _truncate(alg: MinimalAlgebra, k: int) -> MinimalAlgebra:
    diffs = [ExteriorElement(k, 2, d.coeffs) if d else None for d in alg.diffs[:k]]
    return MinimalAlgebra(k, diffs, alg.mode)


def _machine(alg: MinimalAlgebra):
    """(name, raw parameter, g) with alg.change_basis(g) equal to the template at that parameter."""
    n, f = alg.n, alg.field
    if n <= 1:
        return f"A{n}", None, identity(n, f)
    sig = filtration(alg).signature
    if len(sig) == 1:
        return f"A{n}", None, identity(n, f)
    fr = _Frame(alg)
    fr.move(filtration(alg).basis)
    k = n - sig[-1]
    lname, _, lg = _machine(_truncate(fr.alg, k))
    block = [list(r) + [f.zero] * (n - k) for r in lg] + identity(n, f)[k:]
    fr.move(block)
    fr.k = k
    handler = _HANDLERS.get((lname, sig[-1]))
    if handler is None:
        raise UnreachableSignature(f"signature {sig} over lower class {lname} cannot occur")
    name, a = handler(fr)
    if REGISTRY[name][1] != sig:
        raise WitnessMismatch(f"{name} reached from signature {sig}")
    return name, a, fr.g


def _rescale(name: str, lam, f: FieldMode):
    """Diagonal substitution taking the family parameter a to a·lam²."""
    inv = 1 / lam
    diag = {
        "L6_2": [1, inv, 1, inv, 1, inv],
        "L6_8": [1, 1, inv, 1, inv, 1],
        "L6_12": [lam, 1, lam * lam, lam, lam * lam, lam * lam * lam],
        "L6_17": [1, inv, inv, inv, inv * inv, inv],
    }[name]
    return [[f(diag[i]) if i == j else f.zero for j in range(6)] for i in range(6)]


# ------------------------------------------------------------- public API


@dataclass(frozen=True)
class Classification:
    """Result of :func:`classify`.

    ``matrix`` has the canonical generators as rows, written in the input
    generators, so ``A.change_basis(matrix) == target``. ``target`` equals
    ``canonical_model(label)`` except over R or C when the change of
    parameter needs an irrational square root; then ``witness_complete`` is
    False and ``target`` is the rational model the matrix does reach.
    """

    label: ClassLabel
    matrix: tuple
    target: MinimalAlgebra
    witness_complete: bool = True

    @property
    def signature(self):
        return self.label.signature

    @property
    def name(self):
        return self.label.name


def classify(alg: MinimalAlgebra, mode=None) -> Classification:
    """Canonical label of ``alg`` and an explicit change of basis to the registry model."""
    mode = FieldMode.parse(mode) if mode is not None else alg.mode
    if mode.base != alg.field:
        alg = alg.with_mode(mode)
    elif mode != alg.mode:
        alg = MinimalAlgebra(alg.n, alg.diffs, mode)
    if alg.n > MAX_CLASSIFY_DIM:
        raise BadDimension(f"classification covers dimension ≤ {MAX_CLASSIFY_DIM}, got {alg.n}")
    validate(alg)
    f = alg.field
    name, a, g = _machine(alg)
    complete = True
    if name not in FAMILIES:
        label = _label(name)
        target = _instantiate(name, None, f)
    else:
        base_cls = square_class(a, f)
        a0 = base_cls.representative
        g = mat_mul(_rescale(name, exact_sqrt(a0 / a, f), f), g)
        target = _instantiate(name, a0, f)
        if mode.kind in ("R", "C"):
            cls = square_class(a0, mode)
            if name in _NONTRIVIAL_ONLY and cls.trivial:
                label = _label(FAMILIES[name])
                complete = False
            else:
                label = _label(name, cls)
                lam = exact_sqrt(cls.representative / a0, f)
                if lam is None:
                    complete = False
                else:
                    g = mat_mul(_rescale(name, lam, f), g)
                    target = _instantiate(name, cls.representative, f)
        else:
            if name in _NONTRIVIAL_ONLY and base_cls.trivial:
                raise WitnessMismatch(f"{name} reached with a square parameter")
            label = _label(name, square_class(a0, mode))
    if alg.change_basis(g) != target:
        raise WitnessMismatch(f"witness for {label} does not reproduce the canonical model")
    if complete and alg == target.with_mode(alg.mode):
        g = identity(alg.n, f)
    return Classification(label, tuple(tuple(r) for r in g), target.with_mode(alg.mode), complete)


def homotopy_equivalent(a: MinimalAlgebra, b: MinimalAlgebra, mode="Q") -> bool:
    """Whether two rational models become isomorphic over the field named by ``mode``."""
    if a.n != b.n:
        return False
    return classify(a, mode).label == classify(b, mode).label
