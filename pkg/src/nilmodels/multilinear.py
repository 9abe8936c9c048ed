"""Exterior algebra on degree-1 generators and exact dense linear algebra.

Vectors are plain lists of field scalars (``mpq`` or ``Residue``).
Monomials of degree ``d`` on ``n`` generators are the increasing index
tuples, ordered lexicographically; they are the coordinates of every
vector living in a graded piece.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from gmpy2 import mpq

from .field import FieldMode, Q

__all__ = [
    "DegreeOverflow",
    "NoSolution",
    "monomials",
    "monomial_index",
    "ExteriorElement",
    "generator",
    "wedge",
    "rref",
    "Subspace",
    "LinearMap",
    "kernel",
    "image",
    "preimage",
    "solve",
    "mat_mul",
    "mat_inv",
    "mat_rank",
    "identity",
]


class DegreeOverflow(ValueError):
    pass


class _NoSolution:
    """Returned by :func:`solve` when the target is not in the image."""

    def __bool__(self):
        return False

    def __repr__(self):
        return "NoSolution"


NoSolution = _NoSolution()


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations(range(n), d))


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict[tuple[int, ...], int]:
    return {m: i for i, m in enumerate(monomials(n, d))}


def _merge_sign(a: tuple[int, ...], b: tuple[int, ...]):
    """Sorted union of disjoint index tuples and the sign of the shuffle."""
    if set(a) & set(b):
        return None, 0
    inversions = sum(1 for i in a for j in b if i > j)
    return tuple(sorted(a + b)), (-1 if inversions % 2 else 1)


class ExteriorElement:
    """Homogeneous element of Λ^d on generators x_1..x_n.

    ``coeffs`` maps increasing 0-based index tuples to nonzero scalars.
    """

    __slots__ = ("n", "degree", "coeffs")

    def __init__(self, n: int, degree: int, coeffs=None):
        if not 0 <= degree:
            raise ValueError("negative degree")
        if degree > n and coeffs:
            raise DegreeOverflow(f"degree {degree} > {n} generators")
        self.n = n
        self.degree = degree
        clean = {}
        for key, c in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise ValueError(f"monomial {key} has wrong degree")
            if list(key) != sorted(set(key)):
                raise ValueError(f"monomial {key} is not strictly increasing")
            if c:
                clean[key] = c
        self.coeffs = clean

    @classmethod
    def from_vector(cls, n, degree, vec):
        return cls(n, degree, {m: c for m, c in zip(monomials(n, degree), vec) if c})

    @classmethod
    def from_terms(cls, n, terms, field: FieldMode = Q):
        """Build from ``[(coeff, (i, j, ...)), ...]`` with arbitrary index order (0-based)."""
        out = {}
        degree = None
        for c, idx in terms:
            idx = tuple(idx)
            degree = len(idx) if degree is None else degree
            arr = list(idx)
            if len(set(arr)) < len(arr):
                continue
            sign = 1
            for i in range(len(arr)):
                for j in range(len(arr) - 1 - i):
                    if arr[j] > arr[j + 1]:
                        arr[j], arr[j + 1] = arr[j + 1], arr[j]
                        sign = -sign
            key = tuple(arr)
            out[key] = out.get(key, field.zero) + field(c) * sign
        return cls(n, degree or 0, out)

    def to_vector(self, field: FieldMode = Q):
        z = field.zero
        return [self.coeffs.get(m, z) for m in monomials(self.n, self.degree)]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _check(self, other):
        if not isinstance(other, ExteriorElement):
            return NotImplemented
        if other.n != self.n or other.degree != self.degree:
            raise ValueError("adding elements of different graded pieces")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return ExteriorElement(self.n, self.degree, out)

    def __neg__(self):
        return ExteriorElement(self.n, self.degree, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return ExteriorElement(self.n, self.degree, {k: c * v for k, v in self.coeffs.items()})

    def __rmul__(self, c):
        return self.scale(c)

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, ExteriorElement):
            return NotImplemented
        return (self.n, self.degree) == (other.n, other.degree) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.degree, frozenset(self.coeffs.items())))

    def terms(self):
        """Sorted ``(monomial, coeff)`` pairs."""
        return sorted(self.coeffs.items())

    def __repr__(self):
        return f"ExteriorElement({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for key, c in self.terms():
            mono = "".join(f"x{i + 1}" for i in key) or "1"
            if c == 1:
                parts.append(("+", mono))
            elif c == -1:
                parts.append(("-", mono))
            else:
                s = str(c)
                if s.startswith("-"):
                    parts.append(("-", f"{s[1:]}*{mono}"))
                else:
                    parts.append(("+", f"{s}*{mono}"))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self, field: FieldMode = Q):
        return [{"indices": [i + 1 for i in key], "coeff": field.format(c)} for key, c in self.terms()]

    @classmethod
    def from_json(cls, n, data, field: FieldMode = Q):
        terms = [(field(str(t["coeff"])), [i - 1 for i in t["indices"]]) for t in data]
        if not terms:
            raise ValueError("cannot infer the degree of an empty term list")
        return cls.from_terms(n, terms, field)


def generator(n: int, i: int, field: FieldMode = Q) -> ExteriorElement:
    """The degree-1 generator x_{i+1} (0-based ``i``)."""
    return ExteriorElement(n, 1, {(i,): field.one})


def wedge(u: ExteriorElement, v: ExteriorElement) -> ExteriorElement:
    if u.n != v.n:
        raise ValueError("wedge of elements on different generator sets")
    if u.degree + v.degree > u.n:
        raise DegreeOverflow(f"degree {u.degree}+{v.degree} exceeds {u.n}")
    out = {}
    for a, ca in u.coeffs.items():
        for b, cb in v.coeffs.items():
            key, sign = _merge_sign(a, b)
            if key is None:
                continue
            c = ca * cb if sign > 0 else -(ca * cb)
            out[key] = out[key] + c if key in out else c
    return ExteriorElement(u.n, u.degree + v.degree, out)


# ---------------------------------------------------------------- matrices


def identity(n: int, field: FieldMode = Q):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    return [[sum((x * y for x, y in zip(row, col)), start=0 * row[0]) for col in zip(*b)] for row in a]


def rref(rows):
    """Reduced row echelon form; returns (nonzero rows, pivot columns).

    Pivots are the first nonzero column of each row and are normalized to 1.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        if isinstance(m[r][c], int):
            # plain integer input: keep arithmetic exact
            m[r] = [mpq(x) for x in m[r]]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def mat_rank(rows) -> int:
    return len(rref(rows)[1])


def mat_inv(a, field: FieldMode = Q):
    n = len(a)
    one, zero = field.one, field.zero
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(a)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


class Subspace:
    """Subspace of a graded piece Λ^degree on ``n`` generators.

    Stored as a canonical reduced echelon basis, so two spanning sets of
    the same subspace give equal objects.
    """

    __slots__ = ("n", "degree", "field", "rows", "pivots")

    def __init__(self, n, degree, rows, field: FieldMode = Q):
        self.n = n
        self.degree = degree
        self.field = field
        self.rows, self.pivots = rref(rows) if rows else ([], [])

    @classmethod
    def span(cls, elements, n=None, degree=None, field: FieldMode = Q):
        elements = list(elements)
        if elements and isinstance(elements[0], ExteriorElement):
            n, degree = elements[0].n, elements[0].degree
            rows = [e.to_vector(field) for e in elements]
        else:
            rows = [list(e) for e in elements]
        return cls(n, degree, rows, field)

    @classmethod
    def full(cls, n, degree, field: FieldMode = Q):
        return cls(n, degree, identity(len(monomials(n, degree)), field), field)

    @classmethod
    def zero(cls, n, degree, field: FieldMode = Q):
        return cls(n, degree, [], field)

    @property
    def ambient_dim(self) -> int:
        return len(monomials(self.n, self.degree))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __len__(self):
        return self.dim

    def basis(self):
        return [ExteriorElement.from_vector(self.n, self.degree, r) for r in self.rows]

    def residual(self, v):
        v = list(v)
        for row, p in zip(self.rows, self.pivots):
            if v[p]:
                f = v[p]
                v = [x - f * y for x, y in zip(v, row)]
        return v

    def contains(self, v) -> bool:
        if isinstance(v, ExteriorElement):
            v = v.to_vector(self.field)
        return not any(self.residual(v))

    def __contains__(self, v):
        return self.contains(v)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.n, self.degree, self.rows) == (other.n, other.degree, other.rows)

    def __hash__(self):
        return hash((self.n, self.degree, tuple(map(tuple, self.rows))))

    def __add__(self, other):
        return Subspace(self.n, self.degree, self.rows + other.rows, self.field)

    def intersect(self, other: "Subspace") -> "Subspace":
        # v = sum a_i s_i = sum b_j t_j  <=> (a, -b) in kernel
        if not self.rows or not other.rows:
            return Subspace.zero(self.n, self.degree, self.field)
        cols = self.rows + [[-x for x in r] for r in other.rows]
        f = LinearMap(cols, len(self.rows[0]), self.field)
        vecs = []
        for k in kernel(f).rows:
            acc = [self.field.zero] * len(self.rows[0])
            for a, s in zip(k[: len(self.rows)], self.rows):
                if a:
                    acc = [x + a * y for x, y in zip(acc, s)]
            vecs.append(acc)
        return Subspace(self.n, self.degree, vecs, self.field)

    def complement_in(self, bigger: "Subspace"):
        """Rows of ``bigger``'s echelon basis whose pivots are not pivots of ``self``."""
        mine = set(self.pivots)
        return [r for r, p in zip(bigger.rows, bigger.pivots) if p not in mine]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, degree={self.degree}, basis={[str(b) for b in self.basis()]})"


class LinearMap:
    """Linear map given by the images of the domain's standard basis.

    ``cols[j]`` is the image of basis vector ``j`` as a codomain vector.
    """

    __slots__ = ("cols", "codim", "field", "_red")

    def __init__(self, cols, codim, field: FieldMode = Q):
        self.cols = [list(c) for c in cols]
        self.codim = codim
        self.field = field
        self._red = None

    @property
    def dim(self) -> int:
        return len(self.cols)

    def matrix(self):
        """Row-major codim x dim matrix."""
        if not self.cols:
            return [[] for _ in range(self.codim)]
        return [[c[i] for c in self.cols] for i in range(self.codim)] if self.codim else []

    def apply(self, v):
        acc = [self.field.zero] * self.codim
        for a, c in zip(v, self.cols):
            if a:
                acc = [x + a * y for x, y in zip(acc, c)]
        return acc

    def _reduced(self):
        if self._red is None:
            self._red = rref(self.matrix())
        return self._red

    @property
    def rank(self) -> int:
        return len(self._reduced()[1])

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self ∘ other."""
        return LinearMap([self.apply(c) for c in other.cols], self.codim, self.field)


def kernel(f: LinearMap, n=None, degree=None) -> Subspace:
    rows, piv = f._reduced()
    free = [j for j in range(f.dim) if j not in piv]
    z, one = f.field.zero, f.field.one
    vecs = []
    for j in free:
        v = [z] * f.dim
        v[j] = one
        for row, p in zip(rows, piv):
            v[p] = -row[j]
        vecs.append(v)
    out = Subspace(n, degree, vecs, f.field)
    assert out.dim + f.rank == f.dim
    return out


def image(f: LinearMap, n=None, degree=None) -> Subspace:
    return Subspace(n, degree, [c for c in f.cols if any(c)], f.field)


def preimage(f: LinearMap, target: Subspace, n=None, degree=None) -> Subspace:
    """{v : f(v) in target}."""
    free = [i for i in range(f.codim) if i not in set(target.pivots)]
    cols = []
    for c in f.cols:
        r = target.residual(c)
        cols.append([r[i] for i in free])
    return kernel(LinearMap(cols, len(free), f.field), n, degree)


def solve(f: LinearMap, target):
    """Some v with f(v) = target (free variables set to zero), or NoSolution."""
    if isinstance(target, ExteriorElement):
        target = target.to_vector(f.field)
    aug = [row + [t] for row, t in zip(f.matrix(), target)] if f.dim else [[t] for t in target]
    rows, piv = rref(aug)
    if f.dim in piv:
        return NoSolution
    v = [f.field.zero] * f.dim
    for row, p in zip(rows, piv):
        v[p] = row[-1]
    return v
