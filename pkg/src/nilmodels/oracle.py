"""Verification harness: seeded basis scrambles, invariant fingerprints, the dim-3 census over F3."""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import asdict, dataclass
from itertools import product

from .algebra import AlgebraError, LieAlgebra, MinimalAlgebra, from_lie
from .bivector import DependentPencil, pencil_invariant
from .classify import UnreachableSignature, canonical_model, classify
from .field import FieldMode
from .multilinear import ExteriorElement, Subspace, identity, mat_inv, mat_rank
from .symplectic import pfaffian_cubic

__all__ = [
    "Fingerprint",
    "scramble",
    "unscramble",
    "random_matrix",
    "fingerprint",
    "Census",
    "enumerate_dim3_f3",
    "invariance_trial",
    "write_jsonl",
]

ENTRY_RANGE = (-3, 3)


def random_matrix(n: int, seed, field: FieldMode) -> list:
    """Invertible n×n matrix with entries in {-3..3}, redrawn until invertible."""
    rng = random.Random(seed)
    lo, hi = ENTRY_RANGE
    while True:
        g = [[field(rng.randint(lo, hi)) for _ in range(n)] for _ in range(n)]
        if mat_rank(g) == n:
            return g


def scramble(alg: MinimalAlgebra, seed) -> tuple[MinimalAlgebra, list]:
    """Push ``alg`` through a seeded random change of generators.

    ``seed=None`` is the identity path and returns ``alg`` unchanged.
    """
    f = alg.field
    if seed is None:
        return alg, identity(alg.n, f)
    g = random_matrix(alg.n, seed, f)
    return alg.change_basis(g), g


def unscramble(alg: MinimalAlgebra, g) -> MinimalAlgebra:
    return alg.change_basis(mat_inv(g, alg.field))


def invariance_trial(alg: MinimalAlgebra, seed, expected: str | None = None) -> dict:
    """Scramble with ``seed``, reclassify, and compare labels (parameter class included)."""
    if expected is None:
        expected = str(classify(alg).label)
    scrambled, _ = scramble(alg, seed)
    try:
        got = str(classify(scrambled).label)
        unreachable = False
    except UnreachableSignature:
        got, unreachable = "UnreachableSignature", True
    return {"seed": seed, "field": str(alg.mode), "expected": expected, "got": got,
            "ok": got == expected, "unreachable": unreachable}


@dataclass(frozen=True)
class Fingerprint:
    """Basis-independent data read off the model without classifying it.

    ``d_dims[k]`` is dim d(W_{k+1}); ``symplectic`` is None in odd dimension;
    ``parameter`` is the pencil verdict for signature (4,2) and None elsewhere.
    """

    signature: tuple
    betti: tuple
    d_dims: tuple
    symplectic: bool | None
    parameter: str | None

    def to_json(self) -> dict:
        return asdict(self)


def _pencil(alg: MinimalAlgebra, filt) -> str | None:
    if filt.signature != (4, 2):
        return None
    w1 = filt.subspaces[0]
    n = alg.n
    phis = [alg.d(ExteriorElement.from_vector(n, 1, row)) for row in filt.basis[4:]]
    try:
        return str(pencil_invariant(phis[0], phis[1], w1, alg.mode))
    except DependentPencil:
        return None


def fingerprint(alg: MinimalAlgebra) -> Fingerprint:
    filt = alg.filtration
    f, n = alg.field, alg.n
    d1 = alg.d_map(1)
    d_dims = []
    for w in filt.subspaces:
        imgs = [d1.apply(r) for r in w.rows]
        d_dims.append(Subspace(n, 2, imgs, f).dim if imgs else 0)
    symp = None if n % 2 else not pfaffian_cubic(alg).is_zero()
    return Fingerprint(filt.signature, alg.betti, tuple(d_dims), symp, _pencil(alg, filt))


@dataclass
class Census:
    """Outcome of the exhaustive dim-3 sweep over F3."""

    tables: int
    rejected: int
    counts: Counter
    mismatches: list

    @property
    def labels(self) -> set:
        return set(self.counts)

    def records(self):
        yield {"kind": "summary", "tables": self.tables, "rejected": self.rejected,
               "counts": dict(sorted(self.counts.items()))}
        for m in self.mismatches:
            yield {"kind": "mismatch", **m}


def enumerate_dim3_f3() -> Census:
    """Classify every antisymmetric structure-constant table in dimension 3 over F3."""
    mode = FieldMode.parse("F3")
    pairs = [(0, 1), (0, 2), (1, 2)]
    ref = {}
    counts: Counter = Counter()
    mismatches = []
    rejected = 0
    total = 0
    for consts in product(range(3), repeat=9):
        total += 1
        brackets = {}
        for p, (j, k) in enumerate(pairs):
            vec = {i: consts[3 * p + i] for i in range(3) if consts[3 * p + i]}
            if vec:
                brackets[(j, k)] = vec
        try:
            alg = from_lie(LieAlgebra(3, brackets, mode))
        except AlgebraError:
            rejected += 1
            continue
        name = str(classify(alg).label)
        counts[name] += 1
        if name not in ref:
            ref[name] = fingerprint(canonical_model(name, mode))
        if fingerprint(alg) != ref[name]:
            mismatches.append({"constants": list(consts), "label": name})
    return Census(total, rejected, counts, mismatches)


def write_jsonl(records, stream) -> int:
    """One JSON object per line; returns the number written."""
    count = 0
    for rec in records:
        stream.write(json.dumps(rec, sort_keys=True, default=str) + "\n")
        count += 1
    return count
