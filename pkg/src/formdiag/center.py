"""The center of a nondegenerate form as a commutative matrix algebra.

A matrix X is central when X^T M = M X for every slice M of the Gram
tensor.  Stacking those conditions over the sorted tails gives one linear
system in the n^2 entries of X; the center is its nullspace.  The
returned basis is canonical (echelon over the vectorized matrices) with
the identity placed first, which the idempotent machinery relies on.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .errors import DegenerateFormError
from .fields import FieldConfig
from .forms import Form, SymTensor, hessian_at, slice_matrix
from .linalg import Matrix
from .rank import radical_basis


@dataclass
class CenterBasis:
    """A basis of the center; basis[0] is always the identity."""

    n: int
    cfg: FieldConfig
    basis: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __iter__(self):
        return iter(self.basis)

    def vectors(self):
        return [m.vectorize() for m in self.basis]

    def embed(self, cfg) -> "CenterBasis":
        if cfg == self.cfg:
            return self
        return CenterBasis(self.n, cfg, [m.embed(cfg) for m in self.basis])


def center_basis(a: SymTensor) -> CenterBasis:
    """Solve the slice conditions; requires a nondegenerate tensor."""
    if radical_basis(a):
        raise DegenerateFormError(
            "the center is computed on nondegenerate forms; reduce first")
    cfg = a.cfg
    n = a.n
    zero = cfg.zero
    rows = []
    for tail in combinations_with_replacement(range(1, n + 1), a.d - 2):
        m = slice_matrix(a, tail)
        # X^T M - M X is antisymmetric, so entries (p, q) with p < q suffice
        for p in range(n):
            for q in range(p + 1, n):
                row = [zero] * (n * n)
                for i in range(n):
                    c = m[i, q]
                    if not c.is_zero():
                        row[i * n + p] = row[i * n + p] + c
                    c = m[p, i]
                    if not c.is_zero():
                        row[i * n + q] = row[i * n + q] - c
                rows.append(row)
    if rows:
        null = Matrix(cfg, rows).nullspace()
    else:
        null = Matrix.identity(cfg, n * n).tolist()
    mats = [Matrix(cfg, [v[i * n:(i + 1) * n] for i in range(n)]) for v in null]
    return CenterBasis(n, cfg, _identity_first(mats, n, cfg))


def _identity_first(mats, n, cfg):
    """Reorder the basis so the identity is the first element."""
    ident = Matrix.identity(cfg, n)
    if not mats:
        raise AssertionError("center lost the identity matrix")
    stacked = Matrix.from_columns(cfg, [m.vectorize() for m in mats])
    coeffs = stacked.solve(ident.vectorize())
    if coeffs is None:
        raise AssertionError("identity is not in the computed center")
    keep = next(i for i, c in enumerate(coeffs) if not c.is_zero())
    return [ident] + [m for i, m in enumerate(mats) if i != keep]


def center_dim(a: SymTensor) -> int:
    return center_basis(a).dim


def hessian_cross_check(f: Form, x, trials: int = 8, seed: int = 0) -> bool:
    """Randomized necessary condition: (H(p) X)^T = H(p) X at random points."""
    if not isinstance(x, Matrix):
        x = Matrix(f.cfg, x)
    rng = random.Random(seed)
    for _ in range(trials):
        point = [rng.randint(-4, 4) for _ in range(f.n)]
        h = hessian_at(f, point)
        hx = h * x
        if hx.transpose() != hx:
            return False
    return True
