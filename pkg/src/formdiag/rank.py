"""Slicing rank, radical and reduction of degenerate forms.

The radical of a symmetric d-tensor collects the vectors annihilating the
underlying multilinear map in one argument; its codimension is the
slicing rank, the essential number of variables.  Reduction produces a
change of variables whose trailing columns span the radical, so the form
lives entirely on the leading block.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement

from .forms import SymTensor, congruence
from .linalg import Matrix


def radical_basis(a: SymTensor):
    """Basis vectors u with sum_i u_i A_i = 0 over the order-(d-1) slices."""
    rows = []
    for tail in combinations_with_replacement(range(1, a.n + 1), a.d - 1):
        rows.append([a.entry((i,) + tail) for i in range(1, a.n + 1)])
    return Matrix(a.cfg, rows).nullspace()


def slicing_rank(a: SymTensor) -> int:
    return a.n - len(radical_basis(a))


@dataclass
class Reduction:
    """Outcome of stripping the radical from a tensor."""

    rank: int
    P: Matrix
    reduced: SymTensor


def reduce_nondegenerate(a: SymTensor) -> Reduction:
    """Split the tensor into a nondegenerate part plus radical directions.

    The returned P is invertible with columns rank+1..n spanning the
    radical; the complement columns are standard basis vectors picked at
    the non-pivot positions of the radical row space, which keeps the
    construction deterministic and the entries small.
    """
    cfg = a.cfg
    rad = radical_basis(a)
    if not rad:
        return Reduction(a.n, Matrix.identity(cfg, a.n), a)
    _, pivots = Matrix(cfg, rad).rref()
    comp = [j for j in range(a.n) if j not in pivots]
    cols = [[cfg.one if i == j else cfg.zero for i in range(a.n)] for j in comp]
    cols.extend(rad)
    p = Matrix.from_columns(cfg, cols)
    r = len(comp)
    b = congruence(a, p)
    entries = {}
    stray = cfg.tolerance * max(1.0, b.max_abs()) if cfg.mode == "float" else 0.0
    for idx, v in b.entries.items():
        if any(i > r for i in idx):
            if cfg.mode == "float" and abs(v) <= stray:
                continue
            raise AssertionError("radical directions survived the reduction")
        entries[idx] = v
    return Reduction(r, p, SymTensor(cfg, max(r, 1), a.d, entries))
