"""Oracles and generators for property testing.

expand_powersum and substitute_linear re-expand decompositions by direct
monomial multiplication, deliberately sharing no code with the tensor
congruence path, so they can serve as independent checks of the
pipeline.  The generators use the stdlib Mersenne Twister
(random.Random(seed)) so fixtures are reproducible.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .fields import FieldConfig
from .forms import Form, compositions, multinomial
from .linalg import Matrix


def expand_powersum(lambdas, rows, d: int, cfg: FieldConfig = None,
                    n: int = None) -> Form:
    """The form sum_i lambda_i * (rows[i] . x)^d by multinomial expansion."""
    if cfg is None:
        cfg = FieldConfig()
    rows = [[cfg.scalar(x) for x in row] for row in rows]
    lambdas = [cfg.scalar(x) for x in lambdas]
    if n is None:
        n = len(rows[0]) if rows else 1
    coeffs = {}
    for lam, row in zip(lambdas, rows):
        for exps in compositions(d, n):
            term = lam * multinomial(d, exps)
            for x, e in zip(row, exps):
                if e:
                    if x.is_zero():
                        term = cfg.zero
                        break
                    term = term * x**e
            if term.is_zero():
                continue
            prev = coeffs.get(exps)
            coeffs[exps] = term if prev is None else prev + term
    return Form(cfg, n, d, coeffs)


def _mul_linear(poly, row, cfg, n):
    out = {}
    for exps, c in poly.items():
        for i, x in enumerate(row):
            if x.is_zero():
                continue
            key = exps[:i] + (exps[i] + 1,) + exps[i + 1:]
            v = c * x
            prev = out.get(key)
            out[key] = v if prev is None else prev + v
    return out


def substitute_linear(g: Form, rows, cfg: FieldConfig = None,
                      n: int = None) -> Form:
    """Compose g with linear forms of x1..xn, expanding by repeated products."""
    cfg = cfg or g.cfg
    rows = [[cfg.scalar(x) for x in row] for row in rows]
    if len(rows) != g.n:
        raise ValueError(f"need {g.n} linear forms, got {len(rows)}")
    if n is None:
        n = len(rows[0]) if rows else 1
    total = {}
    for exps, c in g.coeffs.items():
        term = {(0,) * n: cfg.embed(c) if cfg != g.cfg else c}
        for var, e in enumerate(exps):
            for _ in range(e):
                term = _mul_linear(term, rows[var], cfg, n)
        for key, v in term.items():
            prev = total.get(key)
            total[key] = v if prev is None else prev + v
    return Form(cfg, n, g.d, total)


def add_forms(f: Form, g: Form) -> Form:
    if (f.n, f.d) != (g.n, g.d):
        raise ValueError("cannot add forms of different shape")
    coeffs = dict(f.coeffs)
    for k, v in g.coeffs.items():
        prev = coeffs.get(k)
        coeffs[k] = v if prev is None else prev + v
    return Form(f.cfg, f.n, f.d, coeffs)


@dataclass
class GroundTruth:
    """A known power-sum decomposition together with its expanded form."""

    P: Matrix
    lambdas: list
    rows: list
    form: Form


def random_diagonalizable(n: int, d: int, seed: int,
                          cfg: FieldConfig = None) -> GroundTruth:
    """A random diagonalizable instance with integer generating matrix.

    Rows are monic-normalized with the scale folded into the weights, so
    the stored (lambdas, rows) pair re-expands exactly to the form.
    """
    cfg = cfg or FieldConfig()
    rng = random.Random(seed)
    while True:
        entries = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
        p = Matrix(cfg, entries)
        if not p.det().is_zero():
            break
    raw = [rng.choice([x for x in range(-4, 5) if x]) for _ in range(n)]
    lambdas = []
    rows = []
    for i in range(n):
        row = p.row(i)
        s = next(x for x in row if not x.is_zero())
        inv = s.inverse()
        rows.append([x * inv for x in row])
        lambdas.append(cfg.scalar(raw[i]) * s**d)
    form = expand_powersum(lambdas, rows, d, cfg=cfg, n=n)
    return GroundTruth(P=p, lambdas=lambdas, rows=rows, form=form)


def random_orthogonal_rational(n: int, seed: int) -> Matrix:
    """An exactly orthogonal rational matrix via the Cayley transform."""
    cfg = FieldConfig()
    rng = random.Random(seed)
    s = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
            s[i][j] = v
            s[j][i] = -v
    sm = Matrix(cfg, s)
    ident = Matrix.identity(cfg, n)
    q = (ident - sm) * (ident + sm).inverse()
    assert q.transpose() * q == ident
    return q
