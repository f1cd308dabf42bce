"""Univariate polynomial helpers over the configured scalars.

Polynomials are lists of Scalars in ascending degree with a nonzero lead.
Everything here works over any field the scalars provide; factorization
into irreducibles is delegated to sympy for rational coefficients, while
splitting quadratics over a radical tower goes through try_sqrt.
"""

from __future__ import annotations

from fractions import Fraction

import sympy

from .fields import NeedsExtension, Scalar, try_sqrt
from .linalg import Matrix

_T = sympy.Symbol("t")


def trim(p):
    while p and p[-1].is_zero():
        p = p[:-1]
    return list(p)


def degree(p) -> int:
    return len(p) - 1


def is_zero(p) -> bool:
    return not p


def constant(cfg, value):
    c = cfg.scalar(value)
    return [] if c.is_zero() else [c]


def add(p, q, cfg):
    out = []
    for i in range(max(len(p), len(q))):
        a = p[i] if i < len(p) else cfg.zero
        b = q[i] if i < len(q) else cfg.zero
        out.append(a + b)
    return trim(out)


def neg(p):
    return [-c for c in p]


def sub(p, q, cfg):
    return add(p, neg(q), cfg)


def mul(p, q, cfg):
    if not p or not q:
        return []
    out = [cfg.zero] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            if not b.is_zero():
                out[i + j] = out[i + j] + a * b
    return trim(out)


def scale(p, c):
    return trim([x * c for x in p])


def divmod_poly(p, q, cfg):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quo = [cfg.zero] * max(0, len(p) - len(q) + 1)
    inv_lead = q[-1].inverse()
    for k in range(len(rem) - len(q), -1, -1):
        c = rem[k + len(q) - 1] * inv_lead
        if c.is_zero():
            continue
        quo[k] = c
        for i, b in enumerate(q):
            rem[k + i] = rem[k + i] - c * b
    return trim(quo), trim(rem)


def monic(p):
    if not p:
        return []
    inv = p[-1].inverse()
    return [c * inv for c in p]


def gcd(p, q, cfg):
    a, b = trim(p), trim(q)
    while b:
        _, r = divmod_poly(a, b, cfg)
        a, b = b, r
    return monic(a)


def ext_gcd(p, q, cfg):
    """(g, s, t) with s*p + t*q = g, g monic."""
    r0, r1 = trim(p), trim(q)
    s0, s1 = constant(cfg, 1), []
    t0, t1 = [], constant(cfg, 1)
    while r1:
        quo, rem = divmod_poly(r0, r1, cfg)
        r0, r1 = r1, rem
        s0, s1 = s1, sub(s0, mul(quo, s1, cfg), cfg)
        t0, t1 = t1, sub(t0, mul(quo, t1, cfg), cfg)
    if not r0:
        return [], s0, t0
    inv = r0[-1].inverse()
    return scale(r0, inv), scale(s0, inv), scale(t0, inv)


def derivative(p, cfg):
    return trim([p[i] * i for i in range(1, len(p))])


def power(p, e, cfg):
    out = constant(cfg, 1)
    base = list(p)
    while e:
        if e & 1:
            out = mul(out, base, cfg)
        base = mul(base, base, cfg)
        e >>= 1
    return out


def eval_scalar(p, x: Scalar, cfg):
    out = cfg.zero
    for c in reversed(p):
        out = out * x + c
    return out


def eval_matrix(p, x: Matrix) -> Matrix:
    cfg = x.cfg
    n = x.nrows
    out = Matrix.zeros(cfg, n, n)
    ident = Matrix.identity(cfg, n)
    for c in reversed(p):
        out = out * x + ident * c
    return out


def embed(p, cfg):
    return [cfg.embed(c) for c in p]


def is_rational(p) -> bool:
    return all(c.rational() is not None for c in p)


def squarefree_decomposition(p, cfg):
    """Yun's algorithm: monic squarefree factors with multiplicities."""
    p = monic(p)
    out = []
    dp = derivative(p, cfg)
    a = gcd(p, dp, cfg)
    b, _ = divmod_poly(p, a, cfg)
    c, _ = divmod_poly(dp, a, cfg)
    d = sub(c, derivative(b, cfg), cfg)
    i = 1
    while degree(b) > 0:
        g = gcd(b, d, cfg)
        if degree(g) > 0:
            out.append((monic(g), i))
        b, _ = divmod_poly(b, g, cfg)
        c, _ = divmod_poly(d, g, cfg)
        d = sub(c, derivative(b, cfg), cfg)
        i += 1
    return out


def factor_rational(p, cfg):
    """Monic irreducible factors over Q with multiplicities, via sympy."""
    fracs = [c.rational() for c in p]
    assert all(f is not None for f in fracs)
    poly = sympy.Poly(
        [sympy.Rational(f.numerator, f.denominator) for f in reversed(fracs)],
        _T,
        domain="QQ",
    )
    _, factors = poly.factor_list()
    out = []
    for fp, e in factors:
        coeffs = [Fraction(c.p, c.q) for c in reversed(fp.all_coeffs())]
        lead = coeffs[-1]
        out.append(([cfg.scalar(c / lead) for c in coeffs], int(e)))
    out.sort(key=lambda item: (degree(item[0]), poly_text(item[0])))
    return out


def quadratic_roots(p, cfg):
    """Split a monic quadratic over the tower.

    Returns ("roots", [r1, r2]) on success, or ("need", NeedsExtension)
    when the discriminant has no square root in the current field.
    """
    assert degree(p) == 2
    q = monic(p)
    b, c = q[1], q[0]
    disc = b * b - cfg.scalar(4) * c
    root = try_sqrt(disc, cfg)
    if isinstance(root, NeedsExtension):
        return "need", root
    half = cfg.scalar(Fraction(1, 2)) if cfg.mode == "exact" else cfg.scalar(0.5)
    r1 = (-b + root) * half
    r2 = (-b - root) * half
    return "roots", [r1, r2]


def poly_text(p) -> str:
    if not p:
        return "0"
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c.is_zero():
            continue
        txt = c.text()
        if i == 0:
            parts.append(txt)
            continue
        var = "t" if i == 1 else f"t^{i}"
        if txt == "1":
            parts.append(var)
        elif txt == "-1":
            parts.append(f"-{var}")
        elif " + " in txt or " - " in txt:
            parts.append(f"({txt})*{var}")
        else:
            parts.append(f"{txt}*{var}")
    out = parts[0]
    for piece in parts[1:]:
        out += " - " + piece[1:] if piece.startswith("-") else " + " + piece
    return out
