"""Homogeneous forms, Gram tensors, slices, congruence and Hessians.

A form of degree d in variables x1..xn is stored sparsely by exponent
vector.  Its Gram tensor is the symmetric d-tensor keyed by sorted
multi-indices whose symmetrized contraction with x^d reproduces the form;
the conversion divides each coefficient by the multinomial count of its
monomial.
"""

from __future__ import annotations

import math
import re
from itertools import combinations_with_replacement, permutations

from .errors import (
    DegreeTooLowError,
    DimensionMismatchError,
    FormSyntaxError,
    IndexRangeError,
    NotHomogeneousError,
)
from .fields import FieldConfig, Scalar, common_config, parse_scalar, scalar_text
from .linalg import Matrix


def multinomial(d: int, exps) -> int:
    out = math.factorial(d)
    for e in exps:
        out //= math.factorial(e)
    return out


def exponents_to_index(exps) -> tuple:
    """Exponent vector (2,0,1) -> sorted multi-index (1,1,3)."""
    idx = []
    for var, e in enumerate(exps, start=1):
        idx.extend([var] * e)
    return tuple(idx)


def index_to_exponents(idx, n: int) -> tuple:
    exps = [0] * n
    for i in idx:
        exps[i - 1] += 1
    return tuple(exps)


def compositions(total: int, parts: int):
    """All exponent vectors of the given length summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for idx in combinations_with_replacement(range(1, parts + 1), total):
        yield index_to_exponents(idx, parts)


class Form:
    """A homogeneous polynomial of degree >= 3 over the configured field."""

    __slots__ = ("cfg", "n", "d", "coeffs")

    def __init__(self, cfg: FieldConfig, n: int, d: int, coeffs):
        if d < 3:
            raise DegreeTooLowError(f"degree {d} is below 3")
        if n < 1:
            raise DimensionMismatchError("a form needs at least one variable")
        self.cfg = cfg
        self.n = n
        self.d = d
        clean = {}
        for exps, c in coeffs.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise DimensionMismatchError(f"bad exponent vector {exps}")
            if sum(exps) != d:
                raise NotHomogeneousError(f"monomial {exps} has degree {sum(exps)}")
            c = cfg.scalar(c)
            if not c.is_zero():
                clean[exps] = c
        self.coeffs = clean

    def coefficient(self, exps) -> Scalar:
        return self.coeffs.get(tuple(exps), self.cfg.zero)

    def is_zero(self) -> bool:
        return not self.coeffs

    def embed(self, cfg) -> "Form":
        if cfg == self.cfg:
            return self
        return Form(cfg, self.n, self.d,
                    {e: cfg.embed(c) for e, c in self.coeffs.items()})

    def evaluate(self, point) -> Scalar:
        point = [self.cfg.scalar(x) for x in point]
        if len(point) != self.n:
            raise DimensionMismatchError("point length mismatch")
        total = self.cfg.zero
        for exps, c in self.coeffs.items():
            term = c
            for x, e in zip(point, exps):
                if e:
                    term = term * x**e
            total = total + term
        return total

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if (self.n, self.d) != (other.n, other.d):
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all((self.coefficient(k) - other.coefficient(k)).is_zero() for k in keys)

    __hash__ = None

    def max_abs(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def text(self) -> str:
        return form_text(self)

    def __repr__(self):
        return f"Form({self.text()})"


class SymTensor:
    """A symmetric d-tensor stored at sorted multi-indices (1-based)."""

    __slots__ = ("cfg", "n", "d", "entries")

    def __init__(self, cfg: FieldConfig, n: int, d: int, entries):
        self.cfg = cfg
        self.n = n
        self.d = d
        clean = {}
        for idx, v in entries.items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != d:
                raise DimensionMismatchError(f"index {idx} has length {len(idx)} != {d}")
            if any(i < 1 or i > n for i in idx):
                raise IndexRangeError(f"index {idx} out of 1..{n}")
            if tuple(sorted(idx)) != idx:
                raise DimensionMismatchError(f"index {idx} is not sorted")
            v = cfg.scalar(v)
            if not v.is_zero():
                clean[idx] = v
        self.entries = clean

    def entry(self, idx) -> Scalar:
        key = tuple(sorted(int(i) for i in idx))
        if len(key) != self.d:
            raise DimensionMismatchError(f"index length {len(key)} != {self.d}")
        if any(i < 1 or i > self.n for i in key):
            raise IndexRangeError(f"index {key} out of 1..{self.n}")
        return self.entries.get(key, self.cfg.zero)

    def is_zero(self) -> bool:
        return not self.entries

    def embed(self, cfg) -> "SymTensor":
        if cfg == self.cfg:
            return self
        return SymTensor(cfg, self.n, self.d,
                         {k: cfg.embed(v) for k, v in self.entries.items()})

    def __eq__(self, other):
        if not isinstance(other, SymTensor):
            return NotImplemented
        if (self.n, self.d) != (other.n, other.d):
            return False
        keys = set(self.entries) | set(other.entries)
        return all((self.entry(k) - other.entry(k)).is_zero() for k in keys)

    __hash__ = None

    def max_abs(self) -> float:
        return max((abs(v) for v in self.entries.values()), default=0.0)

    def __repr__(self):
        inner = ", ".join(f"{k}: {v.text()}" for k, v in sorted(self.entries.items()))
        return f"SymTensor(n={self.n}, d={self.d}, {{{inner}}})"


# -- conversions --------------------------------------------------------------


def gram_tensor(f: Form) -> SymTensor:
    entries = {}
    for exps, c in f.coeffs.items():
        idx = exponents_to_index(exps)
        entries[idx] = c / multinomial(f.d, exps)
    return SymTensor(f.cfg, f.n, f.d, entries)


def form_from_gram(a: SymTensor) -> Form:
    coeffs = {}
    for idx, v in a.entries.items():
        exps = index_to_exponents(idx, a.n)
        coeffs[exps] = v * multinomial(a.d, exps)
    return Form(a.cfg, a.n, a.d, coeffs)


# -- tensor operations ---------------------------------------------------------


def congruence(a: SymTensor, p: Matrix) -> SymTensor:
    """The Gram tensor of f(P y): successive mode products with P."""
    cfg = common_config(a.cfg, p.cfg)
    a = a.embed(cfg)
    p = p.embed(cfg)
    if p.nrows != a.n:
        raise DimensionMismatchError(
            f"matrix has {p.nrows} rows but the tensor has {a.n} variables")
    m = p.ncols
    dense = {}
    for idx, v in a.entries.items():
        for perm in set(permutations(idx)):
            dense[perm] = v
    for mode in range(a.d):
        new = {}
        for key, v in dense.items():
            if v.is_zero():
                continue
            i = key[mode]
            row = p.data[i - 1]
            for j in range(m):
                pij = row[j]
                if pij.is_zero():
                    continue
                nk = key[:mode] + (j + 1,) + key[mode + 1:]
                prev = new.get(nk)
                new[nk] = v * pij if prev is None else prev + v * pij
        dense = new
    entries = {}
    for idx in combinations_with_replacement(range(1, m + 1), a.d):
        v = dense.get(idx)
        if v is not None and not v.is_zero():
            entries[idx] = v
    return SymTensor(cfg, m, a.d, entries)


def slice_matrix(a: SymTensor, tail) -> Matrix:
    """The n x n matrix fixing the last d-2 indices of the tensor."""
    tail = tuple(int(i) for i in tail)
    if len(tail) != a.d - 2:
        raise DimensionMismatchError(
            f"tail length {len(tail)} != d-2 = {a.d - 2}")
    if any(i < 1 or i > a.n for i in tail):
        raise IndexRangeError(f"tail {tail} out of 1..{a.n}")
    rows = [[a.entry((i, j) + tail) for j in range(1, a.n + 1)]
            for i in range(1, a.n + 1)]
    return Matrix(a.cfg, rows)


def hessian_at(f: Form, point) -> Matrix:
    """The symmetric matrix of second partial derivatives at a point."""
    cfg = f.cfg
    point = [cfg.scalar(x) for x in point]
    if len(point) != f.n:
        raise DimensionMismatchError("point length mismatch")
    h = [[cfg.zero for _ in range(f.n)] for _ in range(f.n)]
    for exps, c in f.coeffs.items():
        for i in range(f.n):
            ei = exps[i]
            if ei == 0:
                continue
            for j in range(i, f.n):
                factor = ei * (exps[j] - (1 if i == j else 0))
                if factor == 0:
                    continue
                term = c * factor
                for k in range(f.n):
                    e = exps[k] - (1 if k == i else 0) - (1 if k == j else 0)
                    if e:
                        term = term * point[k] ** e
                h[i][j] = h[i][j] + term
                if i != j:
                    h[j][i] = h[j][i] + term
    return Matrix(cfg, h)


# -- parsing -------------------------------------------------------------------

_VAR_RE = re.compile(r"x(\d+)(?:\^(\d+))?\Z")


def _split_top(text: str, seps: str):
    """Split at top-level separator characters, keeping them."""
    parts = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise FormSyntaxError(f"unbalanced ')' in {text!r}")
        if depth == 0 and ch in seps:
            parts.append("".join(cur))
            parts.append(ch)
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise FormSyntaxError(f"unbalanced '(' in {text!r}")
    parts.append("".join(cur))
    return parts


def parse_form(text: str, cfg: FieldConfig, n: int = None) -> Form:
    """Parse a polynomial in x1..xn with scalar-literal coefficients."""
    src = text.replace("−", "-").strip()
    if not src:
        raise FormSyntaxError("empty polynomial")
    pieces = _split_top(src, "+-")
    terms = []
    sign = 1
    for piece in pieces:
        if piece == "+":
            continue
        if piece == "-":
            sign = -sign
            continue
        if piece.strip():
            terms.append((sign, piece.strip()))
            sign = 1
    if not terms:
        raise FormSyntaxError(f"no terms in {text!r}")
    monomials = []
    max_var = 0
    for sign, term in terms:
        factors = [p.strip() for p in _split_top(term, "*") if p not in ("*",)]
        factors = [p for p in factors if p]
        if not factors:
            raise FormSyntaxError(f"empty term in {text!r}")
        exps = {}
        coeff_parts = []
        for fac in factors:
            m = _VAR_RE.match(fac)
            if m:
                var = int(m.group(1))
                if var < 1:
                    raise FormSyntaxError(f"bad variable {fac!r}")
                e = int(m.group(2)) if m.group(2) else 1
                exps[var] = exps.get(var, 0) + e
                max_var = max(max_var, var)
            else:
                coeff_parts.append(fac)
        coeff = parse_scalar("*".join(coeff_parts), cfg) if coeff_parts else cfg.one
        if sign < 0:
            coeff = -coeff
        monomials.append((exps, coeff))
    width = n if n is not None else max_var
    if width < max_var:
        raise FormSyntaxError(
            f"variable x{max_var} exceeds the declared count {n}")
    if width == 0:
        raise DegreeTooLowError("constant polynomial")
    degrees = {sum(e.values()) for e, _ in monomials}
    if len(degrees) > 1:
        raise NotHomogeneousError(
            f"mixed degrees {sorted(degrees)} in {text!r}")
    d = degrees.pop()
    if d < 3:
        raise DegreeTooLowError(f"degree {d} is below 3")
    coeffs = {}
    for exps, c in monomials:
        key = tuple(exps.get(v, 0) for v in range(1, width + 1))
        prev = coeffs.get(key)
        coeffs[key] = c if prev is None else prev + c
    form = Form(cfg, width, d, coeffs)
    if form.is_zero():
        raise FormSyntaxError("the polynomial cancels to zero")
    return form


# -- printing ------------------------------------------------------------------


def _coeff_prefix(c: Scalar) -> str:
    """Coefficient text ready for '*x...' concatenation, '' for 1, '-' for -1."""
    text = scalar_text(c)
    if text == "1":
        return ""
    if text == "-1":
        return "-"
    if " + " in text or " - " in text:
        return f"({text})*"
    return f"{text}*"


def linear_text(row, cfg) -> str:
    """Render a linear form given by a coefficient vector."""
    parts = []
    for i, c in enumerate(row, start=1):
        c = cfg.scalar(c)
        if c.is_zero():
            continue
        prefix = _coeff_prefix(c)
        parts.append(f"{prefix}x{i}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def form_text(f: Form) -> str:
    """Canonical text: monomials in descending lexicographic exponent order."""
    if not f.coeffs:
        return "0"
    parts = []
    for exps in sorted(f.coeffs, reverse=True):
        c = f.coeffs[exps]
        vars_txt = "*".join(
            f"x{i}^{e}" if e > 1 else f"x{i}"
            for i, e in enumerate(exps, start=1) if e
        )
        parts.append(f"{_coeff_prefix(c)}{vars_txt}")
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out
