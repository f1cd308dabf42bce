"""Scalar arithmetic for the exact and floating working fields.

Exact scalars live in a tower Q(sqrt(m1), ..., sqrt(mk)) with squarefree,
multiplicatively independent integer radicands.  An element is a dense
vector of 2^k rationals over the basis of subset products of the adjoined
square roots, with a multiplication table precomputed at configuration
time.  Float scalars are plain complex numbers governed by one tolerance.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

from sympy import factorint

from .errors import ConfigError, FormSyntaxError, UnknownRadicalError


def _is_perfect_square(x: int) -> bool:
    return x >= 0 and math.isqrt(x) ** 2 == x


def squarefree_part(q) -> int:
    """Squarefree integer s (sign included) with q = s * (rational square)."""
    q = Fraction(q)
    n = q.numerator * q.denominator
    if n == 0:
        raise ValueError("zero has no squarefree part")
    s = -1 if n < 0 else 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            s *= p
    return s


class FieldConfig:
    """The working field: a quadratic radical tower over Q, or complex floats.

    ``adjoined`` lists the squarefree radicands; the tower is a field
    exactly when no nonempty subset of them multiplies to a perfect
    square, which is validated here.  ``max_adjoin`` budgets automatic
    extensions requested while splitting idempotents.
    """

    __slots__ = (
        "mode",
        "adjoined",
        "tolerance",
        "max_adjoin",
        "auto_adjoined",
        "dim",
        "_mul_coef",
        "_conj_flip",
        "_basis_values",
        "_zero",
        "_one",
    )

    def __init__(self, mode="exact", adjoined=(), tolerance=1e-9, max_adjoin=2,
                 _auto_adjoined=0):
        if mode not in ("exact", "float"):
            raise ConfigError(f"unknown mode {mode!r}")
        adjoined = tuple(int(m) for m in adjoined)
        if mode == "float" and adjoined:
            raise ConfigError("float mode does not adjoin radicals")
        if tolerance < 0:
            raise ConfigError("tolerance must be nonnegative")
        if max_adjoin < 0:
            raise ConfigError("max_adjoin must be nonnegative")
        for m in adjoined:
            if m in (0, 1):
                raise ConfigError(f"cannot adjoin sqrt({m})")
            if abs(m) > 1 and any(e > 1 for e in factorint(abs(m)).values()):
                raise ConfigError(f"radicand {m} is not squarefree")
        if len(set(adjoined)) != len(adjoined):
            raise ConfigError("radicands must be pairwise distinct")
        k = len(adjoined)
        for mask in range(1, 1 << k):
            prod = 1
            for i in range(k):
                if mask >> i & 1:
                    prod *= adjoined[i]
            if _is_perfect_square(prod):
                raise ConfigError(
                    "radicands are multiplicatively dependent: the product of "
                    f"{[adjoined[i] for i in range(k) if mask >> i & 1]} is a square"
                )
        self.mode = mode
        self.adjoined = adjoined
        self.tolerance = float(tolerance)
        self.max_adjoin = int(max_adjoin)
        self.auto_adjoined = int(_auto_adjoined)
        self.dim = 1 << k
        if mode == "exact":
            coef = [[1] * self.dim for _ in range(self.dim)]
            for b in range(self.dim):
                for c in range(self.dim):
                    p = 1
                    common = b & c
                    for i in range(k):
                        if common >> i & 1:
                            p *= adjoined[i]
                    coef[b][c] = p
            self._mul_coef = coef
            flip = [False] * self.dim
            vals = [complex(1)] * self.dim
            for b in range(self.dim):
                neg = 0
                v = complex(1)
                for i in range(k):
                    if b >> i & 1:
                        if adjoined[i] < 0:
                            neg += 1
                        v *= cmath.sqrt(complex(adjoined[i]))
                flip[b] = bool(neg % 2)
                vals[b] = v
            self._conj_flip = flip
            self._basis_values = vals
            self._zero = Scalar._exact(self, (Fraction(0),) * self.dim)
            one = [Fraction(0)] * self.dim
            one[0] = Fraction(1)
            self._one = Scalar._exact(self, tuple(one))
        else:
            self._mul_coef = None
            self._conj_flip = None
            self._basis_values = None
            self._zero = Scalar._float(self, 0j)
            self._one = Scalar._float(self, 1 + 0j)

    def _signature(self):
        return (self.mode, self.adjoined, self.tolerance)

    def __eq__(self, other):
        return isinstance(other, FieldConfig) and self._signature() == other._signature()

    def __hash__(self):
        return hash(self._signature())

    def __repr__(self):
        if self.mode == "float":
            return f"FieldConfig(mode='float', tolerance={self.tolerance})"
        return f"FieldConfig(adjoined={list(self.adjoined)})"

    def field_text(self) -> str:
        if self.mode == "float":
            return "C(float)"
        if not self.adjoined:
            return "Q"
        inner = ",".join(f"sqrt({m})" for m in self.adjoined)
        return f"Q({inner})"

    @property
    def zero(self) -> "Scalar":
        return self._zero

    @property
    def one(self) -> "Scalar":
        return self._one

    @property
    def auto_extensions_left(self) -> int:
        return max(0, self.max_adjoin - self.auto_adjoined)

    def extend(self, m: int, auto: bool = False) -> "FieldConfig":
        """New config with sqrt(m) adjoined; ``auto`` draws on the budget."""
        if self.mode != "exact":
            raise ConfigError("only exact towers can be extended")
        if auto and self.auto_extensions_left <= 0:
            raise ConfigError("automatic extension budget exhausted")
        return FieldConfig(
            "exact",
            self.adjoined + (int(m),),
            self.tolerance,
            self.max_adjoin,
            _auto_adjoined=self.auto_adjoined + (1 if auto else 0),
        )

    def scalar(self, x) -> "Scalar":
        """Coerce an int, Fraction, float/complex (float mode) or Scalar."""
        if isinstance(x, Scalar):
            return self.embed(x)
        if isinstance(x, (int, Fraction)):
            if self.mode == "exact":
                coords = [Fraction(0)] * self.dim
                coords[0] = Fraction(x)
                return Scalar._exact(self, tuple(coords))
            return Scalar._float(self, complex(x))
        if isinstance(x, (float, complex)):
            if self.mode == "float":
                return Scalar._float(self, complex(x))
            raise ConfigError("exact mode accepts only rational scalars")
        if isinstance(x, str):
            return parse_scalar(x, self)
        raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")

    def radical(self, m: int) -> "Scalar":
        """The value sqrt(m) as a scalar of this field."""
        m = int(m)
        if m == 0:
            return self.zero
        if self.mode == "float":
            return Scalar._float(self, cmath.sqrt(complex(m)))
        s = squarefree_part(Fraction(m))
        t = math.isqrt(m // s)
        if s == 1:
            return self.scalar(t)
        for mask in range(1, self.dim):
            prod = 1
            for i in range(len(self.adjoined)):
                if mask >> i & 1:
                    prod *= self.adjoined[i]
            if squarefree_part(Fraction(prod)) == s and _is_perfect_square(prod // s):
                # basis element sqrt(prod) equals isqrt(prod//s) * sqrt(s)
                coords = [Fraction(0)] * self.dim
                coords[mask] = Fraction(t, math.isqrt(prod // s))
                return Scalar._exact(self, tuple(coords))
        raise UnknownRadicalError(f"sqrt({m}) is not in {self.field_text()}")

    def embed(self, s: "Scalar") -> "Scalar":
        """Map a scalar of a subtower into this field."""
        if s.cfg == self:
            return s
        if self.mode == "float":
            if s.cfg.mode == "float":
                return Scalar._float(self, s.z)
            return Scalar._float(self, s.to_complex())
        if s.cfg.mode != "exact":
            raise ConfigError("cannot embed a float scalar into an exact tower")
        try:
            pos = [self.adjoined.index(m) for m in s.cfg.adjoined]
        except ValueError:
            raise ConfigError(
                f"{s.cfg.field_text()} does not embed into {self.field_text()}"
            ) from None
        coords = [Fraction(0)] * self.dim
        for mask, q in enumerate(s.coords):
            if q:
                new_mask = 0
                for i, p in enumerate(pos):
                    if mask >> i & 1:
                        new_mask |= 1 << p
                coords[new_mask] += q
        return Scalar._exact(self, tuple(coords))


def common_config(a: FieldConfig, b: FieldConfig) -> FieldConfig:
    """The larger of two compatible configs (one tower containing the other)."""
    if a == b:
        return a
    if set(a.adjoined) <= set(b.adjoined) and a.mode == b.mode:
        return b
    if set(b.adjoined) <= set(a.adjoined) and a.mode == b.mode:
        return a
    raise ConfigError(f"incompatible fields {a.field_text()} and {b.field_text()}")


class Scalar:
    """An element of the configured field.  Immutable."""

    __slots__ = ("cfg", "coords", "z")

    @staticmethod
    def _exact(cfg, coords) -> "Scalar":
        s = object.__new__(Scalar)
        s.cfg = cfg
        s.coords = coords
        s.z = None
        return s

    @staticmethod
    def _float(cfg, z) -> "Scalar":
        s = object.__new__(Scalar)
        s.cfg = cfg
        s.coords = None
        s.z = z
        return s

    def __init__(self, *args, **kwargs):
        raise TypeError("use FieldConfig.scalar() to build scalars")

    # -- coercion ---------------------------------------------------------

    def _pair(self, other):
        if isinstance(other, Scalar):
            if other.cfg == self.cfg:
                return self, other
            cfg = common_config(self.cfg, other.cfg)
            return cfg.embed(self), cfg.embed(other)
        if isinstance(other, (int, Fraction)):
            return self, self.cfg.scalar(other)
        if isinstance(other, (float, complex)) and self.cfg.mode == "float":
            return self, self.cfg.scalar(other)
        return self, None

    # -- predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        if self.coords is not None:
            return all(q == 0 for q in self.coords)
        return abs(self.z) <= self.cfg.tolerance

    def __bool__(self):
        return not self.is_zero()

    def is_real(self) -> bool:
        if self.coords is not None:
            flip = self.cfg._conj_flip
            return all(q == 0 for mask, q in enumerate(self.coords) if flip[mask])
        return abs(self.z.imag) <= self.cfg.tolerance

    def rational(self):
        """The value as a Fraction if it is rational, else None."""
        if self.coords is not None:
            if all(q == 0 for q in self.coords[1:]):
                return self.coords[0]
            return None
        if abs(self.z.imag) <= self.cfg.tolerance:
            return Fraction(self.z.real).limit_denominator(10**12)
        return None

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        if a.coords is not None:
            return Scalar._exact(a.cfg, tuple(x + y for x, y in zip(a.coords, b.coords)))
        return Scalar._float(a.cfg, a.z + b.z)

    __radd__ = __add__

    def __neg__(self):
        if self.coords is not None:
            return Scalar._exact(self.cfg, tuple(-x for x in self.coords))
        return Scalar._float(self.cfg, -self.z)

    def __sub__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        if a.coords is not None:
            return Scalar._exact(a.cfg, tuple(x - y for x, y in zip(a.coords, b.coords)))
        return Scalar._float(a.cfg, a.z - b.z)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        if a.coords is not None:
            coef = a.cfg._mul_coef
            out = [Fraction(0)] * a.cfg.dim
            for i, x in enumerate(a.coords):
                if x:
                    for j, y in enumerate(b.coords):
                        if y:
                            out[i ^ j] += x * y * coef[i][j]
            return Scalar._exact(a.cfg, tuple(out))
        return Scalar._float(a.cfg, a.z * b.z)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.coords is not None:
            if self.is_zero():
                raise ZeroDivisionError("inverse of zero")
            dim = self.cfg.dim
            if dim == 1:
                return Scalar._exact(self.cfg, (1 / self.coords[0],))
            coef = self.cfg._mul_coef
            # multiplication-by-self matrix: column j holds self * e_j
            m = [[Fraction(0)] * (dim + 1) for _ in range(dim)]
            for b, x in enumerate(self.coords):
                if x:
                    for j in range(dim):
                        m[b ^ j][j] += x * coef[b][j]
            m[0][dim] = Fraction(1)
            sol = _solve_fraction_system(m, dim)
            if sol is None:
                raise ZeroDivisionError("element is not invertible")
            return Scalar._exact(self.cfg, tuple(sol))
        if abs(self.z) <= self.cfg.tolerance:
            raise ZeroDivisionError("inverse of zero")
        return Scalar._float(self.cfg, 1 / self.z)

    def __truediv__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        out = self.cfg.one
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conj(self) -> "Scalar":
        """Complex conjugation: negates sqrt(m) for m < 0."""
        if self.coords is not None:
            flip = self.cfg._conj_flip
            return Scalar._exact(
                self.cfg,
                tuple(-q if flip[mask] else q for mask, q in enumerate(self.coords)),
            )
        return Scalar._float(self.cfg, self.z.conjugate())

    # -- comparison / conversion ------------------------------------------

    def __eq__(self, other):
        a, b = self._pair(other)
        if b is None:
            return NotImplemented
        return (a - b).is_zero()

    __hash__ = None

    def __abs__(self) -> float:
        return abs(self.to_complex())

    def to_complex(self) -> complex:
        if self.coords is not None:
            return sum(
                (complex(q) * v for q, v in zip(self.coords, self.cfg._basis_values)),
                start=0j,
            )
        return self.z

    def text(self) -> str:
        return scalar_text(self)

    def __repr__(self):
        return f"Scalar({self.text()})"


def _solve_fraction_system(m, dim):
    """Solve the dim x dim fraction system held in augmented rows of m."""
    rows = [r[:] for r in m]
    for col in range(dim):
        piv = next((r for r in range(col, dim) if rows[r][col] != 0), None)
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(dim):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [rows[r][dim] for r in range(dim)]


# -- square roots in the tower ---------------------------------------------


class NeedsExtension:
    """Returned by try_sqrt when the root lies outside the current tower.

    ``radicand`` is the squarefree integer whose square root must be
    adjoined, or a tower element when no integer radicand suffices.
    """

    __slots__ = ("radicand",)

    def __init__(self, radicand):
        self.radicand = radicand

    @property
    def is_integer(self) -> bool:
        return isinstance(self.radicand, int)

    def __repr__(self):
        r = self.radicand if self.is_integer else self.radicand.text()
        return f"NeedsExtension(sqrt({r}))"

    def __eq__(self, other):
        return (
            isinstance(other, NeedsExtension)
            and self.is_integer == other.is_integer
            and self.radicand == other.radicand
        )


def _co_mul(a, b, coef):
    out = [Fraction(0)] * len(a)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i ^ j] += x * y * coef[i][j]
    return tuple(out)


def _co_inv(a, coef):
    dim = len(a)
    if dim == 1:
        return (1 / a[0],)
    m = [[Fraction(0)] * (dim + 1) for _ in range(dim)]
    for b, x in enumerate(a):
        if x:
            for j in range(dim):
                m[b ^ j][j] += x * coef[b][j]
    m[0][dim] = Fraction(1)
    sol = _solve_fraction_system(m, dim)
    if sol is None:
        raise ZeroDivisionError
    return tuple(sol)


def _sqrt_coords(co, level, adjoined, coef):
    """Recursive square root over the subtower of the first ``level`` radicands.

    Returns ("ok", coords) or ("need", payload) where payload is a
    squarefree int or a coordinate tuple (an element of the tower).
    """
    if level == 0:
        q = co[0]
        if q == 0:
            return "ok", (Fraction(0),)
        s = squarefree_part(q)
        if s == 1:
            return "ok", (Fraction(math.isqrt(q.numerator), math.isqrt(q.denominator)),)
        return "need", s
    half = 1 << (level - 1)
    u, v = co[:half], co[half:]
    m = adjoined[level - 1]
    if all(x == 0 for x in v):
        st, val = _sqrt_coords(u, level - 1, adjoined, coef)
        if st == "ok":
            return "ok", val + (Fraction(0),) * half
        st2, val2 = _sqrt_coords(tuple(x / m for x in u), level - 1, adjoined, coef)
        if st2 == "ok":
            return "ok", (Fraction(0),) * half + val2
        return "need", val
    disc = tuple(
        x - m * y for x, y in zip(_co_mul(u, u, coef), _co_mul(v, v, coef))
    )
    st, w = _sqrt_coords(disc, level - 1, adjoined, coef)
    if st != "ok":
        return "need", w
    fallback = None
    for ww in (w, tuple(-x for x in w)):
        cand = tuple((x + y) / 2 for x, y in zip(u, ww))
        st2, s_val = _sqrt_coords(cand, level - 1, adjoined, coef)
        if st2 == "ok":
            if all(x == 0 for x in s_val):
                continue
            t_val = _co_mul(v, _co_inv(tuple(2 * x for x in s_val), coef), coef)
            return "ok", s_val + t_val
        if fallback is None:
            fallback = s_val
    return "need", fallback


def try_sqrt(a: Scalar, cfg: FieldConfig = None):
    """A square root of ``a`` in the tower, or a NeedsExtension certificate."""
    cfg = cfg or a.cfg
    a = cfg.embed(a)
    if cfg.mode == "float":
        return Scalar._float(cfg, cmath.sqrt(a.z))
    k = len(cfg.adjoined)
    st, val = _sqrt_coords(a.coords, k, cfg.adjoined, cfg._mul_coef)
    if st == "ok":
        root = Scalar._exact(cfg, tuple(val) + (Fraction(0),) * (cfg.dim - len(val)))
        assert (root * root - a).is_zero()
        return root
    if isinstance(val, int):
        return NeedsExtension(val)
    elt = Scalar._exact(cfg, tuple(val) + (Fraction(0),) * (cfg.dim - len(val)))
    return NeedsExtension(elt)


# -- text -------------------------------------------------------------------


def _basis_text(cfg, mask):
    parts = [f"sqrt({cfg.adjoined[i]})" for i in range(len(cfg.adjoined)) if mask >> i & 1]
    return "*".join(parts)


def scalar_text(s: Scalar) -> str:
    """Canonical text: a sum of rational multiples of radical products."""
    if s.coords is None:
        z = s.z
        if z.imag == 0:
            return repr(z.real)
        return repr(z)
    parts = []
    for mask, q in enumerate(s.coords):
        if q == 0:
            continue
        basis = _basis_text(s.cfg, mask)
        if not basis:
            parts.append(str(q))
        elif q == 1:
            parts.append(basis)
        elif q == -1:
            parts.append("-" + basis)
        else:
            parts.append(f"{q}*{basis}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


# -- scalar literal parsing --------------------------------------------------

_NUMBER = "0123456789"


class _ScalarParser:
    def __init__(self, text, cfg):
        self.text = text.replace("−", "-")
        self.cfg = cfg
        self.i = 0

    def error(self, msg):
        raise FormSyntaxError(f"{msg} at position {self.i} in {self.text!r}")

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self):
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def parse_sum(self):
        value = self.parse_term()
        while self.peek() and self.peek() in "+-":
            op = self.text[self.i]
            self.i += 1
            rhs = self.parse_term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def parse_term(self):
        sign = 1
        while self.peek() and self.peek() in "+-":
            if self.text[self.i] == "-":
                sign = -sign
            self.i += 1
        value = self.parse_factor()
        while self.peek() == "*":
            self.i += 1
            value = value * self.parse_factor()
        return value if sign > 0 else -value

    def parse_factor(self):
        ch = self.peek()
        if ch == "(":
            self.i += 1
            value = self.parse_sum()
            if self.peek() != ")":
                self.error("expected ')'")
            self.i += 1
            return value
        if self.text.startswith("sqrt", self.i):
            self.i += 4
            if self.peek() != "(":
                self.error("expected '(' after sqrt")
            self.i += 1
            neg = False
            while self.peek() and self.peek() in "+-":
                if self.text[self.i] == "-":
                    neg = not neg
                self.i += 1
            m = self.parse_integer()
            if self.peek() != ")":
                self.error("expected ')' after sqrt radicand")
            self.i += 1
            return self.cfg.radical(-m if neg else m)
        if ch and ch in _NUMBER:
            num = self.parse_number()
            if self.peek() == "/":
                self.i += 1
                den = self.parse_number()
                if den == 0:
                    self.error("division by zero")
                return self.cfg.scalar(Fraction(num) / Fraction(den))
            return self.cfg.scalar(num)
        self.error("expected a scalar factor")

    def parse_integer(self):
        self.skip()
        start = self.i
        while self.i < len(self.text) and self.text[self.i] in _NUMBER:
            self.i += 1
        if start == self.i:
            self.error("expected an integer")
        return int(self.text[start:self.i])

    def parse_number(self):
        self.skip()
        start = self.i
        while self.i < len(self.text) and self.text[self.i] in _NUMBER:
            self.i += 1
        if self.i < len(self.text) and self.text[self.i] == ".":
            self.i += 1
            while self.i < len(self.text) and self.text[self.i] in _NUMBER:
                self.i += 1
        if start == self.i:
            self.error("expected a number")
        tok = self.text[start:self.i]
        return Fraction(tok)


def parse_scalar(text: str, cfg: FieldConfig) -> Scalar:
    """Parse a scalar literal: rationals, decimals, sqrt(m), sums, products."""
    p = _ScalarParser(text, cfg)
    value = p.parse_sum()
    p.skip()
    if p.i != len(p.text):
        p.error("unexpected trailing input")
    return value
