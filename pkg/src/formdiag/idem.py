"""Splitting the unit of the center into orthogonal idempotents.

A random element R of the center is split through its minimal polynomial:
the polynomial is factored into pairwise coprime components over the
current tower (linear factors by rational factorization, quadratics by
taking the square root of the discriminant, automatic quadratic
extensions within budget) and the partial-fraction identity turns each
component into an idempotent g(R).  Failure modes are certificates, not
errors: quadratic factors needing an extension, residual factors of
degree three or more, and nilpotents detected by repeated factors.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import upoly
from .center import CenterBasis
from .errors import ConfigError, NotClosedError
from .fields import FieldConfig, squarefree_part
from .linalg import Matrix


def min_poly(x: Matrix):
    """Monic minimal polynomial, from the first dependence among powers."""
    cfg = x.cfg
    n = x.nrows
    power = Matrix.identity(cfg, n)
    vectors = [power.vectorize()]
    while True:
        power = power * x
        target = power.vectorize()
        sol = Matrix.from_columns(cfg, vectors).solve(target)
        if sol is not None:
            return [-c for c in sol] + [cfg.one]
        vectors.append(target)


def is_rank1_trace1(e) -> bool:
    """Rank 1 and trace 1, hence a primitive idempotent candidate."""
    if not isinstance(e, Matrix):
        raise TypeError("expected a Matrix")
    return e.rank() == 1 and (e.trace() - e.cfg.one).is_zero()


def mult_table(z: CenterBasis):
    """Structure constants of the center: coordinates of each basis product.

    Raises NotClosedError when a product leaves the span, which signals a
    degenerate input or a bug upstream.
    """
    cols = Matrix.from_columns(z.cfg, z.vectors())
    table = {}
    for i, bi in enumerate(z.basis):
        for j, bj in enumerate(z.basis):
            sol = cols.solve((bi * bj).vectorize())
            if sol is None:
                raise NotClosedError(
                    f"product of basis elements {i} and {j} is outside the span")
            table[i, j] = sol
    return table


@dataclass
class FactorComponent:
    """One pairwise-coprime component p^multiplicity of the minimal polynomial."""

    poly: list
    multiplicity: int
    proven_irreducible: bool
    note: str = ""

    @property
    def degree(self) -> int:
        return upoly.degree(self.poly)

    @property
    def dim(self) -> int:
        return self.degree * self.multiplicity

    def text(self) -> str:
        base = upoly.poly_text(self.poly)
        return base if self.multiplicity == 1 else f"({base})^{self.multiplicity}"


@dataclass
class IdempotentSplit:
    """A complete set of orthogonal idempotents plus certificates."""

    idempotents: list
    ranks: list
    components: list
    cfg: FieldConfig
    element: Matrix
    min_polynomial: list
    nilpotent_witness: Matrix = None
    extension_requests: list = field(default_factory=list)
    irreducible_certificates: list = field(default_factory=list)
    auto_adjoined: list = field(default_factory=list)
    complete: bool = True

    @property
    def semisimple_certificate(self) -> str:
        return "squarefree" if self.nilpotent_witness is None else "nilpotent_witness"


@dataclass
class _Attempt:
    components: list
    requests: list
    notes: list
    adjoined: list
    cfg: FieldConfig
    element: Matrix
    min_polynomial: list


def _factor_over_field(mu, cfg):
    """Pairwise-coprime components of a monic polynomial over the tower.

    Linear factors come from rational factorization (or directly over the
    tower for quadratics via the discriminant); anything else is kept
    whole with a certificate.  Returns (components, requests, notes,
    adjoin_candidate) where the candidate is a squarefree integer whose
    adjunction would split a stuck quadratic.
    """
    components = []
    requests = []
    notes = []
    candidate = None

    if upoly.is_rational(mu):
        base = upoly.factor_rational(mu, cfg)
        rational_cert = True
    else:
        base = upoly.squarefree_decomposition(mu, cfg)
        rational_cert = False

    for p, e in base:
        deg = upoly.degree(p)
        if deg == 1:
            components.append(FactorComponent(p, e, True))
            continue
        if deg == 2:
            status, payload = upoly.quadratic_roots(p, cfg)
            if status == "roots":
                for root in payload:
                    components.append(
                        FactorComponent([-root, cfg.one], e, True))
                continue
            requests.append(payload)
            if payload.is_integer and candidate is None:
                candidate = payload.radicand
            components.append(FactorComponent(
                p, e, True,
                note=f"irreducible over {cfg.field_text()}; "
                     f"needs sqrt({payload.radicand if payload.is_integer else payload.radicand.text()})"))
            continue
        if rational_cert and not cfg.adjoined:
            note = (f"irreducible factor of degree {deg} over Q; quadratic "
                    "extensions cannot resolve it")
            components.append(FactorComponent(p, e, True, note=note))
        elif rational_cert:
            note = (f"factor of degree {deg} irreducible over Q; not examined "
                    f"over {cfg.field_text()}")
            components.append(FactorComponent(p, e, False, note=note))
        else:
            note = (f"unresolved factor of degree {deg} with coefficients in "
                    f"{cfg.field_text()}")
            components.append(FactorComponent(p, e, False, note=note))
        notes.append(components[-1].note)
    components.sort(key=lambda c: (c.degree, c.multiplicity, c.text()))
    return components, requests, notes, candidate


def _attempt_split(z: CenterBasis, cfg: FieldConfig, coords) -> _Attempt:
    """One splitting attempt, auto-adjoining while the budget allows."""
    adjoined = []
    while True:
        basis = z.embed(cfg).basis
        r = Matrix.zeros(cfg, z.n, z.n)
        for c, b in zip(coords, basis):
            if c:
                r = r + b * cfg.scalar(c)
        mu = min_poly(r)
        components, requests, notes, candidate = _factor_over_field(mu, cfg)
        if candidate is not None and cfg.mode == "exact" and cfg.auto_extensions_left > 0:
            try:
                cfg = cfg.extend(candidate, auto=True)
            except ConfigError:
                notes.append(f"cannot adjoin sqrt({candidate})")
                return _Attempt(components, requests, notes, adjoined, cfg, r, mu)
            adjoined.append(candidate)
            continue
        return _Attempt(components, requests, notes, adjoined, cfg, r, mu)


def split_idempotents(z: CenterBasis, cfg: FieldConfig = None, retries: int = 8,
                      seed: int = 0, rng: random.Random = None) -> IdempotentSplit:
    """Split the identity of the center into orthogonal idempotents.

    Retries with fresh random elements until the component count matches
    the center dimension or the budget runs out, keeping the finest
    attempt.  Every returned idempotent set is verified exactly
    (pairwise products vanish and the sum is the identity).
    """
    cfg = cfg or z.cfg
    z = z.embed(cfg)
    rng = rng or random.Random(seed)
    if cfg.mode == "float":
        return _split_float(z, cfg, retries, rng)
    ident = Matrix.identity(cfg, z.n)
    if z.dim == 1:
        comp = FactorComponent([-cfg.one, cfg.one], 1, True)
        return IdempotentSplit([ident], [z.n], [comp], cfg, ident,
                               [-cfg.one, cfg.one])
    best = None
    for _ in range(max(1, retries)):
        coords = [rng.randint(-5, 5) for _ in range(z.dim)]
        if not any(coords):
            coords[0] = 1
        attempt = _attempt_split(z, cfg, coords)
        if best is None or len(attempt.components) > len(best.components):
            best = attempt
        if len(best.components) >= z.dim:
            break
    out_cfg = best.cfg
    ident = Matrix.identity(out_cfg, z.n)
    mu = best.min_polynomial
    comps = best.components
    if len(comps) == 1:
        idempotents = [ident]
    else:
        idempotents = []
        for j, comp in enumerate(comps):
            f_j = upoly.power(comp.poly, comp.multiplicity, out_cfg)
            g_j, rem = upoly.divmod_poly(mu, f_j, out_cfg)
            assert not rem, "component does not divide the minimal polynomial"
            gcd_poly, s, _ = upoly.ext_gcd(g_j, f_j, out_cfg)
            assert upoly.degree(gcd_poly) == 0
            h = upoly.mul(s, g_j, out_cfg)
            _, h = upoly.divmod_poly(h, mu, out_cfg)
            idempotents.append(upoly.eval_matrix(h, best.element))
        total = Matrix.zeros(out_cfg, z.n, z.n)
        for e in idempotents:
            assert (e * e - e).is_zero(), "idempotent verification failed"
            total = total + e
        assert (total - ident).is_zero(), "idempotents do not sum to the identity"
        for i in range(len(idempotents)):
            for j in range(i + 1, len(idempotents)):
                assert (idempotents[i] * idempotents[j]).is_zero()
    order = sorted(range(len(comps)),
                   key=lambda i: (idempotents[i].rank(), comps[i].text()))
    idempotents = [idempotents[i] for i in order]
    comps = [comps[i] for i in order]
    ranks = [e.rank() for e in idempotents]
    witness = None
    if any(c.multiplicity > 1 for c in comps):
        radical = [out_cfg.one]
        for c in comps:
            radical = upoly.mul(radical, c.poly, out_cfg)
        witness = upoly.eval_matrix(radical, best.element)
        assert not witness.is_zero(), "radical of the minimal polynomial vanished"
        power = witness
        for _ in range(z.n):
            if power.is_zero():
                break
            power = power * witness
        assert power.is_zero(), "claimed nilpotent is not nilpotent"
    return IdempotentSplit(
        idempotents=idempotents,
        ranks=ranks,
        components=comps,
        cfg=out_cfg,
        element=best.element,
        min_polynomial=mu,
        nilpotent_witness=witness,
        extension_requests=best.requests,
        irreducible_certificates=best.notes,
        auto_adjoined=best.adjoined,
        complete=sum(c.dim for c in comps) == z.dim,
    )


def _split_float(z: CenterBasis, cfg: FieldConfig, retries: int,
                 rng: random.Random) -> IdempotentSplit:
    """Eigenvalue clustering replaces factorization in float mode."""
    import numpy as np

    ident = Matrix.identity(cfg, z.n)
    if z.dim == 1:
        comp = FactorComponent([-cfg.one, cfg.one], 1, True)
        return IdempotentSplit([ident], [z.n], [comp], cfg, ident,
                               [-cfg.one, cfg.one])
    best = None
    for _ in range(max(1, retries)):
        coords = [rng.randint(-5, 5) for _ in range(z.dim)]
        if not any(coords):
            coords[0] = 1
        r = Matrix.zeros(cfg, z.n, z.n)
        for c, b in zip(coords, z.basis):
            if c:
                r = r + b * cfg.scalar(c)
        arr = np.array([[x.to_complex() for x in row] for row in r.tolist()])
        eigs = sorted(np.linalg.eigvals(arr), key=lambda w: (w.real, w.imag))
        scale = max(1.0, max(abs(w) for w in eigs))
        ctol = max(cfg.tolerance, 1e-12) ** 0.5 * scale
        clusters = []
        for w in eigs:
            if clusters and abs(w - clusters[-1][0]) <= ctol:
                rep, size = clusters[-1]
                clusters[-1] = ((rep * size + w) / (size + 1), size + 1)
            else:
                clusters.append((w, 1))
        if best is None or len(clusters) > len(best[1]):
            best = (r, clusters)
        if len(clusters) >= z.dim:
            break
    r, clusters = best
    reps = [cfg.scalar(w) for w, _ in clusters]
    if len(clusters) == 1:
        idempotents = [ident]
    else:
        idempotents = []
        for j, rj in enumerate(reps):
            e = ident
            for i, ri in enumerate(reps):
                if i != j:
                    e = (e * r - e * ri) * (rj - ri).inverse()
            e = _newton_idempotent(e, ident, cfg)
            idempotents.append(e)
    components = [
        FactorComponent([-rep, cfg.one], size, True)
        for rep, size in zip(reps, (s for _, s in clusters))
    ]
    ranks = [e.rank() for e in idempotents]
    return IdempotentSplit(
        idempotents=idempotents,
        ranks=ranks,
        components=components,
        cfg=cfg,
        element=r,
        min_polynomial=None,
        complete=len(components) == z.dim,
    )


def _newton_idempotent(e: Matrix, ident: Matrix, cfg: FieldConfig) -> Matrix:
    """Polish an approximate idempotent with e <- 3e^2 - 2e^3."""
    for _ in range(40):
        e2 = e * e
        residual = max((abs(x) for x in (e2 - e).vectorize()), default=0.0)
        if residual <= cfg.tolerance:
            return e
        e = e2 * 3 - e2 * e * 2
    return e


@dataclass
class AlgebraFactor:
    """One factor of the center algebra, up to isomorphism data."""

    kind: str
    dim: int
    polynomial: list = None
    multiplicity: int = 1
    disc_class: int = None
    proven: bool = True
    note: str = ""

    def text(self, base: str = "Q") -> str:
        if self.kind == "ground":
            return base
        if self.kind == "quadratic_field" and self.disc_class is not None:
            return f"{base}(sqrt({self.disc_class}))"
        body = upoly.poly_text(self.polynomial) if self.polynomial else "?"
        if self.kind == "local":
            return f"{base}[t]/(({body})^{self.multiplicity})"
        return f"{base}[t]/({body})"


@dataclass
class AlgebraDescription:
    """The center as a product of factors over the base field."""

    factors: list
    complete: bool
    cfg: FieldConfig

    def text(self) -> str:
        base = self.cfg.field_text()
        body = " x ".join(f.text(base) for f in self.factors) or base
        return body if self.complete else body + " (incomplete)"

    def kinds(self):
        return [f.kind for f in self.factors]


def classify_algebra(z: CenterBasis, split: IdempotentSplit) -> AlgebraDescription:
    """Describe the center as a product of field and local factors."""
    cfg = split.cfg
    factors = []
    for comp in split.components:
        deg = comp.degree
        if comp.multiplicity > 1:
            factors.append(AlgebraFactor(
                "local", comp.dim, comp.poly, comp.multiplicity,
                proven=comp.proven_irreducible, note=comp.note))
        elif deg == 1:
            factors.append(AlgebraFactor("ground", 1, comp.poly))
        elif deg == 2:
            b, c = comp.poly[1], comp.poly[0]
            disc = b * b - cfg.scalar(4) * c
            disc_q = disc.rational()
            disc_class = squarefree_part(disc_q) if disc_q is not None else None
            factors.append(AlgebraFactor(
                "quadratic_field", 2, comp.poly, disc_class=disc_class,
                proven=comp.proven_irreducible, note=comp.note))
        else:
            factors.append(AlgebraFactor(
                "higher_degree", deg, comp.poly,
                proven=comp.proven_irreducible, note=comp.note))
    return AlgebraDescription(factors, split.complete, cfg)
