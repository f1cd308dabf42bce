"""The decomposition pipeline: rank reduction, center, idempotents, blocks.

decompose() strips the radical, computes the center of the nondegenerate
part, splits its unit into orthogonal idempotents, changes variables to
the column spaces of the idempotents and recurses on blocks whose center
still has dimension above one.  Rank-1 blocks become power-sum terms;
anything that cannot split over the current tower becomes a certified
leaf.  Verdicts are always computed; failure to diagonalize is an answer,
not an error.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .center import center_basis
from .errors import NotRealError, NotSquareError
from .fields import FieldConfig, NeedsExtension, try_sqrt
from .forms import Form, SymTensor, congruence, form_from_gram, gram_tensor, \
    slice_matrix
from .harness import add_forms, expand_powersum, substitute_linear
from .idem import AlgebraFactor, classify_algebra, split_idempotents
from .linalg import Matrix, block_diag
from .rank import reduce_nondegenerate


@dataclass
class Certificate:
    """A machine-checkable note attached to a verdict."""

    kind: str
    detail: str

    def __repr__(self):
        return f"Certificate({self.kind}: {self.detail})"


@dataclass
class Block:
    """One direct summand after the change of variables."""

    variables: tuple
    form: Form
    kind: str
    center_dim: int
    factors: list


@dataclass
class Decomposition:
    """Outcome of the pipeline; P satisfies f(P y) = diagonal/block form."""

    verdict: str
    n: int
    d: int
    rank: int
    cfg: FieldConfig
    P: Matrix
    lambdas: list = None
    L: Matrix = None
    blocks: list = None
    ortho: str = "not_applicable"
    scaling_in_field: bool = None
    center_dim: int = None
    center_factors: list = field(default_factory=list)
    certificates: list = field(default_factory=list)

    def center_text(self) -> str:
        base = self.cfg.field_text()
        return " x ".join(f.text(base) for f in self.center_factors) or base


@dataclass
class _Leaf:
    size: int
    kind: str
    center_dim: int
    factors: list
    certificates: list


def _ground_factor(cfg):
    return AlgebraFactor("ground", 1, [-cfg.one, cfg.one])


def _split_certificates(split, include_requests=True):
    certs = []
    for m in split.auto_adjoined:
        certs.append(Certificate("auto_adjoined", f"adjoined sqrt({m})"))
    if include_requests:
        for req in split.extension_requests:
            rad = req.radicand if req.is_integer else req.radicand.text()
            certs.append(Certificate("needs_extension", f"sqrt({rad})"))
        for note in split.irreducible_certificates:
            certs.append(Certificate("irreducible_factor", note))
        if split.nilpotent_witness is not None:
            certs.append(Certificate(
                "nilpotent_witness",
                "the center contains a nonzero nilpotent; the form is not "
                "diagonalizable"))
        if not split.complete:
            certs.append(Certificate(
                "incomplete_split",
                "no drawn element generated the center; structure shown may "
                "be coarser than the true factorization"))
    return certs


def _leaf_kind(split, zdim):
    comp = split.components[0]
    if comp.dim == zdim:
        if not comp.proven_irreducible:
            return "unresolved"
        return "field" if comp.multiplicity == 1 else "local"
    return "unresolved"


def _resolve(b: SymTensor, cfg: FieldConfig, rng: random.Random, retries: int):
    """Recursively split a nondegenerate tensor into indecomposable leaves.

    Returns (P, leaves, cfg, certificates, center_dim); P is square of
    size b.n over the possibly extended field.
    """
    z = center_basis(b)
    if z.dim == 1:
        leaf = _Leaf(b.n, "central", 1, [_ground_factor(cfg)], [])
        return Matrix.identity(cfg, b.n), [leaf], cfg, [], 1
    split = split_idempotents(z, cfg, retries=retries, rng=rng)
    cfg = split.cfg
    if len(split.idempotents) == 1:
        desc = classify_algebra(z, split)
        kind = _leaf_kind(split, z.dim)
        leaf = _Leaf(b.n, kind, z.dim, desc.factors, _split_certificates(split))
        return (Matrix.identity(cfg, b.n), [leaf], cfg,
                list(leaf.certificates), z.dim)
    certs = _split_certificates(split, include_requests=False)
    if split.nilpotent_witness is not None:
        certs.append(Certificate(
            "nilpotent_witness",
            "the center contains a nonzero nilpotent; the form is not "
            "diagonalizable"))
    cols = []
    sizes = []
    for eps in split.idempotents:
        basis_cols = eps.column_space_basis()
        cols.extend(basis_cols)
        sizes.append(len(basis_cols))
    assert sum(sizes) == b.n, "idempotent ranks do not fill the space"
    p1 = Matrix.from_columns(cfg, cols)
    bc = congruence(b.embed(cfg), p1)
    sub_tensors = _extract_blocks(bc, sizes)
    leaves = []
    sub_ps = []
    for sub in sub_tensors:
        sub_p, sub_leaves, cfg, sub_certs, _ = _resolve(sub, cfg, rng, retries)
        sub_ps.append(sub_p)
        leaves.extend(sub_leaves)
        certs.extend(sub_certs)
    p = p1.embed(cfg) * block_diag(cfg, sub_ps)
    return p, leaves, cfg, certs, z.dim


def _extract_blocks(bc: SymTensor, sizes):
    """Cut a block-diagonal tensor along the given index ranges."""
    cfg = bc.cfg
    bounds = []
    lo = 1
    for s in sizes:
        bounds.append((lo, lo + s - 1))
        lo += s
    stray = cfg.tolerance * max(1.0, bc.max_abs()) if cfg.mode == "float" else 0.0
    per_block = [{} for _ in sizes]
    for idx, v in bc.entries.items():
        owner = None
        for k, (a, z) in enumerate(bounds):
            if all(a <= i <= z for i in idx):
                owner = k
                break
        if owner is None:
            if cfg.mode == "float" and abs(v) <= stray:
                continue
            raise AssertionError(f"entry {idx} crosses block boundaries")
        a, _ = bounds[owner]
        per_block[owner][tuple(i - a + 1 for i in idx)] = v
    return [SymTensor(cfg, s, bc.d, per_block[k]) for k, s in enumerate(sizes)]


def decompose(f: Form, cfg: FieldConfig = None, seed: int = 0,
              retries: int = 8) -> Decomposition:
    """Run the full pipeline on a form of degree >= 3."""
    cfg = cfg or f.cfg
    f = f.embed(cfg)
    n, d = f.n, f.d
    a = gram_tensor(f)
    red = reduce_nondegenerate(a)
    r = red.rank
    certs = []
    if r < n:
        certs.append(Certificate(
            "degenerate_reduction",
            f"essential rank {r} of {n}; trailing variables span the radical"))
    if r == 0:
        return Decomposition(
            verdict="diagonalizable", n=n, d=d, rank=0, cfg=cfg, P=red.P,
            lambdas=[], L=Matrix(cfg, []), blocks=[], ortho="not_applicable",
            center_dim=0, center_factors=[], certificates=certs)
    rng = random.Random(seed)
    p_rec, leaves, cfg, rec_certs, zdim = _resolve(red.reduced, cfg, rng, retries)
    certs.extend(rec_certs)
    p_red = red.P.embed(cfg)
    if n > r:
        p_full = p_red * block_diag(cfg, [p_rec, Matrix.identity(cfg, n - r)])
    else:
        p_full = p_red * p_rec
    b_fin = congruence(red.reduced.embed(cfg), p_rec)
    sizes = [leaf.size for leaf in leaves]
    blocks = _build_blocks(b_fin, leaves)
    factors = [fac for leaf in leaves for fac in leaf.factors]
    base = dict(n=n, d=d, rank=r, cfg=cfg, P=p_full, center_dim=zdim,
                center_factors=factors, certificates=certs)
    if all(s == 1 for s in sizes):
        lambdas = []
        rows = []
        p_inv = p_full.inverse()
        for i in range(r):
            row = p_inv.row(i)
            s = next(x for x in row if not x.is_zero())
            inv = s.inverse()
            rows.append([x * inv for x in row])
            lambdas.append(b_fin.entry((i + 1,) * d) * s**d)
        l_mat = Matrix(cfg, rows)
        ortho = "not_applicable"
        scaling = None
        if r == n:
            ortho = ortho_check(l_mat)
            scaling, screqs = _scaling_check(l_mat, ortho, cfg)
            certs.extend(screqs)
        return Decomposition(
            verdict="diagonalizable", lambdas=lambdas, L=l_mat, blocks=None,
            ortho=ortho, scaling_in_field=scaling, **base)
    if len(leaves) >= 2:
        return Decomposition(verdict="direct_sum", blocks=blocks, **base)
    leaf = leaves[0]
    verdict = {
        "central": "central_indecomposable",
        "field": "indecomposable",
        "local": "indecomposable",
        "unresolved": "undecided_with_certificate",
    }[leaf.kind]
    return Decomposition(verdict=verdict, blocks=blocks, **base)


def _build_blocks(b_fin: SymTensor, leaves):
    blocks = []
    lo = 1
    sub_tensors = _extract_blocks(b_fin, [leaf.size for leaf in leaves])
    for leaf, sub in zip(leaves, sub_tensors):
        blocks.append(Block(
            variables=tuple(range(lo, lo + leaf.size)),
            form=form_from_gram(sub),
            kind=leaf.kind,
            center_dim=leaf.center_dim,
            factors=leaf.factors,
        ))
        lo += leaf.size
    return blocks


def _offdiag_is_zero(g: Matrix) -> bool:
    n = g.nrows
    return all(g[i, j].is_zero()
               for i in range(n) for j in range(n) if i != j)


def ortho_check(l: Matrix, cfg: FieldConfig = None) -> str:
    """Classify the rows: orthogonal (bilinear), unitary (sesquilinear), neither.

    Row scaling cannot change either property, so the flags are computed
    on the rows as given; whether the scaling itself lives in the field
    is reported separately by decompose().
    """
    if cfg is not None:
        l = l.embed(cfg)
    if l.nrows != l.ncols:
        raise NotSquareError("the rows must form a square invertible matrix")
    if _offdiag_is_zero(l * l.transpose()):
        return "orthogonal"
    if _offdiag_is_zero(l * l.conj().transpose()):
        return "unitary"
    return "neither"


def _scaling_check(l: Matrix, flavor: str, cfg: FieldConfig):
    """Whether the row norms needed to rescale to an isometry exist in the field."""
    if flavor not in ("orthogonal", "unitary"):
        return None, []
    gram = l * l.transpose() if flavor == "orthogonal" else l * l.conj().transpose()
    certs = []
    ok = True
    for i in range(l.nrows):
        root = try_sqrt(gram[i, i], cfg)
        if isinstance(root, NeedsExtension):
            ok = False
            rad = root.radicand if root.is_integer else root.radicand.text()
            certs.append(Certificate(
                "scaling_extension",
                f"row {i + 1} norm needs sqrt({rad}) to scale to an isometry"))
    return ok, certs


def odeco_precheck(a: SymTensor) -> bool:
    """Pairwise commutation of all slices: the real orthogonal-decomposability screen."""
    for v in a.entries.values():
        if not v.is_real():
            raise NotRealError("odeco precheck requires real entries")
    tails = list(combinations_with_replacement(range(1, a.n + 1), a.d - 2))
    slices = [slice_matrix(a, t) for t in tails]
    for i in range(len(slices)):
        for j in range(i + 1, len(slices)):
            if slices[i] * slices[j] != slices[j] * slices[i]:
                return False
    return True


def verify(dec: Decomposition, f: Form, tolerance: float = None) -> bool:
    """Re-expand the decomposition independently and compare with f."""
    cfg = dec.cfg
    f = f.embed(cfg)
    if dec.verdict == "diagonalizable":
        if dec.rank == 0:
            expanded = Form(cfg, f.n, f.d, {})
        else:
            rows = [dec.L.row(i) for i in range(dec.L.nrows)]
            expanded = expand_powersum(dec.lambdas, rows, f.d, cfg=cfg, n=f.n)
    else:
        if not dec.blocks:
            return False
        p_inv = dec.P.inverse()
        expanded = Form(cfg, f.n, f.d, {})
        for block in dec.blocks:
            rows = [p_inv.row(v - 1) for v in block.variables]
            expanded = add_forms(expanded,
                                 substitute_linear(block.form, rows, cfg, f.n))
    if cfg.mode == "exact":
        return expanded == f
    tol = tolerance if tolerance is not None else cfg.tolerance
    scale = max(1.0, f.max_abs())
    keys = set(expanded.coeffs) | set(f.coeffs)
    return all(
        abs(expanded.coefficient(k) - f.coefficient(k)) <= tol * scale
        for k in keys)
