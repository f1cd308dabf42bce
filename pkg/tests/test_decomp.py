"""The full pipeline: verdicts, verification, orthogonality, odeco."""

import random
from fractions import Fraction

import pytest

from formdiag import (
    FieldConfig,
    Form,
    Matrix,
    NotRealError,
    NotSquareError,
    SymTensor,
    congruence,
    decompose,
    expand_powersum,
    gram_tensor,
    odeco_precheck,
    ortho_check,
    parse_form,
    random_diagonalizable,
    random_orthogonal_rational,
    verify,
)
from formdiag.forms import compositions

Q = FieldConfig()
Q_FIXED = FieldConfig(max_adjoin=0)

F6 = parse_form("x1^4+x2^4+6*x1^2*x2^2", Q_FIXED)
CUBIC_SQRT2_TEXT = ("x1^3-3*x1^2*x2+3*x1*x2^2+3*x1^2*x3+3*x1*x3^2-6*x1*x2*x3"
            "+13*x2^3-3*x2^2*x3-9*x2*x3^2+15*x3^3")
CUBIC_SQRT2 = parse_form(CUBIC_SQRT2_TEXT, Q_FIXED)


def monic_rows(dec):
    return sorted(tuple(x.text() for x in dec.L.row(i))
                  for i in range(dec.L.nrows))


class TestBinaryQuartic:
    def test_f6_diagonalization(self):
        dec = decompose(F6)
        assert dec.verdict == "diagonalizable"
        assert [v.rational() for v in dec.lambdas] == [Fraction(1, 2)] * 2
        assert monic_rows(dec) == [("1", "-1"), ("1", "1")]
        assert dec.ortho == "orthogonal"
        assert dec.scaling_in_field is False
        assert any(c.kind == "scaling_extension" for c in dec.certificates)
        assert verify(dec, F6)

    def test_verify_rejects_wrong_scale(self):
        dec = decompose(F6)
        dec.lambdas = [Q_FIXED.one, Q_FIXED.one]
        assert not verify(dec, F6)


class TestSqrt2Cubic:
    def test_over_q_direct_sum(self):
        dec = decompose(CUBIC_SQRT2, Q_FIXED)
        assert dec.verdict == "direct_sum"
        assert [len(b.variables) for b in dec.blocks] == [1, 2]
        # first block is the cube of x1 - x2 + x3
        assert dec.blocks[0].form.coefficient((3,)) == 1
        first_row = dec.P.inverse().row(0)
        assert [x.rational() for x in first_row] == [1, -1, 1]
        assert verify(dec, CUBIC_SQRT2)

    def test_adjoined_sqrt2_diagonalizes(self):
        cfg = FieldConfig(adjoined=[2])
        dec = decompose(parse_form(CUBIC_SQRT2_TEXT, cfg), cfg)
        assert dec.verdict == "diagonalizable"
        assert dec.ortho == "neither"
        assert verify(dec, parse_form(CUBIC_SQRT2_TEXT, cfg))
        # monic rows of the (1 +- sqrt(2)) target forms
        s2 = cfg.radical(2)
        expected = set()
        for row in ([1, -1, 1],
                    [0, cfg.one + s2, cfg.one - s2],
                    [0, cfg.one - s2, cfg.one + s2]):
            row = [cfg.scalar(x) for x in row]
            lead = next(x for x in row if not x.is_zero())
            expected.add(tuple((x / lead).text() for x in row))
        got = {tuple(x.text() for x in dec.L.row(i)) for i in range(3)}
        assert got == expected


class TestOrthoCheck:
    def test_orthogonal_rows(self):
        assert ortho_check(Matrix(Q, [[1, -1], [1, 1]])) == "orthogonal"

    def test_unitary_rows(self):
        cfg = FieldConfig(adjoined=[-1])
        i = cfg.radical(-1)
        rows = Matrix(cfg, [[cfg.one, -i], [cfg.one, i]])
        assert ortho_check(rows) == "unitary"

    def test_neither(self):
        cfg = FieldConfig(adjoined=[2])
        dec = decompose(parse_form(CUBIC_SQRT2_TEXT, cfg), cfg)
        assert ortho_check(dec.L) == "neither"

    def test_not_square(self):
        with pytest.raises(NotSquareError):
            ortho_check(Matrix(Q, [[1, 0, 0], [0, 1, 0]]))


class TestOdecoPrecheck:
    def test_f6_commutes(self):
        assert odeco_precheck(gram_tensor(F6))

    def test_diagonal_tensor(self):
        assert odeco_precheck(gram_tensor(parse_form("x1^3+x2^3+x3^3", Q)))

    def test_sqrt2_cubic_fails(self):
        assert not odeco_precheck(gram_tensor(CUBIC_SQRT2))

    def test_complex_entries_rejected(self):
        cfg = FieldConfig(adjoined=[-1])
        a = SymTensor(cfg, 2, 3, {(1, 1, 2): cfg.radical(-1)})
        with pytest.raises(NotRealError):
            odeco_precheck(a)


class TestDegenerate:
    def test_collapsed_cube(self):
        f = expand_powersum([1], [[1, 1]], 3, cfg=Q, n=2)
        dec = decompose(f)
        assert dec.verdict == "diagonalizable"
        assert dec.rank == 1
        assert dec.ortho == "not_applicable"
        assert any(c.kind == "degenerate_reduction" for c in dec.certificates)
        assert verify(dec, f)
        assert monic_rows(dec) == [("1", "1")]

    def test_degenerate_direct_sum(self):
        # two power terms in three variables: rank 2, still diagonalizable
        f = expand_powersum([1, 2], [[1, 0, 1], [0, 1, -1]], 3, cfg=Q, n=3)
        dec = decompose(f)
        assert dec.verdict == "diagonalizable" and dec.rank == 2
        assert verify(dec, f)

    def test_degenerate_block_and_extension_combine(self):
        # rank 3 of 4; a cube plus a 2-variable block that needs sqrt(2)
        text = ("x1^3+3*x1^2*x4+3*x1*x4^2+x4^3"
                " + 14*x2^3-6*x2^2*x3-6*x2*x3^2+14*x3^3")
        f = parse_form(text, Q_FIXED)
        dec = decompose(f, Q_FIXED)
        assert dec.verdict == "direct_sum" and dec.rank == 3
        assert [len(b.variables) for b in dec.blocks] == [1, 2]
        assert verify(dec, f)
        cfg = FieldConfig(adjoined=[2])
        f2 = parse_form(text, cfg)
        dec2 = decompose(f2, cfg)
        assert dec2.verdict == "diagonalizable" and dec2.rank == 3
        assert dec2.ortho == "not_applicable"  # fewer rows than variables
        assert verify(dec2, f2)


class TestVerdictStructure:
    def test_central_indecomposable(self):
        f = parse_form("x1^3+x2^3+x3^3+12*x1*x2*x3", Q_FIXED)
        dec = decompose(f, Q_FIXED)
        assert dec.verdict == "central_indecomposable"
        assert dec.center_dim == 1
        assert verify(dec, f)

    def test_indecomposable_quadratic_field(self):
        f = parse_form("x1^4+x2^4-6*x1^2*x2^2", Q_FIXED)
        dec = decompose(f, Q_FIXED)
        assert dec.verdict == "indecomposable"
        assert [fac.kind for fac in dec.center_factors] == ["quadratic_field"]
        assert any(c.kind == "needs_extension" for c in dec.certificates)
        assert verify(dec, f)

    def test_local_center_nilpotent(self):
        f = parse_form("x1^2*x2", Q_FIXED)
        dec = decompose(f, Q_FIXED)
        assert dec.verdict == "indecomposable"
        assert any(c.kind == "nilpotent_witness" for c in dec.certificates)
        assert verify(dec, f)

    def test_cubic_field_center_is_proven_indecomposable(self):
        # trace transfer of a line over Q[t]/(t^3 - 2): the center is that field
        f = parse_form("x1^3+2*x2^3+4*x3^3+12*x1*x2*x3", Q_FIXED)
        dec = decompose(f, Q_FIXED)
        assert dec.verdict == "indecomposable"
        assert dec.center_dim == 3
        assert [(fac.kind, fac.dim) for fac in dec.center_factors] == \
            [("higher_degree", 3)]
        assert any(c.kind == "irreducible_factor" for c in dec.certificates)
        assert verify(dec, f)

    def test_unproven_factor_over_tower_is_undecided(self):
        # the same cubic factor over an unrelated tower cannot be certified
        cfg = FieldConfig(adjoined=[5], max_adjoin=0)
        f = parse_form("x1^3+2*x2^3+4*x3^3+12*x1*x2*x3", cfg)
        dec = decompose(f, cfg)
        assert dec.verdict == "undecided_with_certificate"
        assert verify(dec, f)

    def test_tower_coefficient_minimal_polynomials(self):
        # irrational input coefficients push the splitting into the
        # squarefree-decomposition / quadratic-over-tower path
        cfg = FieldConfig(adjoined=[2], max_adjoin=0)
        f = parse_form(
            "x1^3 + 3*sqrt(2)*x1^2*x2 + 6*x1*x2^2 + 2*sqrt(2)*x2^3 + x2^3", cfg)
        dec = decompose(f, cfg)
        assert dec.verdict == "diagonalizable"
        assert verify(dec, f)
        assert monic_rows(dec) == [("0", "1"), ("1", "sqrt(2)")]

    def test_direct_sum_blocks_do_not_mix(self):
        dec = decompose(CUBIC_SQRT2, Q_FIXED)
        b = congruence(gram_tensor(CUBIC_SQRT2), dec.P)
        groups = [set(block.variables) for block in dec.blocks]
        for idx in b.entries:
            assert any(set(idx) <= g for g in groups)

    def test_block_center_dims_multiply(self):
        # the center of a direct sum is the product of the block centers
        dec = decompose(CUBIC_SQRT2, Q_FIXED)
        assert sum(b.center_dim for b in dec.blocks) == dec.center_dim


class TestRoundTrip:
    def test_ground_truth_recovery(self):
        for seed in range(25):
            n = seed % 4 + 1
            d = 3 + (seed // 4) % 2
            gt = random_diagonalizable(n, d, seed=seed)
            dec = decompose(gt.form)
            assert dec.verdict == "diagonalizable", (n, d, seed)
            assert verify(dec, gt.form)
            got = sorted(tuple(x.text() for x in dec.L.row(i)) for i in range(n))
            want = sorted(tuple(x.text() for x in r) for r in gt.rows)
            assert got == want, (n, d, seed)

    def test_seed_independence(self):
        gt = random_diagonalizable(3, 3, seed=77)
        rows = [monic_rows(decompose(gt.form, seed=s)) for s in (0, 1, 2)]
        assert rows[0] == rows[1] == rows[2]

    def test_lambda_row_pairing(self):
        gt = random_diagonalizable(3, 4, seed=5)
        dec = decompose(gt.form)
        got = {tuple(x.text() for x in dec.L.row(i)): dec.lambdas[i].text()
               for i in range(3)}
        want = {tuple(x.text() for x in r): lam.text()
                for r, lam in zip(gt.rows, gt.lambdas)}
        assert got == want


class TestOdecoConsistency:
    def test_both_directions(self):
        rng = random.Random(4242)
        for trial in range(12):
            n = rng.choice([2, 3])
            d = rng.choice([3, 4])
            q = random_orthogonal_rational(n, seed=trial)
            lams = [rng.choice([1, 2, 3, -1]) for _ in range(n)]
            f = expand_powersum(lams, [q.row(i) for i in range(n)], d, cfg=Q, n=n)
            a = gram_tensor(f)
            assert odeco_precheck(a)
            dec = decompose(f)
            assert dec.verdict == "diagonalizable" and dec.ortho == "orthogonal"
        # non-orthogonal diagonalizable forms fail the screen
        gt = random_diagonalizable(3, 3, seed=9)
        a = gram_tensor(gt.form)
        dec = decompose(gt.form)
        assert (dec.ortho == "orthogonal") == odeco_precheck(a)


class TestGenericTriviality:
    def test_random_dense_forms(self):
        rng = random.Random(31415)
        central = 0
        trials = 30
        for _ in range(trials):
            coeffs = {e: Q.scalar(rng.randint(-9, 9)) for e in compositions(3, 3)}
            coeffs = {e: c for e, c in coeffs.items() if not c.is_zero()}
            if not coeffs:
                coeffs = {(3, 0, 0): Q.one}
            f = Form(Q, 3, 3, coeffs)
            dec = decompose(f)
            if dec.verdict == "central_indecomposable" and dec.center_dim == 1:
                central += 1
        assert central >= trials * 0.95


class TestFloatMode:
    def test_f6(self):
        cfg = FieldConfig(mode="float", tolerance=1e-9)
        f = parse_form("x1^4+x2^4+6*x1^2*x2^2", cfg)
        dec = decompose(f)
        assert dec.verdict == "diagonalizable"
        assert dec.ortho == "orthogonal"
        assert verify(dec, f, tolerance=1e-6)

    def test_sqrt2_cubic(self):
        cfg = FieldConfig(mode="float", tolerance=1e-9)
        f = parse_form(CUBIC_SQRT2_TEXT, cfg)
        dec = decompose(f)
        assert dec.verdict == "diagonalizable"
        assert verify(dec, f, tolerance=1e-6)
        # the numeric rows carry 2*sqrt(2) - 3 and -2*sqrt(2) - 3
        values = sorted(abs(dec.L[i, 2].to_complex()) for i in range(3))
        assert abs(values[0] - abs(2 * 2**0.5 - 3)) < 1e-6
        assert abs(values[2] - abs(-2 * 2**0.5 - 3)) < 1e-6
