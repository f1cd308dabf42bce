"""Center computation: slice conditions, covariance, and cross-checks."""

import random

import pytest

from formdiag import (
    DegenerateFormError,
    FieldConfig,
    Form,
    Matrix,
    center_basis,
    center_dim,
    congruence,
    gram_tensor,
    hessian_cross_check,
    parse_form,
    slice_matrix,
)
from formdiag.forms import compositions
from formdiag.linalg import spans_equal

Q = FieldConfig()

F6 = parse_form("x1^4+x2^4+6*x1^2*x2^2", Q)
CUBIC_SQRT2 = parse_form(
    "x1^3-3*x1^2*x2+3*x1*x2^2+3*x1^2*x3+3*x1*x3^2-6*x1*x2*x3"
    "+13*x2^3-3*x2^2*x3-9*x2*x3^2+15*x3^3", Q)
CUBIC_SQRT2_CENTER = [
    Matrix(Q, [[1, -1, 1], [0, 0, 0], [0, 0, 0]]),
    Matrix(Q, [[0, 1, -1], [0, 1, 0], [0, 0, 1]]),
    Matrix(Q, [[0, 1, -5], [0, 0, 1], [0, -1, 6]]),
]
QUARTIC_OMEGA = parse_form(
    "x1^4+4*x1^3*x2+4*x1^3*x3+4*x1^3*x4-12*x1^2*x2^2+12*x1^2*x2*x3"
    "-24*x1^2*x2*x4-12*x1^2*x3^2-24*x1^2*x3*x4+24*x1^2*x4^2+4*x1*x2^3"
    "-24*x1*x2^2*x3+12*x1*x2^2*x4-24*x1*x2*x3^2+96*x1*x2*x3*x4"
    "-24*x1*x2*x4^2+4*x1*x3^3+12*x1*x3^2*x4-24*x1*x3*x4^2+4*x1*x4^3"
    "+x2^4+4*x2^3*x3+4*x2^3*x4+24*x2^2*x3^2-24*x2^2*x3*x4-12*x2^2*x4^2"
    "+4*x2*x3^3-24*x2*x3^2*x4+12*x2*x3*x4^2+4*x2*x4^3+x3^4+4*x3^3*x4"
    "-12*x3^2*x4^2+4*x3*x4^3+x4^4", Q)
QUARTIC_OMEGA_GEN = Matrix(Q, [[0, 1, 0, 0], [-1, 1, 0, 0], [0, 0, 0, 1], [0, 0, -1, 1]])


def _span(z):
    return [m.vectorize() for m in z.basis]


class TestCenterBasis:
    def test_binary_quartic(self):
        z = center_basis(gram_tensor(F6))
        assert z.dim == 2
        swap = Matrix(Q, [[0, 1], [1, 0]])
        assert spans_equal(_span(z), [Matrix.identity(Q, 2).vectorize(),
                                      swap.vectorize()], Q)

    def test_sqrt2_cubic_matches_known_generators(self):
        z = center_basis(gram_tensor(CUBIC_SQRT2))
        assert z.dim == 3
        assert spans_equal(_span(z), [m.vectorize() for m in CUBIC_SQRT2_CENTER], Q)

    def test_generic_binary_quartic_is_central(self):
        f = parse_form("x1^4+x2^4+1*x1^2*x2^2", Q)
        z = center_basis(gram_tensor(f))
        assert z.dim == 1

    def test_identity_first(self):
        z = center_basis(gram_tensor(CUBIC_SQRT2))
        assert z.basis[0] == Matrix.identity(Q, 3)

    def test_basis_satisfies_slice_conditions(self):
        a = gram_tensor(CUBIC_SQRT2)
        z = center_basis(a)
        for x in z.basis:
            for i in range(1, 4):
                m = slice_matrix(a, (i,))
                assert x.transpose() * m == m * x

    def test_degenerate_input_rejected(self):
        a = gram_tensor(parse_form("x1^3", Q, n=2))
        with pytest.raises(DegenerateFormError):
            center_basis(a)


class TestCenterDim:
    def test_quartic_with_doubled_field_center(self):
        assert center_dim(gram_tensor(QUARTIC_OMEGA)) == 4

    def test_quartic_center_contains_known_generator(self):
        z = center_basis(gram_tensor(QUARTIC_OMEGA))
        stacked = Matrix.from_columns(Q, _span(z))
        assert stacked.solve(QUARTIC_OMEGA_GEN.vectorize()) is not None

    def test_diagonal_form(self):
        for n, d in ((2, 3), (3, 3), (4, 4)):
            text = "+".join(f"x{i}^{d}" for i in range(1, n + 1))
            assert center_dim(gram_tensor(parse_form(text, Q))) == n

    def test_random_dense_is_central(self):
        rng = random.Random(99)
        hits = 0
        for _ in range(20):
            f = _dense_form(3, 3, rng)
            if center_dim(gram_tensor(f)) == 1:
                hits += 1
        assert hits >= 19

    def test_dim_bound_on_smooth_fixtures(self):
        for f in (F6, CUBIC_SQRT2, QUARTIC_OMEGA):
            assert center_dim(gram_tensor(f)) <= f.n


class TestHessianCrossCheck:
    def test_swap_is_central_for_f6(self):
        assert hessian_cross_check(F6, Matrix(Q, [[0, 1], [1, 0]]), trials=10)

    def test_nilpotent_candidate_fails(self):
        assert not hessian_cross_check(F6, Matrix(Q, [[0, 1], [0, 0]]), trials=10)

    def test_identity_always_passes(self):
        for f in (F6, CUBIC_SQRT2, QUARTIC_OMEGA):
            assert hessian_cross_check(f, Matrix.identity(Q, f.n), trials=6)

    def test_center_basis_members_pass(self):
        z = center_basis(gram_tensor(CUBIC_SQRT2))
        for x in z.basis:
            assert hessian_cross_check(CUBIC_SQRT2, x, trials=8)


class TestProperties:
    def test_conjugation_covariance(self):
        rng = random.Random(2718)
        for _ in range(12):
            n, d = rng.choice([(2, 3), (2, 4), (3, 3)])
            a = gram_tensor(_smooth_form(n, d, rng))
            p = _random_invertible(n, rng)
            z = center_basis(a)
            zb = center_basis(congruence(a, p))
            p_inv = p.inverse()
            conjugated = [(p_inv * x * p).vectorize() for x in z.basis]
            assert spans_equal(conjugated, _span(zb), Q)

    def test_commutativity(self):
        for f in (F6, CUBIC_SQRT2, QUARTIC_OMEGA):
            z = center_basis(gram_tensor(f))
            for x in z.basis:
                for y in z.basis:
                    assert x * y == y * x

    def test_field_extension_stability(self):
        big = FieldConfig(adjoined=[2, -3])
        for f in (F6, CUBIC_SQRT2):
            a = gram_tensor(f)
            z = center_basis(a)
            a_k = a.embed(big)
            z_k = center_basis(a_k)
            assert z_k.dim == z.dim
            stacked = Matrix.from_columns(big, [m.vectorize() for m in z_k.basis])
            for x in z.basis:
                assert stacked.solve(x.embed(big).vectorize()) is not None


def _dense_form(n, d, rng, bound=9):
    coeffs = {e: Q.scalar(rng.randint(-bound, bound)) for e in compositions(d, n)}
    coeffs = {e: c for e, c in coeffs.items() if not c.is_zero()}
    if not coeffs:
        coeffs = {(d,) + (0,) * (n - 1): Q.one}
    return Form(Q, n, d, coeffs)


def _smooth_form(n, d, rng):
    from formdiag import radical_basis

    while True:
        f = _dense_form(n, d, rng, bound=4)
        if not radical_basis(gram_tensor(f)):
            return f


def _random_invertible(n, rng):
    while True:
        p = Matrix(Q, [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
        if not p.det().is_zero():
            return p
