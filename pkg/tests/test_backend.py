"""Exact matrices, instantiation, elimination, truncated-derivative instances."""

import random
from fractions import Fraction

import pytest

from opkit.errors import InputError, ResourceLimitError
from opkit.backend import (AffineSolutionSet, Matrix, OperatorInstance,
                           affine_sets_equal, graded_monomials, in_span,
                           instantiate, kernel_basis,
                           make_truncated_derivative_instance, range_member,
                           rank, solve_affine, span_basis, spans_equal)
from opkit.poly import Polynomial, parse_polynomial, product

from conftest import random_polynomial, random_vector


def P(text, variables=("x",)):
    return parse_polynomial(text, list(variables))


def random_matrix(rng, rows, cols, bound=5):
    return Matrix([[Fraction(rng.randint(-bound, bound), rng.randint(1, 3))
                    for _ in range(cols)] for _ in range(rows)])


class TestInstantiate:
    def test_unital(self):
        inst = OperatorInstance.of([Matrix.diagonal([-1, -2])])
        assert instantiate(Polynomial.one(1), inst) == Matrix.identity(2)

    def test_variable_maps_to_generator(self):
        d = Matrix.diagonal([-1, -2])
        inst = OperatorInstance.of([d])
        assert instantiate(P("x"), inst) == d

    def test_annihilating_polynomial(self):
        inst = OperatorInstance.of([Matrix.diagonal([-1, -2])])
        assert instantiate(P("(x+1)*(x+2)"), inst).is_zero()

    def test_variable_count_mismatch(self):
        inst = OperatorInstance.of([Matrix.diagonal([1, 2])])
        with pytest.raises(InputError):
            instantiate(parse_polynomial("x+y", ["x", "y"]), inst)

    def test_homomorphism_random(self, rng):
        m = random_matrix(rng, 4, 4, bound=3)
        d2 = m * m + Matrix.identity(4).scale(2)
        inst = OperatorInstance.of([m, d2])
        for _ in range(40):
            p = random_polynomial(rng, 2, max_terms=4, max_exp=3)
            q = random_polynomial(rng, 2, max_terms=4, max_exp=3)
            assert instantiate(p + q, inst) == instantiate(p, inst) + instantiate(q, inst)
            assert instantiate(p * q, inst) == instantiate(p, inst) * instantiate(q, inst)

    def test_instantiated_operators_commute(self, rng):
        m = random_matrix(rng, 3, 3, bound=3)
        inst = OperatorInstance.of([m, m * m])
        p = instantiate(random_polynomial(rng, 2, allow_zero=False), inst)
        q = instantiate(random_polynomial(rng, 2, allow_zero=False), inst)
        assert p * q == q * p

    def test_non_commuting_generators_rejected(self):
        a = Matrix([[0, 1], [0, 0]])
        b = Matrix([[0, 0], [1, 0]])
        with pytest.raises(InputError, match="commute"):
            OperatorInstance.of([a, b])


class TestKernelAndSolve:
    def test_kernel_of_identity(self):
        assert kernel_basis(Matrix.identity(3)) == []

    def test_kernel_of_diag01(self):
        assert kernel_basis(Matrix.diagonal([0, 1])) == [
            (Fraction(1), Fraction(0))]

    def test_kernel_of_zero_matrix(self):
        inst = OperatorInstance.of([Matrix.diagonal([-1, -2])])
        zero = instantiate(P("(x+1)*(x+2)"), inst)
        assert len(kernel_basis(zero)) == 2

    def test_solve_identity(self):
        sol = solve_affine(Matrix.identity(2), [5, -3])
        assert sol.particular == (Fraction(5), Fraction(-3))
        assert sol.kernel_vectors == ()

    def test_solve_infeasible(self):
        assert solve_affine(Matrix.diagonal([0, 1]), [1, 0]).is_empty()

    def test_solve_with_kernel(self):
        sol = solve_affine(Matrix.diagonal([0, 1]), [0, 3])
        assert sol.particular == (Fraction(0), Fraction(3))
        assert sol.kernel_vectors == ((Fraction(1), Fraction(0)),)

    def test_range_member(self):
        assert range_member(Matrix.identity(2), [7, 9])
        assert not range_member(Matrix.diagonal([0, 1]), [1, 0])

    def test_elimination_stress(self):
        rng = random.Random(101)
        for _ in range(120):
            rows = rng.randint(1, 7)
            cols = rng.randint(1, 7)
            m = random_matrix(rng, rows, cols)
            kb = kernel_basis(m)
            assert rank(m) + len(kb) == cols
            for v in kb:
                assert all(x == 0 for x in m.apply(v))
            # basis vectors are independent by the echelon convention
            assert len(span_basis(kb)) == len(kb)
            f = random_vector(rng, rows, bound=6)
            sol = solve_affine(m, f)
            if not sol.is_empty():
                assert m.apply(sol.particular) == tuple(f)

    def test_solve_matches_kernel_basis(self, rng):
        for _ in range(40):
            m = random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
            zero = [0] * m.rows
            sol = solve_affine(m, zero)
            assert sol.particular == tuple(Fraction(0) for _ in range(m.cols))
            assert list(sol.kernel_vectors) == kernel_basis(m)

    def test_determinism(self, rng):
        m = random_matrix(rng, 5, 7)
        assert kernel_basis(m) == kernel_basis(m)

    def test_sympy_oracle_rank_and_nullspace(self, rng):
        import sympy

        for _ in range(25):
            rows = rng.randint(1, 6)
            cols = rng.randint(1, 6)
            m = random_matrix(rng, rows, cols)
            sm = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator)
                                for v in row] for row in m.row_list()])
            assert rank(m) == sm.rank()
            ours = kernel_basis(m)
            theirs = sm.nullspace()
            assert len(ours) == len(theirs)
            # same span: each sympy vector lies in our span and vice versa
            theirs_tuples = [
                tuple(Fraction(int(x.p), int(x.q)) for x in v) for v in theirs]
            assert spans_equal(ours, theirs_tuples)


class TestSubspaces:
    def test_in_span(self):
        basis = [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
        assert in_span(basis, (Fraction(3), Fraction(4)))
        assert not in_span([(Fraction(1), Fraction(0))], (Fraction(0), Fraction(1)))

    def test_spans_equal(self):
        a = [(Fraction(1), Fraction(1))]
        b = [(Fraction(2), Fraction(2))]
        assert spans_equal(a, b)
        assert not spans_equal(a, [(Fraction(1), Fraction(0))])

    def test_affine_sets_equal(self):
        s1 = AffineSolutionSet((Fraction(1), Fraction(0)),
                               ((Fraction(0), Fraction(1)),))
        s2 = AffineSolutionSet((Fraction(1), Fraction(5)),
                               ((Fraction(0), Fraction(2)),))
        assert affine_sets_equal(s1, s2)
        s3 = AffineSolutionSet((Fraction(0), Fraction(0)), ())
        assert not affine_sets_equal(s1, s3)
        assert affine_sets_equal(AffineSolutionSet(None, ()),
                                 AffineSolutionSet(None, ()))


class TestTruncatedDerivative:
    def test_basis_order(self):
        assert graded_monomials(2, 3) == [
            (0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]

    def test_k1_depth2(self):
        inst = make_truncated_derivative_instance(1, 2)
        assert inst.dimension == 2
        assert inst.generators[0].to_strings() == [["0", "1"], ["0", "0"]]

    def test_nilpotency(self):
        inst = make_truncated_derivative_instance(2, 4)
        for g in inst.generators:
            power = Matrix.identity(inst.dimension)
            for _ in range(4):
                power = power * g
            assert power.is_zero()

    def test_unipotent_shift_invertible(self):
        inst = make_truncated_derivative_instance(1, 4)
        m = instantiate(P("x+1"), inst)
        assert kernel_basis(m) == []

    def test_generators_commute(self):
        inst = make_truncated_derivative_instance(3, 3)
        for i in range(3):
            for j in range(i + 1, 3):
                a, b = inst.generators[i], inst.generators[j]
                assert a * b == b * a

    def test_dimension_cap(self):
        with pytest.raises(ResourceLimitError):
            make_truncated_derivative_instance(3, 40)

    def test_range_intersection_law(self, rng):
        # range of a product equals the intersection of factor ranges for a
        # pairwise-unit family, brute-forced on random vectors
        inst = OperatorInstance.of([Matrix.diagonal([0, -1, 3, 0])])
        factors = [P("x"), P("x+1")]
        full = instantiate(product(factors, 1), inst)
        mats = [instantiate(f, inst) for f in factors]
        for _ in range(100):
            f = random_vector(rng, 4, bound=4)
            lhs = range_member(full, f)
            rhs = all(range_member(m, f) for m in mats)
            assert lhs == rhs
