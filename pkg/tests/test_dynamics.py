"""Unit tests for eigenvalue, resonance, and relation-lattice analysis."""

import random
from fractions import Fraction

import pytest

from padicdyn import ratlinalg
from padicdyn.arith import factorize, int_valuation
from padicdyn.dynamics import (
    AnalyticMap,
    Resonance,
    enumerate_resonances,
    jacobian_at_origin,
    rational_eigenvalues,
    relation_lattice,
    standard_symplectic_form,
    symplectic_scaling_check,
)
from padicdyn.errors import DomainError, IrrationalEigenvalueError
from padicdyn.series import MultiSeries, SeriesTuple


def poly_map(component_terms, trunc, r=0):
    nvars = len(component_terms)
    comps = [
        MultiSeries(nvars, trunc, [(e, Fraction(c)) for e, c in terms])
        for terms in component_terms
    ]
    return AnalyticMap(SeriesTuple(comps), fixed_locus_dim=r)


class TestAnalyticMap:
    def test_rejects_moved_origin(self):
        with pytest.raises(DomainError):
            poly_map([[((0,), 1), ((1,), 2)]], 4)

    def test_rejects_unfixed_locus(self):
        # second component restricted to x2 = 0 is x1^2, not zero
        with pytest.raises(DomainError):
            poly_map([[((1, 0), 1)], [((0, 1), -2), ((2, 0), 1)]], 4, r=1)

    def test_accepts_fixed_locus(self):
        f = poly_map([[((1, 0), 1), ((0, 2), 1)], [((0, 1), -2)]], 4, r=1)
        assert f.fixed_locus_dim == 1


class TestJacobian:
    def test_reads_linear_part(self):
        f = poly_map([[((1, 0), 2), ((0, 2), 1)], [((0, 1), 3), ((2, 0), 1)]], 4)
        assert jacobian_at_origin(f) == [[2, 0], [0, 3]]

    def test_shear(self):
        f = poly_map([[((1, 0), 1), ((0, 1), 1)], [((0, 1), 1)]], 4)
        assert jacobian_at_origin(f) == [[1, 1], [0, 1]]

    def test_identity(self):
        f = poly_map([[((1, 0), 1)], [((0, 1), 1)]], 4)
        assert jacobian_at_origin(f) == ratlinalg.identity(2)


class TestRationalEigenvalues:
    def test_diagonal(self):
        data = rational_eigenvalues([[2, 0], [0, 3]])
        assert data.eigenvalues == (2, 3)
        assert data.semisimple

    def test_jordan_block(self):
        data = rational_eigenvalues([[1, 1], [0, 1]])
        assert data.eigenvalues == (1, 1)
        assert not data.semisimple

    def test_rotation_rejected(self):
        with pytest.raises(IrrationalEigenvalueError):
            rational_eigenvalues([[0, -1], [1, 0]])

    def test_non_diagonal_semisimple(self):
        # conjugate of diag(2, 5)
        data = rational_eigenvalues([[2, 3], [0, 5]])
        assert data.eigenvalues == (2, 5)
        assert data.semisimple

    def test_fractional_eigenvalues(self):
        data = rational_eigenvalues([[Fraction(1, 2), 0], [0, Fraction(3, 4)]])
        assert data.eigenvalues == (Fraction(1, 2), Fraction(3, 4))

    def test_multiplicity_and_order(self):
        data = rational_eigenvalues([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -2, 0], [0, 0, 0, -2]])
        assert data.eigenvalues == (1, 1, -2, -2)
        assert data.semisimple


def brute_force_resonances(lams, r, max_degree):
    n = len(lams)
    out = []

    def walk(prefix, budget):
        if len(prefix) == n - r:
            if sum(prefix) >= 2:
                value = Fraction(1)
                for lam, e in zip(lams[r:], prefix):
                    value *= Fraction(lam) ** e
                for j, lam in enumerate(lams):
                    if value == lam:
                        out.append(Resonance(tuple(prefix), j))
            return
        for e in range(budget + 1):
            walk(prefix + [e], budget - e)

    walk([], max_degree)
    return sorted(out, key=lambda res: (sum(res.monomial), res.monomial, res.component))


class TestResonances:
    def test_square_relation(self):
        assert enumerate_resonances([4, 2], 0, 3) == [Resonance((0, 2), 0)]

    def test_symplectic_fixture_non_resonant(self):
        assert enumerate_resonances([1, 1, -2, -2], 2, 6) == []

    def test_independent_pair(self):
        # oracle: brute force over all multi-indices of degree <= 8
        assert enumerate_resonances([2, 3], 0, 8) == brute_force_resonances([2, 3], 0, 8)
        assert enumerate_resonances([2, 3], 0, 8) == []

    def test_matches_brute_force_randomized(self):
        rng = random.Random(41)
        for _ in range(40):
            n = rng.randint(1, 3)
            lams = [Fraction(rng.choice([-4, -2, 2, 3, 4, 6, 9])) for _ in range(n)]
            got = enumerate_resonances(lams, 0, 5)
            assert got == brute_force_resonances(lams, 0, 5)

    def test_requires_unit_head(self):
        with pytest.raises(DomainError):
            enumerate_resonances([2, 3], 1, 4)


class TestRelationLattice:
    def test_independent(self):
        lat = relation_lattice([2, 3])
        assert lat.basis == ()
        assert lat.rank == 2
        assert lat.torsion_free

    def test_power_relation(self):
        lat = relation_lattice([2, 4])
        assert lat.rank == 1
        assert lat.basis == ((2, -1),)
        assert lat.torsion_free

    def test_three_pairwise_products(self):
        # oracle: the 3x3 exponent system for (6, 10, 15) only has the zero solution
        lat = relation_lattice([6, 10, 15])
        assert lat.basis == ()
        assert lat.rank == 3

    def test_relations_annihilate(self):
        rng = random.Random(43)
        for _ in range(40):
            lams = [
                Fraction(rng.choice([-6, -2, 2, 3, 4, 6, 8, 9, 12]), rng.choice([1, 1, 5]))
                for _ in range(rng.randint(2, 4))
            ]
            lat = relation_lattice(lams)
            for vec in lat.basis:
                value = Fraction(1)
                for lam, e in zip(lams, vec):
                    value *= lam**e
                assert value == 1

    def test_rank_matches_rational_rank_oracle(self):
        # factorization oracle: rank of the prime-exponent matrix over Q
        rng = random.Random(47)
        for _ in range(40):
            lams = [Fraction(rng.choice([2, 3, 4, 6, 8, 9, 12, 18])) for _ in range(3)]
            lat = relation_lattice(lams)
            primes = sorted({p for lam in lams for p in factorize(lam.numerator)})
            rows = [
                [int_valuation(lam.numerator, p) for lam in lams]
                for p in primes
            ]
            assert lat.rank == ratlinalg.rank([[Fraction(x) for x in row] for row in rows])
            assert lat.rank + len(lat.basis) == len(lams)

    def test_sign_torsion_detected(self):
        lat = relation_lattice([2, -2])
        assert not lat.torsion_free
        assert lat.rank == 1

    def test_equal_negatives_are_torsion_free(self):
        # the group generated by -2 alone contains no root of unity but 1
        lat = relation_lattice([-2, -2])
        assert lat.torsion_free
        assert lat.rank == 1
        for vec in lat.basis:
            value = Fraction(1)
            for lam, e in zip([-2, -2], vec):
                value *= Fraction(lam) ** e
            assert value == 1

    def test_signed_basis_spans_signed_relations(self):
        lat = relation_lattice([2, -2])
        # (2)^a (-2)^b = 1 forces a + b = 0 and b even; basis must generate that
        assert lat.basis
        for vec in lat.basis:
            assert (vec[0] + vec[1]) == 0
            assert vec[1] % 2 == 0


class TestSymplecticScaling:
    def test_fixture(self):
        sigma = standard_symplectic_form(4)
        m = ratlinalg.as_matrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -2, 0], [0, 0, 0, -2]])
        report = symplectic_scaling_check(m, sigma, Fraction(-2))
        assert report.holds
        assert sorted(report.pairs) == [(1, -2), (1, -2)]

    def test_identity(self):
        report = symplectic_scaling_check(ratlinalg.identity(4), standard_symplectic_form(4), Fraction(1))
        assert report.holds

    def test_scaling_mismatch(self):
        m = [[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]]
        report = symplectic_scaling_check(m, standard_symplectic_form(4), Fraction(-2))
        assert not report.holds

    def test_rejects_degenerate_form(self):
        zero = [[Fraction(0)] * 4 for _ in range(4)]
        with pytest.raises(DomainError):
            symplectic_scaling_check(ratlinalg.identity(4), zero, Fraction(1))

    def test_rejects_odd_dimension(self):
        with pytest.raises(DomainError):
            symplectic_scaling_check(ratlinalg.identity(3), [[Fraction(0)] * 3] * 3, Fraction(1))

    def test_determinant_compatibility(self):
        rng = random.Random(53)
        sigma = standard_symplectic_form(4)
        for _ in range(20):
            d = [Fraction(rng.choice([1, -2, 2, -1])) for _ in range(2)]
            m = ratlinalg.as_matrix(
                [
                    [d[0], 0, 0, 0],
                    [0, d[1], 0, 0],
                    [0, 0, Fraction(-2) / d[0], 0],
                    [0, 0, 0, Fraction(-2) / d[1]],
                ]
            )
            report = symplectic_scaling_check(m, sigma, Fraction(-2))
            assert report.holds
            lhs = ratlinalg.det(ratlinalg.mat_mul(ratlinalg.mat_mul(ratlinalg.transpose(m), sigma), m))
            assert lhs == Fraction(-2) ** 4 * ratlinalg.det(sigma)
