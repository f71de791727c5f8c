"""
This file contains all the unit tests for our character sums.
"""
import cmath
import math
import random

# noinspection PyPackageRequirements
import pytest

from modcount.charsum import CharPolynomial, CompensatedSum, DisjointSystem, build_polynomial, conditional_study, \
    conditional_xi_distribution, disjoint_block_polynomial, disjoint_block_system, exact_char_sum, \
    find_disjoint_system, verify_lemma_conditions, xor_tv_bound
from modcount.distributions import EmpiricalDist, ExactDist
from modcount.errors import ParameterError, SizeCapExceeded, TruncatedInput
from modcount.graphcore import HostGraph, catalog_graph, read_host_file, validate_family
from tests.test_support import get_test_path

K3_ONLY = validate_family([catalog_graph('K3')])


def _brute_force_sum(polynomial: CharPolynomial, p: float) -> complex:
    m = polynomial.variable_count
    omega = cmath.exp(2j * math.pi / polynomial.q)
    total = 0j

    for assignment in range(1 << m):
        ones = assignment.bit_count()
        total += p ** ones * (1 - p) ** (m - ones) * omega ** polynomial.evaluate(assignment)

    return total


class TestCompensatedSum(object):
    def test_recovers_small_terms(self):
        total = CompensatedSum()
        for value in [1.0, 1e-16, -1.0] * 10:
            total.add(value)

        assert float(total.value) == pytest.approx(1e-15, rel=1e-6)


class TestCharPolynomial(object):
    def test_invariants(self):
        with pytest.raises(ParameterError) as info:
            CharPolynomial(3, 2, [(0, [0])])

        assert info.value.code == 'BAD_COEFFICIENT'

        with pytest.raises(ParameterError) as info:
            CharPolynomial(3, 2, [(1, [0]), (2, [0])])

        assert info.value.code == 'DUPLICATE_MONOMIAL'

        with pytest.raises(ParameterError) as info:
            CharPolynomial(3, 2, [(1, [2])])

        assert info.value.code == 'BAD_VARIABLE'

    def test_merging(self):
        polynomial = CharPolynomial.from_terms(3, 3, [(1, [0, 1]), (2, [1, 0]), (2, [2]), (3, [2])])

        assert polynomial.terms == [(2, frozenset({2}))]
        assert polynomial.coefficient([0, 1]) == 0
        assert polynomial.degree == 1

    def test_evaluate(self):
        polynomial = CharPolynomial(5, 3, [(2, [0, 1]), (4, [2])])

        assert polynomial.evaluate(0b000) == 0
        assert polynomial.evaluate(0b011) == 2
        assert polynomial.evaluate(0b111) == 1

    def test_json(self):
        polynomial = CharPolynomial(3, 4, [(1, [0, 2]), (2, [3])])
        document = polynomial.to_json()

        assert document == {'q': 3, 'm': 4, 'terms': [[1, [0, 2]], [2, [3]]]}
        assert CharPolynomial.from_json(document) == polynomial
        assert CharPolynomial.from_json('{"q": 3, "m": 4, "terms": [[1, [0, 2]], [2, [3]]]}') == polynomial

    def test_bad_json(self):
        with pytest.raises(ParameterError) as info:
            CharPolynomial.from_json({'q': 3})

        assert info.value.code == 'BAD_POLYNOMIAL'

        with pytest.raises(ParameterError) as info:
            CharPolynomial.from_json({'q': 3, 'm': 1, 'terms': [[3, [0]]]})

        assert info.value.code == 'BAD_COEFFICIENT'


class TestBuildPolynomial(object):
    def test_k4(self):
        polynomial = build_polynomial(HostGraph.complete(4), K3_ONLY, [1], 2)

        assert polynomial.variable_count == 6
        assert len(polynomial.terms) == 4
        assert all(coefficient == 1 and len(monomial) == 3 for coefficient, monomial in polynomial.terms)

    def test_no_copies(self):
        assert build_polynomial(catalog_graph('C5').to_host(), K3_ONLY, [1], 2).terms == []

    def test_zero_coefficients(self):
        for c in [[0], [2]]:
            with pytest.raises(ParameterError) as info:
                build_polynomial(HostGraph.complete(4), K3_ONLY, c, 2)

            assert info.value.code == 'ZERO_COEFFICIENTS'

    def test_wrong_length(self):
        with pytest.raises(ParameterError) as info:
            build_polynomial(HostGraph.complete(4), K3_ONLY, [1, 1], 2)

        assert info.value.code == 'BAD_COEFFICIENTS'

    def test_too_many_variables(self):
        with pytest.raises(SizeCapExceeded) as info:
            build_polynomial(HostGraph.complete(8), K3_ONLY, [1], 2)

        assert info.value.code == 'TOO_MANY_VARIABLES'

    def test_truncated(self):
        with pytest.raises(TruncatedInput):
            build_polynomial(HostGraph.complete(5), K3_ONLY, [1], 2, cap=3)

    def test_family_terms_use_their_coefficients(self):
        family = validate_family([catalog_graph('K3'), catalog_graph('K4')])
        polynomial = build_polynomial(HostGraph.complete(4), family, [1, 2], 3)

        assert sorted(coefficient for coefficient, _ in polynomial.terms) == [1, 1, 1, 1, 2]
        assert polynomial.degree == 6


class TestLemmaConditions(object):
    def test_disjoint_triangles(self):
        host = read_host_file(get_test_path('two_triangles.txt'))
        polynomial = build_polynomial(host, K3_ONLY, [1], 2)
        system = DisjointSystem.of([monomial for _, monomial in polynomial.terms])
        check = verify_lemma_conditions(polynomial, system)

        assert check.satisfied
        assert check.bullets == (True, True, True, True)
        assert check.diagnostics == []

    def test_shared_edge(self):
        polynomial = build_polynomial(HostGraph.complete(4), K3_ONLY, [1], 2)
        system = DisjointSystem.of([monomial for _, monomial in polynomial.terms[:2]])
        check = verify_lemma_conditions(polynomial, system)

        assert not check.satisfied
        assert check.bullets[2] is False
        assert check.bullets[0] is True

    def test_heavy_monomial(self):
        polynomial = CharPolynomial(2, 4, [(1, [0, 1]), (1, [2, 3]), (1, [1, 2])])
        check = verify_lemma_conditions(polynomial, DisjointSystem.of([[0, 1], [2, 3]]))

        assert check.bullets == (True, True, True, False)
        assert len(check.diagnostics) == 1

    def test_short_block(self):
        polynomial = CharPolynomial(2, 5, [(1, [0, 1, 2]), (1, [3])])
        check = verify_lemma_conditions(polynomial, DisjointSystem.of([[3]]))

        assert check.bullets[0] is False

    def test_block_not_monomial(self):
        polynomial = disjoint_block_polynomial(2, 2)

        with pytest.raises(ParameterError) as info:
            verify_lemma_conditions(polynomial, DisjointSystem.of([[0, 2]]))

        assert info.value.code == 'BLOCK_NOT_MONOMIAL'

    def test_block_systems_satisfy_conditions(self):
        for r in range(1, 5):
            for d in range(1, 4):
                assert verify_lemma_conditions(disjoint_block_polynomial(r, d), disjoint_block_system(r, d)).satisfied


class TestExactCharSum(object):
    def test_examples(self):
        assert exact_char_sum(CharPolynomial(2, 1, [(1, [0])]), 0.5).modulus == pytest.approx(0.0, abs=1e-15)
        assert exact_char_sum(disjoint_block_polynomial(1, 2), 0.5).value == pytest.approx(0.5, abs=1e-15)
        assert exact_char_sum(disjoint_block_polynomial(3, 2), 0.5).value == pytest.approx(0.125, abs=1e-15)

    def test_block_formula(self):
        for r in range(1, 9):
            for d in range(1, 5):
                result = exact_char_sum(disjoint_block_polynomial(r, d), 0.5)

                assert abs(result.modulus - (1 - 2 ** (1 - d)) ** r) < 1e-12

    def test_empty_polynomial(self):
        result = exact_char_sum(CharPolynomial(3, 5, []), 0.3)

        assert result.value == 1
        assert result.error_budget == 0.0

    def test_extremes(self):
        polynomial = CharPolynomial(3, 2, [(1, [0, 1])])

        assert exact_char_sum(polynomial, 0.0).value == pytest.approx(1.0)
        assert exact_char_sum(polynomial, 1.0).value == pytest.approx(cmath.exp(2j * math.pi / 3))

    def test_against_brute_force(self):
        rng = random.Random(3)

        for _ in range(20):
            q = rng.choice([2, 3, 5])
            m = rng.randint(1, 10)
            terms = [(rng.randint(1, q - 1), rng.sample(range(m), rng.randint(1, min(3, m)))) for _ in range(5)]
            polynomial = CharPolynomial.from_terms(q, m, terms)
            p = rng.random()

            assert abs(exact_char_sum(polynomial, p).value - _brute_force_sum(polynomial, p)) < 1e-12

    def test_factorization(self):
        rng = random.Random(4)

        for _ in range(10):
            q = rng.choice([2, 3, 4])
            sizes = [rng.randint(1, 4) for _ in range(rng.randint(2, 5))]
            terms, start = [], 0
            for size in sizes:
                terms.append((rng.randint(1, q - 1), range(start, start + size)))
                start += size
            p = rng.random()
            product = 1
            for coefficient, variables in terms:
                product *= exact_char_sum(CharPolynomial(q, start, [(coefficient, variables)]), p).value

            assert abs(exact_char_sum(CharPolynomial(q, start, terms), p).value - product) < 1e-12

    def test_wide_polynomial_of_small_groups(self):
        polynomial = disjoint_block_polynomial(10, 3)

        assert polynomial.variable_count == 30
        assert exact_char_sum(polynomial, 0.5).modulus == pytest.approx(0.75 ** 10, abs=1e-12)

    def test_group_too_large(self):
        polynomial = CharPolynomial(2, 25, [(1, [v, v + 1]) for v in range(24)])

        with pytest.raises(SizeCapExceeded) as info:
            exact_char_sum(polynomial, 0.5)

        assert info.value.code == 'TOO_MANY_VARIABLES'

    def test_bad_probability(self):
        with pytest.raises(ParameterError):
            exact_char_sum(disjoint_block_polynomial(1, 1), 1.5)


class TestXorBound(object):
    def test_examples(self):
        assert xor_tv_bound(ExactDist(2, 1, [0.5, 0.5])) == (0.0, 0.0, 0.0)

        point = xor_tv_bound(ExactDist(2, 1, [1.0, 0.0]))

        assert point.epsilon == pytest.approx(1.0)
        assert point.bound == pytest.approx(2.0)
        assert point.actual_tv == pytest.approx(0.5)

        skewed = xor_tv_bound(ExactDist(2, 1, [0.75, 0.25]))

        assert skewed.epsilon == pytest.approx(0.5)
        assert skewed.bound == pytest.approx(1.0)
        assert skewed.actual_tv == pytest.approx(0.25)

    def test_epsilon_zero_only_when_uniform(self):
        assert xor_tv_bound(ExactDist(3, 2, [1 / 9] * 9)).epsilon == 0.0
        assert xor_tv_bound(EmpiricalDist(2, 2, [5, 5, 5, 5])).epsilon == 0.0
        assert xor_tv_bound(ExactDist(3, 2, [0.12] + [0.11] * 8)).epsilon > 0.0
        assert xor_tv_bound(EmpiricalDist(2, 2, [5, 5, 5, 6])).epsilon > 0.0

    def test_bound_holds_on_random_laws(self):
        rng = random.Random(9)

        for _ in range(25):
            q, k = rng.choice([(2, 1), (2, 3), (3, 2), (5, 1), (4, 2)])
            weights = [rng.random() ** 3 for _ in range(q ** k)]
            total = sum(weights)
            result = xor_tv_bound(ExactDist(q, k, [w / total for w in weights]))

            assert result.actual_tv <= result.bound + 1e-12

    def test_character_values(self):
        law = ExactDist(3, 1, [0.5, 0.3, 0.2])
        omega = cmath.exp(2j * math.pi / 3)
        expected = max(abs(sum(law.probabilities[x] * omega ** (c * x) for x in range(3))) for c in (1, 2))

        assert xor_tv_bound(law).epsilon == pytest.approx(expected)

    def test_no_coordinates(self):
        assert xor_tv_bound(ExactDist(2, 0, [1.0])) == (0.0, 0.0, 0.0)


class TestDisjointSystems(object):
    def test_find_in_two_triangles(self):
        host = read_host_file(get_test_path('two_triangles.txt'))
        system = find_disjoint_system(host, K3_ONLY, [1], 2)

        assert system.r == 2
        assert system.d == 3

    def test_prefers_largest_member(self):
        family = validate_family([catalog_graph('K3'), catalog_graph('K4')])
        system = find_disjoint_system(HostGraph.complete(5), family, [1, 1], 2)

        assert system.d == 6
        assert system.r == 1

    def test_zero_vector(self):
        with pytest.raises(ParameterError):
            find_disjoint_system(HostGraph.complete(4), K3_ONLY, [0], 2)

    def test_block_helpers(self):
        system = disjoint_block_system(3, 2)

        assert system.r == 3
        assert system.d == 2
        assert disjoint_block_polynomial(3, 2).variable_count == 6

        with pytest.raises(ParameterError):
            disjoint_block_polynomial(1, 0)


class TestConditionalLaw(object):
    def test_triangle(self):
        law = conditional_xi_distribution(HostGraph.complete(3), K3_ONLY, 2)

        assert law.probabilities.tolist() == [7 / 8, 1 / 8]

    def test_study_on_two_triangles(self):
        host = read_host_file(get_test_path('two_triangles.txt'))
        study = conditional_study(host, K3_ONLY, 2)

        assert len(study.rows) == 1
        row = study.rows[0]
        assert row.c == (1,)
        assert row.r == 2
        assert row.conditions_hold
        assert row.char_sum == pytest.approx(0.75 ** 2)
        assert study.epsilon == pytest.approx(0.5625)
        assert study.xor.actual_tv <= study.xor.bound + 1e-12

    def test_study_without_copies(self):
        study = conditional_study(catalog_graph('C5').to_host(), K3_ONLY, 3)

        assert [row.c for row in study.rows] == [(1,), (2,)]
        assert all(row.conditions_hold is None and row.r == 0 for row in study.rows)
        assert study.epsilon == pytest.approx(1.0)
