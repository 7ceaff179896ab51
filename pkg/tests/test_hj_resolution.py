import math
from fractions import Fraction as F

import pytest

from fanoquotients.hj_resolution import (
    CyclicSing,
    ExceptionalChain,
    NotIsolated,
    chain_discrepancies,
    component_count,
    discrepancies,
    evaluate_chain,
    hj_continued_fraction,
    hj_expand,
    k2_correction,
    sing_from_eigenvalues,
)


def all_types(max_n):
    for n in range(2, max_n + 1):
        for q in range(1, n):
            if math.gcd(n, q) == 1:
                yield n, q


class TestExpansion:
    def test_node(self):
        assert hj_expand(CyclicSing(2, 1)) == (2,)

    def test_fifteen_four(self):
        assert hj_expand(CyclicSing(15, 4)) == (4, 4)

    def test_four_three(self):
        assert hj_expand(CyclicSing(4, 3)) == (2, 2, 2)

    def test_eleven_three_up_to_reversal(self):
        chain = hj_expand(CyclicSing(11, 3))
        assert chain in ((3, 4), (4, 3))

    def test_round_trip_oracle_up_to_200(self):
        # folding the continued fraction back must reproduce n/q exactly
        for n, q in all_types(200):
            assert evaluate_chain(hj_continued_fraction(n, q)) == F(n, q)

    def test_du_val_chain_lengths(self):
        for n in range(2, 60):
            assert component_count(CyclicSing(n, n - 1)) == n - 1


class TestDiscrepancies:
    def test_du_val_chain_is_crepant(self):
        assert discrepancies(CyclicSing(4, 3)) == (F(0), F(0), F(0))

    def test_three_four_chain(self):
        assert chain_discrepancies((3, 4)) == (F(6, 11), F(7, 11))

    def test_four_four_chain(self):
        assert chain_discrepancies((4, 4)) == (F(2, 3), F(2, 3))

    def test_single_minus_three(self):
        assert chain_discrepancies((3,)) == (F(1, 3),)

    def test_defining_system_up_to_200(self):
        for n, q in all_types(200):
            chain = ExceptionalChain.from_selfints(hj_continued_fraction(n, q))
            a = chain.discrepancies
            # M a = (2 - b_i) exactly, checked over the integers via n*a
            n_val = F(n)
            scaled = [int(x * n_val) for x in a]
            k = len(chain)
            for i in range(k):
                row = -chain.selfints[i] * scaled[i]
                if i > 0:
                    row += scaled[i - 1]
                if i + 1 < k:
                    row += scaled[i + 1]
                assert row == n * (2 - chain.selfints[i])
            assert all(0 <= x < 1 for x in a)
            assert (all(x == 0 for x in a)) == all(b == 2 for b in chain.selfints)

    def test_agrees_with_dense_solver(self):
        # dual-route check against the generic exact linear solver
        from fanoquotients.exact_linalg import QMatrix, solve_linear

        for n, q in all_types(40):
            chain = hj_continued_fraction(n, q)
            k = len(chain)
            m = QMatrix([[(-chain[i] if i == j else (1 if abs(i - j) == 1 else 0))
                          for j in range(k)] for i in range(k)])
            dense = solve_linear(m, [2 - b for b in chain])
            assert chain_discrepancies(chain) == dense


class TestK2Correction:
    def test_du_val_is_zero(self):
        assert k2_correction(CyclicSing(2, 1)) == 0

    def test_eleven_three(self):
        value = k2_correction(CyclicSing(11, 3))
        assert value == F(-20, 11)
        # the order-11 quotient books: 45/11 + 5 * (-20/11) = -5
        assert F(45, 11) + 5 * value == -5

    def test_three_one(self):
        value = k2_correction(CyclicSing(3, 1))
        assert value == F(-1, 3)
        # 27 such points: 15 + 27 * (-1/3) = 6
        assert 15 + 27 * value == 6

    def test_nonpositive_and_zero_iff_du_val(self):
        for n, q in all_types(120):
            sing = CyclicSing(n, q)
            value = k2_correction(sing)
            assert value <= 0
            assert (value == 0) == sing.is_du_val

    def test_agrees_with_generic_quadratic_form(self):
        # dual route: the collapsed sum against v^T M v on the dense matrix
        from fanoquotients.exact_linalg import QMatrix, quadratic_form

        for n, q in all_types(40):
            selfints = hj_continued_fraction(n, q)
            k = len(selfints)
            m = QMatrix([[(-selfints[i] if i == j else (1 if abs(i - j) == 1 else 0))
                          for j in range(k)] for i in range(k)])
            chain = ExceptionalChain.from_selfints(selfints)
            assert chain.k2_correction() == quadratic_form(m, chain.discrepancies)

    def test_reversal_invariance(self):
        # computing on the reversed chain gives the same correction
        for n, q in all_types(80):
            chain = hj_continued_fraction(n, q)
            direct = ExceptionalChain.from_selfints(chain).k2_correction()
            reversed_ = ExceptionalChain.from_selfints(chain[::-1]).k2_correction()
            assert direct == reversed_
            # and the canonical form agrees with both orientations
            assert k2_correction(CyclicSing(n, q)) == direct


class TestCanonicalForm:
    def test_inverse_pairs_identified(self):
        assert CyclicSing(11, 4) == CyclicSing(11, 3)
        assert CyclicSing(11, 4).q == 3

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            CyclicSing(6, 2)
        with pytest.raises(ValueError):
            CyclicSing(1, 0)
        with pytest.raises(ValueError):
            CyclicSing(5, 5)

    def test_display(self):
        assert CyclicSing(2, 1).display() == "A1"
        assert CyclicSing(4, 3).display() == "A3"
        assert CyclicSing(11, 3).display() == "A11,3"


class TestSingFromEigenvalues:
    def test_order_three_isolated_types(self):
        assert sing_from_eigenvalues(3, (1, 2)) == CyclicSing(3, 2)
        assert sing_from_eigenvalues(3, (1, 1)) == CyclicSing(3, 1)

    def test_order_fifteen(self):
        assert sing_from_eigenvalues(15, (4, 1)) == CyclicSing(15, 4)

    def test_order_four(self):
        assert sing_from_eigenvalues(4, (1, 3)) == CyclicSing(4, 3)

    def test_normalisation_uses_inverse(self):
        # 1/5(2, 3) = 1/5(1, 3 * 2^-1) = 1/5(1, 4)
        assert sing_from_eigenvalues(5, (2, 3)) == CyclicSing(5, 4)

    def test_fixed_curve_detected(self):
        with pytest.raises(NotIsolated):
            sing_from_eigenvalues(2, (0, 1))
        with pytest.raises(NotIsolated):
            # a power acts as a pseudo-reflection
            sing_from_eigenvalues(4, (2, 1))

    def test_unfaithful_rejected(self):
        with pytest.raises(ValueError):
            sing_from_eigenvalues(6, (2, 4))
