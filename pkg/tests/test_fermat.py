import numpy as np
import pytest
from sympy.ntheory import legendre_symbol as sympy_legendre
from sympy.ntheory import n_order, primerange

from src.number_theory.fermat import (
    MULTIPLE_OF_P,
    build_context,
    fermat_quotient,
    find_primitive_root_mod_p2,
    is_wieferich,
    legendre_symbol,
    multiplicative_order,
    order_of_two,
    require_odd_prime,
)
from src.utils.errors import CapacityError, ParameterError


class TestFermatQuotient:

    @pytest.mark.parametrize("p, u, expected", [(3, 2, 1), (5, 2, 3), (7, 14, 0), (11, 1, 0)])
    def test_known_values(self, p, u, expected):
        assert fermat_quotient(p, u) == expected

    def test_depends_on_u_mod_p2(self):
        assert fermat_quotient(5, 7) == fermat_quotient(5, 7 + 25)

    @pytest.mark.parametrize("p", [1, 2, 4, 9, 15, -3])
    def test_rejects_non_odd_primes(self, p):
        with pytest.raises(ParameterError):
            fermat_quotient(p, 2)

    def test_rejects_non_integers(self):
        with pytest.raises(ParameterError):
            require_odd_prime(3.0)
        with pytest.raises(ParameterError):
            require_odd_prime(True)

    def test_native_word_cap(self):
        with pytest.raises(CapacityError):
            require_odd_prime(65537)


class TestOrders:

    @pytest.mark.parametrize("a, n, expected", [(2, 9, 6), (2, 7, 3), (1, 25, 1)])
    def test_multiplicative_order(self, a, n, expected):
        assert multiplicative_order(a, n) == expected

    def test_order_matches_sympy(self):
        for p in primerange(3, 60):
            for a in (2, 3, 5):
                if a % p:
                    assert multiplicative_order(a, p * p) == n_order(a, p * p)

    def test_non_unit_rejected(self):
        with pytest.raises(ParameterError):
            multiplicative_order(3, 9)

    @pytest.mark.parametrize("p, lam", [(3, 2), (5, 4), (7, 3), (11, 10), (13, 12), (17, 8)])
    def test_order_of_two(self, p, lam):
        assert order_of_two(p) == lam

    @pytest.mark.parametrize("p, g", [(3, 2), (5, 2), (7, 3)])
    def test_primitive_root(self, p, g):
        assert find_primitive_root_mod_p2(p) == g

    def test_primitive_root_has_full_order(self):
        for p in primerange(3, 50):
            g = find_primitive_root_mod_p2(p)
            assert n_order(g, p * p) == p * (p - 1)


class TestWieferich:

    def test_known_wieferich_primes(self):
        assert is_wieferich(1093)
        assert is_wieferich(3511)

    def test_none_below_ten_thousand_otherwise(self):
        found = [p for p in primerange(3, 10_000) if is_wieferich(p)]
        assert found == [1093, 3511]

    def test_seven_is_ordinary(self):
        assert not is_wieferich(7)


class TestLegendre:

    @pytest.mark.parametrize("a, p, expected", [(4, 5, 1), (2, 5, -1), (10, 5, 0)])
    def test_values(self, a, p, expected):
        assert legendre_symbol(a, p) == expected

    def test_matches_sympy(self):
        for p in (3, 7, 13, 29):
            for a in range(1, p):
                assert legendre_symbol(a, p) == sympy_legendre(a, p)


class TestFermatContext:

    def test_p3_partition(self, contexts):
        ctx = contexts[3]
        assert (ctx.g, ctx.delta, ctx.mu) == (2, 1, 1)
        assert [set(ctx.coset(l)) for l in range(3)] == [{1, 8}, {2, 7}, {4, 5}]
        assert ctx.multiples == (0, 3, 6)
        assert ctx.coset_index(5) == 2
        assert ctx.coset_index(0) == MULTIPLE_OF_P

    def test_coset_table_is_read_only(self, contexts):
        with pytest.raises(ValueError):
            contexts[5].coset_of[1] = 0

    def test_partition_sizes(self, contexts):
        for p, ctx in contexts.items():
            assert all(len(ctx.coset(l)) == p - 1 for l in range(p))
            assert np.count_nonzero(ctx.coset_of == MULTIPLE_OF_P) == p

    def test_generator_cosets(self, contexts):
        for p, ctx in contexts.items():
            for j in range(p):
                expected = {pow(ctx.g, k * p + j, p * p) for k in range(p)}
                assert set(ctx.generator_coset(j)) == expected

    def test_subscripts_reduced_mod_p(self, contexts):
        ctx = contexts[7]
        assert ctx.coset(9) == ctx.coset(2)

    def test_residues_split_evenly(self, contexts):
        for p, ctx in contexts.items():
            assert len(ctx.residues) == len(ctx.non_residues) == (p - 1) // 2
            assert ctx.residues | ctx.non_residues == frozenset(range(1, p))

    def test_mu_is_quotient_of_two(self, contexts):
        for p, ctx in contexts.items():
            assert ctx.mu == fermat_quotient(p, 2)
            assert not ctx.wieferich

    def test_rejects_composite(self):
        with pytest.raises(ParameterError):
            build_context(9)
