import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from csrickart.core import AlgebraError, canonical_form, make_abelian_group, zero_module
from csrickart.lattice import (
    complements,
    direct_summands,
    essential_in_summand,
    intersect,
    is_direct_summand,
    is_essential,
    is_superfluous,
    lattice,
    lies_above_summand,
    quotient,
    radical,
    socle,
    span,
    submodule_sum,
    submodules,
    whole,
    zero,
)
from test_core import t2_regular


def G(*orders):
    return make_abelian_group(list(orders))


def as_set(S):
    return frozenset(tuple(int(v) for v in S.owner.coords[i]) for i in range(S.owner.size) if S.mask >> i & 1)


M216 = G(2, 16)


def sub(M, *gens):
    return span(M, [list(g) for g in gens])


class TestEnumeration:
    def test_counts(self):
        assert len(submodules(G(4))) == 3
        assert len(submodules(M216)) == 14
        assert len(submodules(zero_module())) == 1

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_z2_z2n_count(self, n):
        assert len(submodules(G(2, 2 ** n))) == 3 * n + 2

    @pytest.mark.parametrize("orders", [(4,), (2, 4), (2, 2, 2), (3, 6), (2, 8), (9,)])
    def test_matches_closure_search(self, orders):
        M = G(*orders)
        assert {as_set(S) for S in submodules(M)} == oracles.submodules(M)

    def test_custom_ring_lattice(self):
        M = t2_regular()
        assert {as_set(S) for S in submodules(M)} == oracles.submodules(M)

    def test_order_is_deterministic(self):
        a = [S.mask for S in submodules(G(2, 4, 4))]
        from csrickart.lattice import clear_caches

        clear_caches()
        assert a == [S.mask for S in submodules(G(2, 4, 4))]
        assert [S.size for S in submodules(G(2, 4, 4))] == sorted(S.size for S in submodules(G(2, 4, 4)))


class TestMeetJoin:
    def test_examples(self):
        A = sub(M216, (0, 1))
        B = sub(M216, (1, 1))
        assert intersect(A, A) == A
        meet = intersect(A, B)
        assert meet.size == 8 and meet == sub(M216, (0, 2))
        join = submodule_sum(sub(M216, (0, 2)), B)
        assert join.size == 16
        assert as_set(join) == {(a, b) for a in range(2) for b in range(16) if a % 2 == b % 2}

    def test_owner_mismatch(self):
        with pytest.raises(AlgebraError):
            intersect(whole(G(4)), whole(G(2, 2)))

    @given(st.data())
    @settings(max_examples=80, deadline=None)
    def test_lattice_identities(self, data):
        M = G(2, 4, 4) if data.draw(st.booleans()) else G(2, 3, 6)
        subs = submodules(M)
        pick = st.sampled_from(subs)
        A, B, C = data.draw(pick), data.draw(pick), data.draw(pick)
        assert intersect(A, B) == intersect(B, A)
        assert submodule_sum(A, B) == submodule_sum(B, A)
        assert intersect(A, submodule_sum(A, B)) == A  # absorption
        assert submodule_sum(A, intersect(A, B)) == A
        assert submodule_sum(A, submodule_sum(B, C)) == submodule_sum(submodule_sum(A, B), C)
        # second isomorphism theorem in sizes
        assert submodule_sum(A, B).size * intersect(A, B).size == A.size * B.size
        # modular law for A <= C
        if A.mask & ~C.mask == 0:
            assert intersect(submodule_sum(A, B), C) == submodule_sum(A, intersect(B, C))


class TestQuotients:
    def test_examples(self):
        Z16 = G(16)
        q = quotient(Z16, sub(Z16, (4,)))
        assert canonical_form(q.module) == (4,)
        assert q.projection.image.size == 4
        M = G(2, 4)
        assert canonical_form(quotient(M, zero(M)).module) == canonical_form(M)
        assert quotient(M, whole(M)).module.size == 1

    def test_projection_kernel(self):
        for K in submodules(M216):
            q = quotient(M216, K)
            assert q.projection.kernel == K
            assert q.module.size * K.size == M216.size


class TestEssentialSuperfluous:
    def test_examples(self):
        Z4 = G(4)
        two = sub(Z4, (2,))
        assert is_essential(two)
        assert is_essential(whole(M216))
        assert not is_essential(sub(M216, (1, 0)))
        assert is_superfluous(zero(M216))
        assert is_superfluous(two)
        assert not is_superfluous(sub(M216, (1, 4)))
        assert not is_superfluous(whole(M216))
        assert not is_essential(zero(M216))
        assert is_essential(zero(zero_module()))

    def test_containment_required(self):
        with pytest.raises(AlgebraError):
            is_essential(sub(M216, (1, 0)), sub(M216, (0, 1)))
        with pytest.raises(AlgebraError):
            is_superfluous(sub(M216, (1, 0)), sub(M216, (0, 1)))

    def test_socle_radical(self):
        Z4 = G(4)
        assert socle(Z4) == radical(Z4) == sub(Z4, (2,))
        assert socle(zero_module()).size == 1
        assert radical(M216) == sub(M216, (0, 2)) and radical(M216).size == 8

    @pytest.mark.parametrize("orders", [(4,), (2, 4), (2, 2, 2), (2, 16), (3, 6)])
    def test_against_definitions(self, orders):
        M = G(*orders)
        subs = oracles.submodules(M)
        for K in submodules(M):
            for D in submodules(M):
                if K.mask & ~D.mask:
                    continue
                assert is_essential(K, D) == oracles.is_essential(as_set(K), as_set(D), subs)
                assert is_superfluous(K, D) == oracles.is_superfluous(M, as_set(K), as_set(D), subs)

    @pytest.mark.parametrize("orders", [(2, 2, 4), (4, 8), (2, 2, 2, 2), (3, 3, 3), (2, 6, 6)])
    def test_fast_paths_match_brute(self, orders):
        lat = lattice(G(*orders))
        for d in lat.masks:
            for k in lat.masks:
                if k & ~d:
                    continue
                assert lat.is_essential(k, d) == lat.is_essential(k, d, brute=True)
                assert lat.is_superfluous(k, d) == lat.is_superfluous(k, d, brute=True)


class TestSummands:
    def test_examples(self):
        assert len(direct_summands(M216)) == 6
        Z4 = G(4)
        assert not is_direct_summand(sub(Z4, (2,)))
        assert is_direct_summand(zero(M216)) and is_direct_summand(whole(M216))

    @pytest.mark.parametrize("orders", [(2, 4), (2, 2, 2), (2, 16), (3, 9), (2, 3, 4)])
    def test_against_definition(self, orders):
        M = G(*orders)
        subs = oracles.submodules(M)
        assert {as_set(D) for D in direct_summands(M)} == oracles.summands(M, subs)

    def test_complements(self):
        for D in direct_summands(M216):
            for C in complements(D):
                assert intersect(C, D).size == 1 and submodule_sum(C, D) == whole(M216)

    def test_essential_in_summand(self):
        K = sub(M216, (1, 4))
        assert essential_in_summand(K) is None
        D = essential_in_summand(sub(M216, (0, 8)))
        assert D is not None and is_direct_summand(D)

    def test_lies_above(self):
        for D in direct_summands(M216):
            ok, K = lies_above_summand(D)
            assert ok and K == D
        ok, K = lies_above_summand(sub(M216, (0, 2)))
        assert ok and K.size == 1
        ok, K = lies_above_summand(sub(M216, (1, 4)))
        assert not ok and K is None

    @pytest.mark.parametrize("orders", [(2, 4), (2, 2, 2), (2, 16), (4, 4)])
    def test_lies_above_against_definition(self, orders):
        M = G(*orders)
        subs = oracles.submodules(M)
        summ = oracles.summands(M, subs)
        lat = lattice(M)
        for L in submodules(M):
            expected = oracles.lies_above_summand(M, as_set(L), subs, summ)
            assert lies_above_summand(L)[0] == expected
            ok, K = lies_above_summand(L)
            if ok:
                assert lat.quotient_superfluous_brute(L.mask, K.mask)
