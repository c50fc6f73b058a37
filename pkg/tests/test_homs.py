import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from csrickart.core import ModuleHom, RingMismatch, make_abelian_group, make_module, zn
from csrickart.homs import (
    additive_count,
    cokernel,
    compose,
    count_homs,
    embeds_in,
    endomorphisms,
    enumerate_homs,
    find_hom,
    first_hom_hitting,
    hom_with_image,
    hom_with_kernel,
    identity,
    idempotent_endos,
    idempotent_images,
    is_isomorphic,
    iter_homs,
    kernels_and_images,
    retraction,
)
from csrickart.lattice import direct_summands, lattice, span, submodules
from test_core import t2_regular

small_orders = st.lists(st.sampled_from([1, 2, 3, 4, 6, 8]), min_size=1, max_size=2)


def G(*orders):
    return make_abelian_group(list(orders))


def as_mask(M, elements):
    return sum(1 << M.index_of(list(x)) for x in elements)


class TestCounts:
    @pytest.mark.parametrize(
        "a,b,n", [((2,), (16,), 2), ((12,), (18,), 6), ((4,), (4,), 4), ((3,), (4,), 1), ((1,), (5,), 1)]
    )
    def test_examples(self, a, b, n):
        assert count_homs(G(*a), G(*b)) == n
        assert len(enumerate_homs(G(*a), G(*b))) == n

    @given(small_orders, small_orders)
    @settings(max_examples=60, deadline=None)
    def test_gcd_product(self, a, b):
        M, N = G(*a), G(*b)
        assert count_homs(M, N) == oracles.gcd_hom_count(a, b) == len(enumerate_homs(M, N))

    def test_ring_mismatch(self):
        with pytest.raises(RingMismatch):
            count_homs(G(2), make_module(zn(2), [2]))

    def test_iteration_cap(self):
        from csrickart.core import CarrierTooLarge

        with pytest.raises(CarrierTooLarge):
            list(iter_homs(G(2, 2, 2), G(2, 2, 2), cap=100))


class TestAgainstBruteForce:
    @pytest.mark.parametrize("a,b", [((4,), (2, 4)), ((2, 2), (4,)), ((6,), (2, 3)), ((2, 4), (2, 4)), ((8,), (2, 8))])
    def test_hom_sets(self, a, b):
        M, N = G(*a), G(*b)
        mine = {f.matrix for f in iter_homs(M, N)}
        brute = {tuple(tuple(y) for y in ys) for ys, _ in oracles.homs(M, N)}
        assert mine == brute

    @pytest.mark.parametrize("a,b", [((2, 4), (8,)), ((4,), (2, 4)), ((2, 2), (2, 2))])
    def test_kernels_images(self, a, b):
        M, N = G(*a), G(*b)
        ker, img = kernels_and_images(M, N)
        brute = oracles.homs(M, N)
        assert set(ker) == {as_mask(M, oracles.kernel(f)) for _, f in brute}
        assert set(img) == {as_mask(N, oracles.image(f)) for _, f in brute}

    def test_custom_ring_endomorphisms(self):
        M = t2_regular()
        mine = {f.matrix for f in endomorphisms(M)}
        brute = {tuple(tuple(y) for y in ys) for ys, _ in oracles.homs(M, M)}
        assert mine == brute
        # End of the regular module is the ring itself
        assert len(mine) == 8
        for f in endomorphisms(M):
            f.check()


class TestKernelImage:
    def test_doubling_on_z4(self):
        M = G(4)
        f = ModuleHom(M, M, [[2]])
        assert f.kernel.mask == f.image.mask == span(M, [[2]]).mask
        assert f.kernel.size == 2

    def test_injective_z2_to_z16(self):
        f = ModuleHom(G(2), G(16), [[8]])
        assert f.is_injective and f.image.size == 2

    def test_cokernel(self):
        f = ModuleHom(G(4), G(16), [[4]])
        Q, proj = cokernel(f)
        assert Q.size == 4 and proj.image.size == 4

    def test_rejects_non_hom(self):
        from csrickart.core import AlgebraError

        with pytest.raises(AlgebraError):
            ModuleHom(G(2), G(16), [[1]], check=True)

    def test_composition_associative(self):
        M, N, P = G(2, 4), G(8), G(4, 4)
        for f in list(iter_homs(M, N))[:6]:
            for g in list(iter_homs(N, P))[:6]:
                h = compose(g, f)
                h.check()
                x = M.element([1, 3])
                assert h(x) == g(f(x))


class TestIdempotents:
    @pytest.mark.parametrize("orders,n", [((4,), 2), ((2, 16), 10), ((6,), 4), ((2, 2), 8)])
    def test_counts(self, orders, n):
        es = idempotent_endos(G(*orders))
        assert len(es) == n
        for e in es:
            assert compose(e, e) == e

    def test_identity_and_zero_only_for_indecomposable(self):
        images = idempotent_images(G(8))
        assert [S.size for S in images] == [1, 8]

    @pytest.mark.parametrize("orders", [(2, 16), (2, 4, 4), (2, 2, 2), (3, 9), (2, 2, 2, 2, 4)])
    def test_images_are_summands(self, orders):
        M = G(*orders)
        enumerated = {S.mask for S in idempotent_images(M)}
        assert enumerated == {D.mask for D in direct_summands(M)}
        for D in direct_summands(M):
            e = retraction(M, D)
            assert e is not None and compose(e, e) == e and e.image.mask == D.mask

    def test_retraction_refuses_non_summand(self):
        M = G(2, 16)
        bad = next(S for S in submodules(M) if not lattice(M).is_summand(S.mask))
        assert retraction(M, bad) is None


class TestSearches:
    def test_find_injective(self):
        assert find_hom(G(2, 4), G(4, 4), "injective") is not None
        assert find_hom(G(2, 2, 2), G(4, 4), "injective") is None
        assert find_hom(G(16), G(2, 16), "surjective") is None

    @pytest.mark.parametrize(
        "a,b,iso", [((4, 6), (2, 12), True), ((2, 2), (4,), False), ((6,), (2, 3), True), ((2, 8), (4, 4), False)]
    )
    def test_isomorphic(self, a, b, iso):
        assert is_isomorphic(G(*a), G(*b)) == iso
        assert is_isomorphic(G(*a), G(*b), "search") == iso

    def test_embeds(self):
        assert embeds_in(G(2, 4), G(2, 8))
        assert not embeds_in(G(2, 2, 2), G(4, 8))
        assert embeds_in(G(2, 2), G(2, 4), "search")

    def test_hom_with_kernel_and_image(self):
        M, N = G(2, 16), G(2, 16)
        for K in submodules(M):
            f = hom_with_kernel(M, K, N)
            if f is not None:
                assert f.kernel.mask == K.mask
            I = K
            g = hom_with_image(M, I)
            if g is not None:
                assert g.image.mask == I.mask

    def test_first_hom_hitting_is_lex_first(self):
        M = G(2, 16)
        homs = list(iter_homs(M, M))
        target = {homs[37].kernel.mask}
        f = first_hom_hitting(M, M, target)
        assert f == next(h for h in homs if h.kernel.mask in target)


def rank_nullity_scan(M, batch=1 << 14):
    """(endomorphisms checked, violations of |Ker f| * |Im f| = |M|)."""
    from csrickart.homs import matrix_batches

    src = M.coords.astype(np.float64)
    n = bad = 0
    for F in matrix_batches(M, M, batch, cap=1 << 22):
        vals = M.index_of(np.matmul(src, F.astype(np.float64)).astype(np.int64))
        ker = np.count_nonzero(vals == 0, axis=1)
        flat = (vals + (np.arange(len(F)) * M.size)[:, None]).ravel()
        im = np.count_nonzero(np.bincount(flat, minlength=len(F) * M.size).reshape(len(F), -1), axis=1)
        bad += int(np.count_nonzero(ker * im != M.size))
        n += len(F)
    return n, bad


@pytest.mark.parametrize("orders", [(2, 16), (4, 4), (2, 2, 2), (3, 6), (2, 2, 4)])
def test_rank_nullity_exhaustive(orders):
    M = G(*orders)
    n, bad = rank_nullity_scan(M)
    assert n == count_homs(M, M) and bad == 0


@given(st.data())
@settings(max_examples=50, deadline=None)
def test_rank_nullity_random(data):
    M = G(2, 2, 2, 2, 2, 2)
    rows = [data.draw(st.lists(st.integers(0, 1), min_size=6, max_size=6)) for _ in range(6)]
    f = ModuleHom(M, M, rows)
    assert f.kernel.size * f.image.size == M.size
    assert additive_count(M, M) == 1 << 36
