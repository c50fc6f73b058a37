"""Homomorphism sets between finite modules.

Hom(M, N) is enumerated row by row: the image of a generator of order o
must be killed by o, and every combination of such rows is an additive map.
Over a custom ring the candidates are then filtered by the generator-level
linearity condition ``A_i F = F B_i``, which is equivalent to
f(x r) = f(x) r for all x and r once f is additive.
"""
from __future__ import annotations

import math
from itertools import product

import numpy as np

from . import abelian
from .core import (
    CUSTOM_TAG,
    LIMITS,
    AlgebraError,
    CarrierTooLarge,
    FiniteModule,
    ModuleHom,
    RingMismatch,
    Submodule,
    canonical_form,
)
from .lattice import ZERO, lattice, quotient, submodules


def _same_ring(M: FiniteModule, N: FiniteModule) -> None:
    if M.ring != N.ring:
        raise RingMismatch("homomorphisms need modules over the same ring")


def candidates(M: FiniteModule, N: FiniteModule, j: int) -> np.ndarray:
    """Indices of the elements of N that generator j of M may be sent to."""
    return np.flatnonzero(N.mul_int(M.orders[j]) == 0)


def _candidate_rows(M, N):
    return [N.coords[candidates(M, N, j)] for j in range(M.ngens)]


def _linear_mask(M: FiniteModule, N: FiniteModule, F: np.ndarray) -> np.ndarray:
    """Boolean per matrix in the batch F (B, s, t): ring-linear or not."""
    if M.ring.tag != CUSTOM_TAG:
        return np.ones(len(F), dtype=bool)
    ok = np.ones(len(F), dtype=bool)
    for A, B in zip(M.action, N.action):
        lhs = np.einsum("jk,bkl->bjl", A, F)
        rhs = np.einsum("bjk,kl->bjl", F, B)
        ok &= np.all((lhs - rhs) % N.order_array == 0, axis=(1, 2))
    return ok


def additive_count(M: FiniteModule, N: FiniteModule) -> int:
    """Number of additive maps M -> N (an upper bound for |Hom|)."""
    return math.prod(len(candidates(M, N, j)) for j in range(M.ngens))


def matrix_batches(M: FiniteModule, N: FiniteModule, batch: int = 1 << 15, *, cap: int | None = None):
    """Yield arrays (B, s, t) of hom matrices in lexicographic order."""
    _same_ring(M, N)
    rows = _candidate_rows(M, N)
    counts = [len(r) for r in rows]
    total = math.prod(counts)
    cap = LIMITS.max_homs if cap is None else cap
    if total > cap:
        raise CarrierTooLarge(f"Hom({M!r}, {N!r}) has {total} candidate maps, cap is {cap}")
    for start in range(0, total, batch):
        flat = np.arange(start, min(total, start + batch))
        picks = np.unravel_index(flat, counts)
        F = np.stack([rows[j][picks[j]] for j in range(M.ngens)], axis=1)
        F = F.reshape(len(flat), M.ngens, N.ngens)
        keep = _linear_mask(M, N, F)
        if not keep.all():
            F = F[keep]
        if len(F):
            yield F


def iter_homs(M: FiniteModule, N: FiniteModule, *, cap: int | None = None):
    """Lazily yield Hom(M, N) in lexicographic matrix order."""
    for F in matrix_batches(M, N, cap=cap):
        for mat in F:
            yield ModuleHom(M, N, mat)


def enumerate_homs(M: FiniteModule, N: FiniteModule) -> list[ModuleHom]:
    """The complete, duplicate-free Hom(M, N) in lexicographic matrix order."""
    return list(iter_homs(M, N))


def count_homs(M: FiniteModule, N: FiniteModule) -> int:
    _same_ring(M, N)
    if M.ring.tag != CUSTOM_TAG:
        return additive_count(M, N)
    return sum(len(F) for F in matrix_batches(M, N))


def kernel(f: ModuleHom) -> Submodule:
    return f.kernel


def image(f: ModuleHom) -> Submodule:
    return f.image


def cokernel(f: ModuleHom):
    """Target / Im(f) with its projection."""
    q = quotient(f.target, f.image)
    return q.module, q.projection


def compose(g: ModuleHom, f: ModuleHom) -> ModuleHom:
    """g after f."""
    if f.target != g.source:
        raise AlgebraError("compose(g, f) needs target(f) == source(g)")
    return ModuleHom(f.source, g.target, f.array @ g.array)


def identity(M: FiniteModule) -> ModuleHom:
    return ModuleHom(M, M, np.eye(M.ngens, dtype=np.int64))


def zero_hom(M: FiniteModule, N: FiniteModule) -> ModuleHom:
    return ModuleHom(M, N, np.zeros((M.ngens, N.ngens), dtype=np.int64))


def endomorphisms(M: FiniteModule) -> list[ModuleHom]:
    return enumerate_homs(M, M)


def idempotent_matrices(M: FiniteModule):
    """Yield the idempotent endomorphism matrices of M in lexicographic order."""
    for F in matrix_batches(M, M):
        sq = np.einsum("bij,bjk->bik", F, F) % M.order_array
        for mat in F[np.all(sq == F, axis=(1, 2))]:
            yield mat


def idempotent_endos(M: FiniteModule) -> list[ModuleHom]:
    """All e in End(M) with e*e = e."""
    return [ModuleHom(M, M, mat) for mat in idempotent_matrices(M)]


def kernels_and_images(M: FiniteModule, N: FiniteModule):
    """Distinct kernels and images over all of Hom(M, N).

    Returns two dicts mask -> first matrix (in lexicographic order) realizing it.
    """
    kernels: dict[int, np.ndarray] = {}
    images: dict[int, np.ndarray] = {}
    src = M.coords
    for F in matrix_batches(M, N):
        vals = N.index_of(np.einsum("sj,bjk->bsk", src, F))
        kb = np.packbits(vals == 0, axis=1, bitorder="little")
        ib = np.zeros((len(F), N.size), dtype=bool)
        ib[np.arange(len(F))[:, None], vals] = True
        ib = np.packbits(ib, axis=1, bitorder="little")
        for packed, store in ((kb, kernels), (ib, images)):
            uniq, first = np.unique(packed, axis=0, return_index=True)
            for row, at in zip(uniq, first):
                key = int.from_bytes(row.tobytes(), "little")
                if key not in store:
                    store[key] = F[at]
    return kernels, images


def first_hom_hitting(M: FiniteModule, N: FiniteModule, targets, *, kernels: bool = True) -> ModuleHom | None:
    """First hom M -> N in lexicographic order whose kernel (or image) mask is in ``targets``."""
    targets = set(targets)
    src = M.coords
    for F in matrix_batches(M, N):
        vals = N.index_of(np.einsum("sj,bjk->bsk", src, F))
        if kernels:
            bits = vals == 0
        else:
            bits = np.zeros((len(F), N.size), dtype=bool)
            bits[np.arange(len(F))[:, None], vals] = True
        packed = np.packbits(bits, axis=1, bitorder="little")
        for row, mat in zip(packed, F):
            if int.from_bytes(row.tobytes(), "little") in targets:
                return ModuleHom(M, N, mat)
    return None


# -- searches ------------------------------------------------------------------

def _sub_coords(M: FiniteModule, upto: int) -> np.ndarray:
    """Coordinates of the elements supported on generators 0..upto."""
    c = M.coords
    if upto + 1 < M.ngens:
        c = c[np.all(c[:, upto + 1:] == 0, axis=1)]
    return c


def find_hom(M: FiniteModule, N: FiniteModule, want: str = "injective") -> ModuleHom | None:
    """First hom M -> N in lexicographic order that is injective, surjective or bijective.

    Partial assignments are pruned: an injective map must already be injective
    on the span of the assigned generators, and a surjective one must still be
    able to reach all of N.
    """
    _same_ring(M, N)
    if want not in ("injective", "surjective", "bijective"):
        raise ValueError(want)
    inj = want in ("injective", "bijective")
    sur = want in ("surjective", "bijective")
    if inj and M.size > N.size or sur and M.size < N.size:
        return None
    rows = _candidate_rows(M, N)
    subs = [_sub_coords(M, j) for j in range(M.ngens)]
    room = [1] * (M.ngens + 1)
    for j in range(M.ngens - 1, -1, -1):
        room[j] = room[j + 1] * math.gcd(M.orders[j], N.exponent)
    F = np.zeros((M.ngens, N.ngens), dtype=np.int64)

    def rec(j: int) -> np.ndarray | None:
        if j == M.ngens:
            f = ModuleHom(M, N, F)
            if M.ring.tag == CUSTOM_TAG and not _linear_mask(M, N, F[None])[0]:
                return None
            if (inj and not f.is_injective) or (sur and not f.is_surjective):
                return None
            return F.copy()
        for row in rows[j]:
            F[j] = row
            vals = N.index_of(subs[j] @ F)
            if inj and len(np.unique(vals)) != len(vals):
                continue
            if sur:
                reach = len(np.unique(vals)) if j < M.ngens - 1 else None
                if reach is not None and reach * room[j + 1] < N.size:
                    continue
            found = rec(j + 1)
            if found is not None:
                return found
        F[j] = 0
        return None

    mat = rec(0)
    return None if mat is None else ModuleHom(M, N, mat)


def is_isomorphic(M: FiniteModule, N: FiniteModule, method: str = "auto") -> bool:
    """True iff some hom M -> N is bijective (canonical forms over Z and Z/n)."""
    _same_ring(M, N)
    if M.size != N.size:
        return False
    if method == "auto" and M.is_abelian_type:
        return canonical_form(M) == canonical_form(N)
    return find_hom(M, N, "bijective") is not None


def embeds_in(M: FiniteModule, N: FiniteModule, method: str = "auto") -> bool:
    """True iff some hom M -> N is injective."""
    _same_ring(M, N)
    if method == "auto" and M.is_abelian_type:
        return abelian.type_embeds(canonical_form(M), canonical_form(N))
    return find_hom(M, N, "injective") is not None


def retraction(M: FiniteModule, D: Submodule) -> ModuleHom | None:
    """An idempotent endomorphism of M with image D, or None if there is none.

    Over Z and Z/n the identity of D is extended one generator at a time:
    if g has order m modulo the current domain S, the value y of g must
    satisfy m*y = phi(m*g) with y in D; choices are backtracked.  Over
    custom rings End(M) is searched directly.
    """
    if D.owner != M:
        raise AlgebraError("retraction needs a submodule of M")
    if not M.is_abelian_type:
        for mat in idempotent_matrices(M):
            e = ModuleHom(M, M, mat)
            if e.image.mask == D.mask:
                return e
        return None
    d_idx = np.array(D.elements)
    table = np.full(M.size, -1, dtype=np.int64)
    table[d_idx] = d_idx
    gens = [M.index_of(row) for row in np.eye(M.ngens, dtype=np.int64)]
    add = M.add_table

    def rec(k: int, dom: np.ndarray, tab: np.ndarray) -> np.ndarray | None:
        if k == len(gens):
            return tab
        g = gens[k]
        if tab[g] >= 0:
            return rec(k + 1, dom, tab)
        dom_mask = np.zeros(M.size, dtype=bool)
        dom_mask[dom] = True
        m, y = 1, g
        while not dom_mask[y]:
            y = int(add[y, g])
            m += 1
        target = tab[y]
        mult = M.mul_int(m)
        for sol in d_idx[mult[d_idx] == target]:
            new = tab.copy()
            layers = [dom]
            cg, cy = 0, 0
            for _ in range(1, m):
                cg = int(add[cg, g])
                cy = int(add[cy, sol])
                shifted = add[dom, cg]
                new[shifted] = add[tab[dom], cy]
                layers.append(shifted)
            found = rec(k + 1, np.concatenate(layers), new)
            if found is not None:
                return found
        return None

    tab = rec(0, d_idx, table)
    if tab is None:
        return None
    e = ModuleHom(M, M, M.coords[tab[gens]])
    return e


def idempotent_images(M: FiniteModule, *, enumerate_limit: int = 1 << 16) -> list[Submodule]:
    """{image(e) : e idempotent}, in lattice order.

    Filters End(M) when it has at most ``enumerate_limit`` candidate maps,
    otherwise asks for a retraction onto each submodule.
    """
    lat = lattice(M)
    if additive_count(M, M) <= enumerate_limit or not M.is_abelian_type:
        seen = set()
        for mat in idempotent_matrices(M):
            seen.add(ModuleHom(M, M, mat).image.mask)
        return [Submodule(M, m) for m in lat.masks if m in seen]
    return [S for S in submodules(M) if retraction(M, S) is not None]


def hom_with_kernel(M: FiniteModule, K: Submodule, N: FiniteModule) -> ModuleHom | None:
    """A hom M -> N whose kernel is exactly K: the projection onto M/K followed by
    the first embedding M/K -> N."""
    q = quotient(M, K)
    emb = find_hom(q.module, N, "injective")
    return None if emb is None else compose(emb, q.projection)


def hom_with_image(M: FiniteModule, I: Submodule) -> ModuleHom | None:
    """A hom M -> owner(I) whose image is exactly I."""
    from .lattice import as_module

    D, incl = as_module(I)
    onto = find_hom(M, D, "surjective")
    return None if onto is None else compose(incl, onto)


def zero_kernel_mask() -> int:
    return ZERO
