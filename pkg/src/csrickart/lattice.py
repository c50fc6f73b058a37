"""Submodule lattices of finite modules and the relations the predicates need.

All submodules of a module are enumerated once by breadth-first joining of
cyclic submodules and cached per module.  Essential and superfluous tests
default to the socle/radical criteria; pass ``brute=True`` to quantify over
the lattice directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import abelian
from .core import (
    LIMITS,
    AlgebraError,
    CarrierTooLarge,
    FiniteModule,
    ModuleHom,
    Submodule,
    bools_from_mask,
    indices_from_mask,
    mask_from_bools,
    mask_from_indices,
)

ZERO = 1  # mask of {0}


def _is_prime(n: int) -> bool:
    f = abelian.factorize(n) if n > 1 else ()
    return len(f) == 1 and f[0][1] == 1


def _idx(M: FiniteModule, mask: int) -> np.ndarray:
    return indices_from_mask(mask, M.size)


def sum_masks(M: FiniteModule, a: int, b: int) -> int:
    """Mask of A + B for additive subgroups A, B."""
    if a & ~b == 0:
        return b
    if b & ~a == 0:
        return a
    s = M.add_table[np.ix_(_idx(M, a), _idx(M, b))]
    return mask_from_indices(s.ravel(), M.size)


def span_mask(M: FiniteModule, elements) -> int:
    """Mask of the submodule generated by the given element indices."""
    cur = ZERO
    cyc = M.cyclic_masks
    for x in elements:
        if not (cur >> int(x)) & 1:
            cur = sum_masks(M, cur, cyc[int(x)])
    return cur


def additive_span(M: FiniteModule, base: int, x: int) -> int:
    """Mask of the additive subgroup base + <x> (no ring action)."""
    if (base >> x) & 1:
        return base
    multiples = [0]
    y = x
    while y != 0:
        multiples.append(y)
        y = int(M.add_table[y, x])
    s = M.add_table[np.ix_(_idx(M, base), np.array(multiples))]
    return mask_from_indices(s.ravel(), M.size)


class Lattice:
    """The full submodule lattice of one module plus derived caches."""

    def __init__(self, M: FiniteModule):
        self.module = M
        self.full = (1 << M.size) - 1
        self.masks = self._enumerate()
        self.position = {m: i for i, m in enumerate(self.masks)}
        self._es: dict[int, int | None] = {}
        self._above: dict[int, int | None] = {}
        self._rad_of: dict[int, int] = {}
        self._types: dict[int, tuple[int, ...]] = {}
        self._qtypes: dict[int, tuple[int, ...]] = {}

    def _enumerate(self) -> list[int]:
        M = self.module
        cyc = sorted(set(M.cyclic_masks))
        seen = set(cyc)
        seen.add(ZERO)
        frontier = [c for c in cyc if c != ZERO]
        while frontier:
            new = []
            for X in frontier:
                for C in cyc:
                    if C & ~X == 0:
                        continue
                    S = sum_masks(M, X, C)
                    if S not in seen:
                        seen.add(S)
                        new.append(S)
                        if len(seen) > LIMITS.max_submodules:
                            raise CarrierTooLarge(
                                f"{M!r} has more than {LIMITS.max_submodules} submodules"
                            )
            frontier = new
        size = M.size

        def order_key(m):
            return (m.bit_count(), tuple(indices_from_mask(m, size).tolist()))

        return sorted(seen, key=order_key)

    def __len__(self):
        return len(self.masks)

    def sub(self, mask: int) -> Submodule:
        return Submodule(self.module, mask)

    def submodules(self) -> list[Submodule]:
        return [Submodule(self.module, m) for m in self.masks]

    # -- atoms, coatoms, socle, radical
    @cached_property
    def minimal(self) -> list[int]:
        nonzero = [m for m in self.masks if m != ZERO]
        out = []
        for m in nonzero:
            n = m.bit_count()
            # prime order forces simplicity
            if _is_prime(n) or not any(o != m and o & ~m == 0 for o in nonzero if o.bit_count() < n):
                out.append(m)
        return out

    @cached_property
    def maximal(self) -> list[int]:
        return self.maximal_below(self.full)

    def maximal_below(self, top: int) -> list[int]:
        """Maximal proper submodules of the submodule ``top``."""
        total = top.bit_count()
        below = [m for m in self.masks if m != top and m & ~top == 0]
        out = []
        for m in below:
            n = m.bit_count()
            if _is_prime(total // n) or not any(
                o != m and m & ~o == 0 for o in below if o.bit_count() > n
            ):
                out.append(m)
        return out

    @cached_property
    def socle(self) -> int:
        s = ZERO
        for m in self.minimal:
            s = sum_masks(self.module, s, m)
        return s

    @cached_property
    def radical(self) -> int:
        return self.radical_of(self.full)

    def radical_of(self, top: int) -> int:
        if top not in self._rad_of:
            r = top
            for m in self.maximal_below(top):
                r &= m
            self._rad_of[top] = r
        return self._rad_of[top]

    # -- essential / superfluous
    def is_essential(self, k: int, d: int | None = None, *, brute=False) -> bool:
        d = self.full if d is None else d
        if k & ~d:
            raise AlgebraError("essential test needs K contained in D")
        if brute:
            return all(x & k != ZERO for x in self.masks if x != ZERO and x & ~d == 0)
        return (self.socle & d) & ~k == 0

    def is_essential_cyclic(self, k: int, d: int | None = None) -> bool:
        """K is essential in D iff every nonzero cyclic submodule of D meets K."""
        d = self.full if d is None else d
        cyc = self.module.cyclic_masks
        return all(cyc[x] & k != ZERO for x in _idx(self.module, d) if x != 0)

    def is_superfluous(self, k: int, d: int | None = None, *, brute=False) -> bool:
        d = self.full if d is None else d
        if k & ~d:
            raise AlgebraError("superfluous test needs K contained in D")
        if brute:
            total = d.bit_count()
            nk = k.bit_count()
            for x in self.masks:
                if x & ~d or x == d:
                    continue
                if nk * x.bit_count() // (k & x).bit_count() == total:
                    return False
            return True
        return k & ~self.radical_of(d) == 0

    # -- direct summands
    @cached_property
    def _by_size(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for m in self.masks:
            out.setdefault(m.bit_count(), []).append(m)
        return out

    def complements(self, k: int) -> list[int]:
        """Every C with K & C = 0 and K + C = M."""
        want = self.module.size // k.bit_count()
        return [c for c in self._by_size.get(want, []) if c & k == ZERO]

    @cached_property
    def _first_complement(self) -> dict[int, int | None]:
        out = {}
        for k in self.masks:
            want = self.module.size // k.bit_count()
            out[k] = next((c for c in self._by_size.get(want, []) if c & k == ZERO), None)
        return out

    @cached_property
    def summands(self) -> list[int]:
        return [k for k in self.masks if self._first_complement[k] is not None]

    @cached_property
    def summand_set(self) -> frozenset[int]:
        return frozenset(self.summands)

    def is_summand(self, k: int) -> bool:
        return k in self.summand_set

    def essential_summand(self, k: int) -> int | None:
        """First direct summand D with K essential in D, or None."""
        if k not in self._es:
            if k in self.summand_set:
                self._es[k] = k
                return k
            soc = self.socle
            self._es[k] = next(
                (d for d in self.summands if k & ~d == 0 and (soc & d) & ~k == 0), None
            )
        return self._es[k]

    def submodule_type(self, k: int) -> tuple[int, ...]:
        """Invariant factors of the submodule K (Z and Z/n modules)."""
        t = self._types.get(k)
        if t is None:
            t = self._types[k] = subquotient_type(self.module, k, ZERO)
        return t

    def quotient_type(self, k: int) -> tuple[int, ...]:
        """Invariant factors of M/K (Z and Z/n modules)."""
        t = self._qtypes.get(k)
        if t is None:
            t = self._qtypes[k] = subquotient_type(self.module, self.full, k)
        return t

    def upper_radical(self, k: int) -> int:
        """Preimage of Rad(M/K): intersection of the maximal submodules containing K."""
        r = self.full
        for m in self.maximal:
            if k & ~m == 0:
                r &= m
        return r

    def summand_below(self, l: int) -> int | None:
        """First direct summand K inside L with L/K superfluous in M/K, or None."""
        if l not in self._above:
            if l in self.summand_set:
                self._above[l] = l
                return l
            self._above[l] = next(
                (k for k in self.summands if k & ~l == 0 and l & ~self.upper_radical(k) == 0),
                None,
            )
        return self._above[l]

    def quotient_superfluous_brute(self, l: int, k: int) -> bool:
        """L/K superfluous in M/K, quantified over all X with K <= X <= M."""
        total = self.module.size
        nl = l.bit_count()
        for x in self.masks:
            if k & ~x or x == self.full:
                continue
            if nl * x.bit_count() // (l & x).bit_count() == total:
                return False
        return True


_LATTICES: dict = {}


def lattice(M: FiniteModule) -> Lattice:
    """Cached lattice of M, keyed by the module's structure."""
    lat = _LATTICES.get(M.key)
    if lat is None:
        lat = Lattice(M)
        _LATTICES[M.key] = lat
    return lat


def clear_caches() -> None:
    _LATTICES.clear()


def _owned(M: FiniteModule, K) -> int:
    if isinstance(K, Submodule):
        if K.owner != M:
            raise AlgebraError("submodule belongs to a different module")
        return K.mask
    return int(K)


# -- public operations ---------------------------------------------------------

def submodules(M: FiniteModule) -> list[Submodule]:
    """All submodules, ordered by size then by sorted element list."""
    return lattice(M).submodules()


def cyclic_submodule(M: FiniteModule, x) -> Submodule:
    if not isinstance(x, (int, np.integer)):
        x = M.index_of(getattr(x, "coeffs", x))
    return Submodule(M, M.cyclic_masks[int(x)])


def span(M: FiniteModule, elements) -> Submodule:
    """Submodule generated by elements (indices, coefficient vectors or Elements)."""
    idx = []
    for x in elements:
        if isinstance(x, (int, np.integer)):
            idx.append(int(x))
        else:
            idx.append(M.index_of(getattr(x, "coeffs", x)))
    return Submodule(M, span_mask(M, idx))


def whole(M: FiniteModule) -> Submodule:
    return Submodule(M, (1 << M.size) - 1)


def zero(M: FiniteModule) -> Submodule:
    return Submodule(M, ZERO)


def intersect(A: Submodule, B: Submodule) -> Submodule:
    if A.owner != B.owner:
        raise AlgebraError("intersect needs submodules of the same module")
    return Submodule(A.owner, A.mask & B.mask)


def submodule_sum(A: Submodule, B: Submodule) -> Submodule:
    if A.owner != B.owner:
        raise AlgebraError("sum needs submodules of the same module")
    return Submodule(A.owner, sum_masks(A.owner, A.mask, B.mask))


def is_essential(K: Submodule, D: Submodule | None = None, *, brute=False) -> bool:
    """K essential in D (D defaults to the whole module)."""
    lat = lattice(K.owner)
    d = None if D is None else _owned(K.owner, D)
    return lat.is_essential(K.mask, d, brute=brute)


def is_superfluous(K: Submodule, D: Submodule | None = None, *, brute=False) -> bool:
    lat = lattice(K.owner)
    d = None if D is None else _owned(K.owner, D)
    return lat.is_superfluous(K.mask, d, brute=brute)


def socle(M: FiniteModule) -> Submodule:
    return Submodule(M, lattice(M).socle)


def radical(M: FiniteModule) -> Submodule:
    return Submodule(M, lattice(M).radical)


def direct_summands(M: FiniteModule) -> list[Submodule]:
    return [Submodule(M, k) for k in lattice(M).summands]


def is_direct_summand(K: Submodule, M: FiniteModule | None = None) -> bool:
    M = K.owner if M is None else M
    return lattice(M).is_summand(_owned(M, K))


def complements(K: Submodule) -> list[Submodule]:
    return [Submodule(K.owner, c) for c in lattice(K.owner).complements(K.mask)]


def essential_in_summand(K: Submodule) -> Submodule | None:
    """First direct summand in which K is essential, or None."""
    d = lattice(K.owner).essential_summand(K.mask)
    return None if d is None else Submodule(K.owner, d)


def lies_above_summand(L: Submodule, M: FiniteModule | None = None) -> tuple[bool, Submodule | None]:
    """Whether L lies above a direct summand, with the first witness K."""
    M = L.owner if M is None else M
    k = lattice(M).summand_below(_owned(M, L))
    return (k is not None, None if k is None else Submodule(M, k))


# -- subquotients ----------------------------------------------------------------

def _order_mod(M: FiniteModule, x: int, k_mask: int) -> int:
    n, y = 1, x
    while not (k_mask >> y) & 1:
        y = int(M.add_table[y, x])
        n += 1
    return n


def _pgroup_basis(M: FiniteModule, l_mask: int, k_mask: int, p: int) -> list[tuple[int, int]]:
    """Basis of the p-group L/K as (representative, order) pairs, largest order first."""
    if l_mask == k_mask:
        return []
    reps = _idx(M, l_mask & ~k_mask)
    best, best_order = None, 0
    for x in reps:
        o = _order_mod(M, int(x), k_mask)
        if o > best_order:
            best, best_order = int(x), o
    k2 = additive_span(M, k_mask, best)
    out = [(best, best_order)]
    for y, oy in _pgroup_basis(M, l_mask, k2, p):
        z = int(M.mul_int(oy)[y])
        c = 0
        while not (k_mask >> z) & 1:
            z = int(M.add_table[z, M.neg[best]])
            c += 1
        if c % oy:
            raise AssertionError("basis lift failed; the chosen element was not of maximal order")
        shift = int(M.mul_int(c // oy)[best])
        out.append((int(M.add_table[y, M.neg[shift]]), oy))
    return out


def abelian_basis(M: FiniteModule, l_mask: int, k_mask: int) -> tuple[list[int], list[int]]:
    """Representatives in L of a basis of L/K with invariant-factor orders d_1 | d_2 | ...."""
    n = l_mask.bit_count() // k_mask.bit_count()
    if n == 1:
        return [], []
    per_prime = []
    ids = np.arange(M.size)
    k_bits = bools_from_mask(k_mask, M.size)
    l_bits = bools_from_mask(l_mask, M.size)
    for p, e in abelian.factorize(n):
        # p-primary part of L/K: elements of L sent into K by p^e
        part = l_bits & k_bits[M.mul_int(p**e)[ids]]
        per_prime.append(_pgroup_basis(M, mask_from_bools(part), k_mask, p))
    length = max(len(b) for b in per_prime)
    reps, orders = [], []
    for i in range(length):
        x, o = 0, 1
        for basis in per_prime:
            if i < len(basis):
                x = int(M.add_table[x, basis[i][0]])
                o *= basis[i][1]
        reps.append(x)
        orders.append(o)
    return reps[::-1], orders[::-1]


@dataclass
class Subquotient:
    """L/K as a module in its own right.

    ``rep_of[q]`` is the smallest element index of the coset with index q, and
    ``coset_of`` maps every element of L to the index of its coset.
    """

    module: FiniteModule
    owner: FiniteModule
    basis: list[int]
    rep_of: np.ndarray
    coset_of: dict


def subquotient(M: FiniteModule, l_mask: int, k_mask: int) -> Subquotient:
    """Build L/K for submodules K <= L of M, on an invariant-factor basis."""
    if k_mask & ~l_mask:
        raise AlgebraError("subquotient needs K contained in L")
    reps, orders = abelian_basis(M, l_mask, k_mask)
    if not orders:
        reps, orders = [0], [1]
    l_idx = _idx(M, l_mask)
    k_idx = _idx(M, k_mask)
    coset_min = M.add_table[np.ix_(l_idx, k_idx)].min(axis=1)
    rep_for_element = dict(zip(l_idx.tolist(), coset_min.tolist()))
    from .core import _all_coords

    qcoords = _all_coords(orders)
    basis_coords = M.coords[reps]
    elems = M.index_of(qcoords @ basis_coords)
    rep_of = np.array([rep_for_element[int(e)] for e in np.atleast_1d(elems)], dtype=np.int64)
    if len(set(rep_of.tolist())) != len(rep_of):
        raise AssertionError("subquotient basis is not independent")
    q_of_rep = {int(r): q for q, r in enumerate(rep_of)}
    coset_of = {x: q_of_rep[r] for x, r in rep_for_element.items()}
    action = None
    if not M.ring.is_integers:
        rank = M.ring.rank
        action = np.zeros((rank, len(orders), len(orders)), dtype=np.int64)
        for i in range(rank):
            e_i = np.zeros(rank, dtype=np.int64)
            e_i[i] = 1
            for j, b in enumerate(reps):
                y = M.act(b, e_i)
                action[i, j] = qcoords[coset_of[y]]
    Q = FiniteModule(M.ring, orders, action, validate=not M.is_abelian_type)
    return Subquotient(Q, M, reps, rep_of, coset_of)


@dataclass
class QuotientModule:
    module: FiniteModule
    projection: ModuleHom
    representatives: np.ndarray  # coset index -> smallest element index of M


def quotient(M: FiniteModule, K: Submodule) -> QuotientModule:
    """M/K with its canonical projection; coset representatives are smallest indices."""
    k = _owned(M, K)
    sq = subquotient(M, (1 << M.size) - 1, k)
    Q = sq.module
    rows = [Q.coords[sq.coset_of[int(M.index_of(row))]] for row in np.eye(M.ngens, dtype=np.int64)]
    proj = ModuleHom(M, Q, np.array(rows).reshape(M.ngens, Q.ngens))
    return QuotientModule(Q, proj, sq.rep_of)


def as_module(D: Submodule) -> tuple[FiniteModule, ModuleHom]:
    """A submodule as a module of its own, with the inclusion into its owner."""
    M = D.owner
    sq = subquotient(M, D.mask, ZERO)
    incl = ModuleHom(sq.module, M, M.coords[sq.basis])
    return sq.module, incl


# -- abelian types of subquotients ----------------------------------------------

def subquotient_type(M: FiniteModule, l_mask: int, k_mask: int) -> tuple[int, ...]:
    """Invariant factors of L/K computed from torsion counts (no basis needed)."""
    n = l_mask.bit_count() // k_mask.bit_count()
    if n == 1:
        return ()
    size = M.size
    ids = np.arange(size)
    l_bits = bools_from_mask(l_mask, size)
    k_bits = bools_from_mask(k_mask, size)
    nk = int(k_bits.sum())
    parts = {}
    for p, e in abelian.factorize(n):
        counts = [1]
        for j in range(1, e + 1):
            hit = l_bits & k_bits[M.mul_int(p**j)[ids]]
            counts.append(int(hit.sum()) // nk)
            if counts[-1] == counts[-2]:
                break
        parts[p] = abelian.partition_from_torsion(counts, p)
    return abelian.invariant_factors_from_partitions(parts)


def submodule_type(D: Submodule) -> tuple[int, ...]:
    return subquotient_type(D.owner, D.mask, ZERO)


def quotient_type(K: Submodule) -> tuple[int, ...]:
    return subquotient_type(K.owner, (1 << K.owner.size) - 1, K.mask)
