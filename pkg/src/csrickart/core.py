"""Finite rings, finite modules and the value types shared by every engine.

Elements of a module with additive generators of orders ``o_1..o_t`` are
coefficient vectors; their dense index is the mixed-radix number with the
first coefficient most significant, so index order is lexicographic order of
coefficient vectors and the zero element has index 0.  Sets of elements
(submodules, kernels, images) are Python ints used as bitmasks over indices.
"""
from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import abelian

INTEGERS_TAG = "Z"
ZN_TAG = "ZN"
CUSTOM_TAG = "CUSTOM"


@dataclass
class Limits:
    """Enumeration guards; every engine refuses work beyond these."""

    max_module_size: int = 512
    max_ring_size: int = 64
    max_homs: int = 1 << 20
    max_submodules: int = 20000


LIMITS = Limits()


@contextmanager
def limits(**changes):
    """Temporarily change fields of LIMITS."""
    old = {k: getattr(LIMITS, k) for k in changes}
    for k, v in changes.items():
        setattr(LIMITS, k, v)
    try:
        yield LIMITS
    finally:
        for k, v in old.items():
            setattr(LIMITS, k, v)


class AlgebraError(ValueError):
    pass


class AxiomError(AlgebraError):
    """A ring or module axiom fails; ``witness`` holds the offending elements."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CarrierTooLarge(AlgebraError):
    pass


class RingMismatch(AlgebraError):
    pass


# -- bitmask helpers ---------------------------------------------------------

def mask_from_indices(idx, size: int) -> int:
    bits = np.zeros(size, dtype=bool)
    bits[np.asarray(idx, dtype=np.int64)] = True
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def mask_from_bools(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def bools_from_mask(mask: int, size: int) -> np.ndarray:
    raw = np.frombuffer(mask.to_bytes((size + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:size].astype(bool)


def indices_from_mask(mask: int, size: int) -> np.ndarray:
    return np.flatnonzero(bools_from_mask(mask, size))


def popcount(mask: int) -> int:
    return mask.bit_count()


def _radix_weights(orders) -> np.ndarray:
    w = np.ones(len(orders), dtype=np.int64)
    for j in range(len(orders) - 2, -1, -1):
        w[j] = w[j + 1] * orders[j + 1]
    return w


def _all_coords(orders) -> np.ndarray:
    return np.indices(tuple(orders)).reshape(len(orders), -1).T.astype(np.int64)


# -- rings -------------------------------------------------------------------

class FiniteRing:
    """A finite unital ring given by additive cyclic orders and structure constants.

    ``table[i, j]`` is the coefficient vector of ``e_i * e_j``.  The tag
    ``Z`` stands for the integers acting by repeated addition; such a ring
    has no carrier.
    """

    def __init__(self, tag, orders=(), unit=(), table=None, *, n=None, validate=True):
        self.tag = tag
        self.n = n
        self.source_path = None
        if tag == INTEGERS_TAG:
            self.orders = ()
            self.unit = ()
            self.table = None
            return
        self.orders = tuple(int(o) for o in orders)
        if not self.orders or any(o < 1 for o in self.orders):
            raise AxiomError(f"ring orders must be positive integers, got {list(orders)}")
        r = len(self.orders)
        self.unit = tuple(int(u) % o for u, o in zip(unit, self.orders))
        if len(self.unit) != r:
            raise AxiomError(f"unit needs {r} coefficients, got {len(unit)}")
        table = np.asarray(table, dtype=np.int64)
        if table.shape != (r, r, r):
            raise AxiomError(f"structure constants must have shape {(r, r, r)}, got {table.shape}")
        self.table = table % np.array(self.orders)
        if self.size > LIMITS.max_ring_size:
            raise CarrierTooLarge(f"ring of size {self.size} exceeds cap {LIMITS.max_ring_size}")
        if validate:
            self.validate()

    # carrier
    @property
    def is_integers(self) -> bool:
        return self.tag == INTEGERS_TAG

    @property
    def rank(self) -> int:
        return len(self.orders)

    @cached_property
    def size(self) -> int:
        if self.is_integers:
            raise AlgebraError("the integers have no finite carrier")
        return math.prod(self.orders)

    @cached_property
    def weights(self) -> np.ndarray:
        return _radix_weights(self.orders)

    @cached_property
    def coords(self) -> np.ndarray:
        return _all_coords(self.orders)

    def index(self, coeffs) -> int:
        c = np.asarray(coeffs, dtype=np.int64) % np.array(self.orders)
        return int(c @ self.weights)

    @cached_property
    def unit_index(self) -> int:
        return self.index(self.unit)

    @cached_property
    def mul_table(self) -> np.ndarray:
        """``mul_table[a, b]`` = index of a*b."""
        c = self.coords
        prod = np.einsum("ai,bj,ijk->abk", c, c, self.table) % np.array(self.orders)
        return prod @ self.weights

    @cached_property
    def add_table(self) -> np.ndarray:
        c = self.coords
        s = (c[:, None, :] + c[None, :, :]) % np.array(self.orders)
        return s @ self.weights

    def validate(self) -> None:
        """Exhaustive check of the ring axioms; raises AxiomError with a witness."""
        o = np.array(self.orders)
        r = self.rank
        for i in range(r):
            for j in range(r):
                v = self.table[i, j]
                if np.any((self.orders[i] * v) % o) or np.any((self.orders[j] * v) % o):
                    raise AxiomError(
                        f"multiplication not well defined: e{i + 1}*e{j + 1} = {v.tolist()} "
                        f"is not killed by the orders of e{i + 1} and e{j + 1}",
                        witness=(i, j),
                    )
        mul = self.mul_table
        left = mul[mul, :]  # (a*b)*c indexed [a, b, c]
        right = mul[:, mul]  # a*(b*c) indexed [a, b, c]
        bad = np.argwhere(left != right)
        if len(bad):
            a, b, c = (self.coords[k].tolist() for k in bad[0])
            raise AxiomError(f"associativity fails for ({a}, {b}, {c})", witness=(a, b, c))
        u = self.unit_index
        ids = np.arange(self.size)
        for side, row in (("left", mul[u, :]), ("right", mul[:, u])):
            bad = np.flatnonzero(row != ids)
            if len(bad):
                x = self.coords[bad[0]].tolist()
                raise AxiomError(f"{side} unit law fails at {x}", witness=(x,))

    @cached_property
    def key(self):
        if self.is_integers:
            return (INTEGERS_TAG,)
        if self.tag == ZN_TAG:
            return (ZN_TAG, self.n)
        return (CUSTOM_TAG, self.orders, self.unit, self.table.tobytes())

    def __eq__(self, other):
        return isinstance(other, FiniteRing) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        if self.is_integers:
            return "Z"
        if self.tag == ZN_TAG:
            return f"Z/{self.n}"
        return f"FiniteRing(orders={list(self.orders)}, unit={list(self.unit)})"

    def describe(self) -> str:
        if self.is_integers:
            return "Z"
        if self.tag == ZN_TAG:
            return f"zn:{self.n}"
        return "custom"


INTEGERS = FiniteRing(INTEGERS_TAG)


def zn(n: int) -> FiniteRing:
    """The residue ring Z/nZ."""
    if n < 1:
        raise AxiomError(f"Z/n needs n >= 1, got {n}")
    return FiniteRing(ZN_TAG, (n,), (1 % n,), [[[1]]], n=n, validate=False)


def make_ring(orders=None, unit=None, table=None, *, n=None) -> FiniteRing:
    """Build and exhaustively validate a ring.

    Either ``n`` (the Z/n shortcut) or ``orders``, ``unit`` and ``table`` must
    be supplied.  ``table`` may be a dense ``(r, r, r)`` array or a dict
    mapping ``(i, j)`` (0-based) to coefficient vectors; missing entries are 0.
    """
    if n is not None:
        return zn(n)
    if orders is None or unit is None or table is None:
        raise AxiomError("a ring needs orders, unit and structure constants")
    r = len(orders)
    if isinstance(table, dict):
        dense = np.zeros((r, r, r), dtype=np.int64)
        for (i, j), v in table.items():
            dense[i, j] = v
        table = dense
    return FiniteRing(CUSTOM_TAG, orders, unit, table)


# -- modules -----------------------------------------------------------------

class FiniteModule:
    """A finite right module over a FiniteRing.

    ``action[i]`` is a t x t integer matrix whose row j is the coefficient
    vector of ``g_j * e_i``.  For the integers no action is stored.
    """

    def __init__(self, ring: FiniteRing, orders, action=None, *, name=None, validate=True):
        self.ring = ring
        self.name = name
        self.orders = tuple(int(o) for o in orders)
        if not self.orders:
            raise AxiomError("a module needs at least one generator order (use [1] for zero)")
        if any(o < 1 for o in self.orders):
            raise AxiomError(f"orders must be positive integers, got {list(orders)}")
        if ring.tag == ZN_TAG:
            bad = [o for o in self.orders if ring.n % o]
            if bad:
                raise AxiomError(f"order {bad[0]} does not divide {ring.n}", witness=(bad[0],))
        size = math.prod(self.orders)
        if size > LIMITS.max_module_size:
            raise CarrierTooLarge(f"module of size {size} exceeds cap {LIMITS.max_module_size}")
        t = len(self.orders)
        if ring.is_integers:
            self.action = None
        else:
            if action is None:
                if ring.tag != ZN_TAG:
                    raise AxiomError("modules over a custom ring need action constants")
                action = np.eye(t, dtype=np.int64)[None, :, :]
            action = np.asarray(action, dtype=np.int64)
            if action.shape != (ring.rank, t, t):
                raise AxiomError(f"action constants must have shape {(ring.rank, t, t)}, got {action.shape}")
            self.action = action % np.array(self.orders)
        if validate:
            self.validate()

    @cached_property
    def size(self) -> int:
        return math.prod(self.orders)

    @property
    def ngens(self) -> int:
        return len(self.orders)

    @cached_property
    def order_array(self) -> np.ndarray:
        return np.array(self.orders, dtype=np.int64)

    @cached_property
    def weights(self) -> np.ndarray:
        return _radix_weights(self.orders)

    @cached_property
    def coords(self) -> np.ndarray:
        return _all_coords(self.orders)

    def index_of(self, coeffs) -> np.ndarray | int:
        """Index of a coefficient vector (or of each row of a 2-D array)."""
        c = np.asarray(coeffs, dtype=np.int64) % self.order_array
        out = c @ self.weights
        return int(out) if np.ndim(out) == 0 else out

    def element(self, x) -> "Element":
        if isinstance(x, (int, np.integer)):
            return Element(self, tuple(int(v) for v in self.coords[int(x)]))
        return Element(self, tuple(int(v) % o for v, o in zip(x, self.orders)))

    @cached_property
    def add_table(self) -> np.ndarray:
        c = self.coords
        s = (c[:, None, :] + c[None, :, :]) % self.order_array
        return (s @ self.weights).astype(np.int32)

    @cached_property
    def neg(self) -> np.ndarray:
        return self.index_of(-self.coords)

    def mul_int(self, k: int) -> np.ndarray:
        """Index array of k*x for every element x."""
        cache = self.__dict__.setdefault("_mul_int", {})
        if k not in cache:
            cache[k] = self.index_of(k * self.coords)
        return cache[k]

    @cached_property
    def element_orders(self) -> np.ndarray:
        g = np.gcd(self.coords, self.order_array)
        per = self.order_array // g
        return np.lcm.reduce(per, axis=1) if self.ngens > 1 else per[:, 0]

    @cached_property
    def exponent(self) -> int:
        return abelian.exponent(self.orders)

    @cached_property
    def act_table(self) -> np.ndarray:
        """``act_table[x, r]`` = index of x*r for every ring element r."""
        if self.ring.is_integers:
            raise AlgebraError("the integers have no finite carrier; use mul_int")
        # x * e_i for every x and generator e_i: shape (rank, size, t)
        per_gen = np.einsum("sj,ijk->isk", self.coords, self.action)
        acted = np.einsum("ri,isk->srk", self.ring.coords, per_gen) % self.order_array
        return (acted @ self.weights).astype(np.int32)

    def act(self, x: int, r) -> int:
        if self.ring.is_integers:
            return int(self.mul_int(int(r))[x])
        return int(self.act_table[x, self.ring.index(r)])

    @cached_property
    def cyclic_masks(self) -> list[int]:
        """Mask of the cyclic submodule x*R for every element x."""
        if self.ring.is_integers:
            mults = np.stack([self.mul_int(k) for k in range(self.exponent)], axis=1)
        else:
            mults = self.act_table
        bits = np.zeros((self.size, self.size), dtype=bool)
        bits[np.arange(self.size)[:, None], mults] = True
        packed = np.packbits(bits, axis=1, bitorder="little")
        return [int.from_bytes(row.tobytes(), "little") for row in packed]

    @property
    def is_abelian_type(self) -> bool:
        """Submodules and homs coincide with those of the underlying abelian group."""
        return self.ring.tag in (INTEGERS_TAG, ZN_TAG)

    def validate(self) -> None:
        """Exhaustive module-axiom check; raises AxiomError with a witness."""
        if self.ring.is_integers:
            return
        o = self.order_array
        for i in range(self.ring.rank):
            for j in range(self.ngens):
                v = self.action[i, j]
                if np.any((self.orders[j] * v) % o) or np.any((self.ring.orders[i] * v) % o):
                    raise AxiomError(
                        f"action not well defined: g{j + 1}*e{i + 1} = {v.tolist()} is not killed "
                        f"by the orders of g{j + 1} and e{i + 1}",
                        witness=(i, j),
                    )
        act = self.act_table
        ring = self.ring
        ids = np.arange(self.size)
        bad = np.flatnonzero(act[:, ring.unit_index] != ids)
        if len(bad):
            x = self.coords[bad[0]].tolist()
            raise AxiomError(f"unit does not act as identity on {x}", witness=(x,))
        lhs = act[act]
        rhs = act[:, ring.mul_table]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            x, a, b = bad[0]
            wit = (self.coords[x].tolist(), ring.coords[a].tolist(), ring.coords[b].tolist())
            raise AxiomError(f"(x*a)*b != x*(ab) for (x, a, b) = {wit}", witness=wit)

    @cached_property
    def key(self):
        act = None if self.action is None else self.action.tobytes()
        return (self.ring.key, self.orders, act)

    def __eq__(self, other):
        return isinstance(other, FiniteModule) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        if self.name:
            return self.name
        body = "+".join(f"Z{o}" for o in self.orders)
        if self.ring.is_integers:
            return body
        return f"{body} over {self.ring!r}"

    @property
    def zero(self) -> "Element":
        return self.element(0)


@dataclass(frozen=True)
class Element:
    owner: FiniteModule
    coeffs: tuple

    @property
    def index(self) -> int:
        return self.owner.index_of(self.coeffs)

    def __add__(self, other: "Element") -> "Element":
        return self.owner.element([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "Element":
        return self.owner.element([-a for a in self.coeffs])

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __rmul__(self, k: int) -> "Element":
        return self.owner.element([k * a for a in self.coeffs])

    def act(self, r) -> "Element":
        """Right action by a ring element (an integer for Z-modules)."""
        return self.owner.element(self.owner.act(self.index, r))

    @property
    def order(self) -> int:
        return int(self.owner.element_orders[self.index])

    def __repr__(self):
        return "(" + ",".join(str(c) for c in self.coeffs) + ")"


def make_abelian_group(orders) -> FiniteModule:
    """Z_{o_1} + ... + Z_{o_t} as a module over the integers."""
    orders = list(orders)
    if any(int(o) <= 0 for o in orders):
        raise AxiomError(f"orders must be positive, got {orders}")
    return FiniteModule(INTEGERS, orders or [1])


def make_module(ring: FiniteRing, orders, action=None, *, name=None) -> FiniteModule:
    """Build and exhaustively validate a module.

    ``action`` may be a dense ``(rank, t, t)`` array or a dict mapping
    ``(i, j)`` (ring generator, module generator; 0-based) to the coefficient
    vector of ``g_j * e_i``.  It is forced, and may be omitted, over Z and Z/n.
    """
    if isinstance(action, dict):
        dense = np.zeros((ring.rank, len(orders), len(orders)), dtype=np.int64)
        for (i, j), v in action.items():
            dense[i, j] = v
        action = dense
    return FiniteModule(ring, orders, action, name=name)


def zero_module(ring: FiniteRing = INTEGERS) -> FiniteModule:
    return FiniteModule(ring, [1], None if ring.tag != CUSTOM_TAG else np.zeros((ring.rank, 1, 1)))


def canonical_form(M: FiniteModule) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... of a module over Z or Z/n."""
    if not M.is_abelian_type:
        raise AlgebraError("canonical_form needs a module over Z or Z/n")
    return abelian.invariant_factors(M.orders)


def canonical_module(M: FiniteModule) -> FiniteModule:
    """The module on the invariant-factor generators isomorphic to M."""
    cf = canonical_form(M)
    return FiniteModule(M.ring, cf or (1,))


# -- submodules and homomorphisms (value types) ------------------------------

@dataclass(frozen=True)
class Submodule:
    owner: FiniteModule
    mask: int

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    @cached_property
    def elements(self) -> tuple[int, ...]:
        return tuple(int(i) for i in indices_from_mask(self.mask, self.owner.size))

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A short generating set: greedily take elements spanning the largest cyclic submodules."""
        from .lattice import span_mask

        gens: list[int] = []
        cur = 1
        cyc = self.owner.cyclic_masks
        for x in sorted(self.elements, key=lambda e: (-cyc[e].bit_count(), e)):
            if not (cur >> x) & 1:
                gens.append(x)
                cur = span_mask(self.owner, gens)
                if cur == self.mask:
                    break
        return tuple(gens)

    def generator_coords(self) -> list[list[int]]:
        return [self.owner.coords[g].tolist() for g in self.generators]

    def __contains__(self, x) -> bool:
        if isinstance(x, Element):
            x = x.index
        return bool((self.mask >> int(x)) & 1)

    def __le__(self, other: "Submodule") -> bool:
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "Submodule") -> bool:
        return self <= other and self.mask != other.mask

    @property
    def is_zero(self) -> bool:
        return self.mask == 1

    @property
    def is_whole(self) -> bool:
        return self.size == self.owner.size

    def __repr__(self):
        gens = " ".join(str(self.owner.element(g)) for g in self.generators) or "0"
        return f"<{gens}> (size {self.size})"


class ModuleHom:
    """A homomorphism as an integer matrix; row j is the image of source generator j."""

    def __init__(self, source: FiniteModule, target: FiniteModule, matrix, *, check=False):
        if source.ring != target.ring:
            raise RingMismatch("homomorphisms need modules over the same ring")
        self.source = source
        self.target = target
        m = np.asarray(matrix, dtype=np.int64).reshape(source.ngens, target.ngens)
        self.array = m % target.order_array
        self.array.setflags(write=False)
        if check:
            self.check()

    @cached_property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(v) for v in row) for row in self.array)

    @cached_property
    def values(self) -> np.ndarray:
        """Index of f(x) for every source index x."""
        return self.target.index_of(self.source.coords @ self.array)

    def __call__(self, x):
        if isinstance(x, Element):
            return self.target.element(int(self.values[x.index]))
        return int(self.values[int(x)])

    @cached_property
    def kernel(self) -> Submodule:
        return Submodule(self.source, mask_from_bools(self.values == 0))

    @cached_property
    def image(self) -> Submodule:
        return Submodule(self.target, mask_from_indices(self.values, self.target.size))

    @property
    def is_zero(self) -> bool:
        return not self.array.any()

    @property
    def is_injective(self) -> bool:
        return self.kernel.is_zero

    @property
    def is_surjective(self) -> bool:
        return self.image.is_whole

    def check(self) -> None:
        """Exhaustive validity: additivity on the full carrier and ring-linearity."""
        S, T = self.source, self.target
        bad = np.flatnonzero((self.source.order_array[:, None] * self.array) % T.order_array)
        if len(bad):
            j = bad[0] // T.ngens
            raise AxiomError(f"image of g{j + 1} is not killed by its order", witness=(j,))
        vals = self.values
        lhs = vals[S.add_table]
        rhs = T.add_table[vals[:, None], vals[None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            raise AxiomError("not additive", witness=tuple(int(v) for v in bad[0]))
        if not S.ring.is_integers:
            lhs = vals[S.act_table]
            rhs = T.act_table[vals]
            bad = np.argwhere(lhs != rhs)
            if len(bad):
                x, r = bad[0]
                raise AxiomError(
                    f"f(x*r) != f(x)*r at x={S.coords[x].tolist()}, r={S.ring.coords[r].tolist()}",
                    witness=(int(x), int(r)),
                )

    def __eq__(self, other):
        return (
            isinstance(other, ModuleHom)
            and self.source == other.source
            and self.target == other.target
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.source.key, self.target.key, self.matrix))

    def __repr__(self):
        return f"ModuleHom({self.source!r} -> {self.target!r}, {[list(r) for r in self.matrix]})"


def direct_sum(M: FiniteModule, N: FiniteModule):
    """M (+) N with its injections and projections.

    Returns ``(S, (i1, i2), (p1, p2))``.
    """
    if M.ring != N.ring:
        raise RingMismatch("direct sum needs modules over the same ring")
    tm, tn = M.ngens, N.ngens
    action = None
    if M.action is not None:
        r = M.ring.rank
        action = np.zeros((r, tm + tn, tm + tn), dtype=np.int64)
        action[:, :tm, :tm] = M.action
        action[:, tm:, tm:] = N.action
    S = FiniteModule(M.ring, M.orders + N.orders, action, validate=False)
    eye_m, eye_n = np.eye(tm, dtype=np.int64), np.eye(tn, dtype=np.int64)
    i1 = ModuleHom(M, S, np.hstack([eye_m, np.zeros((tm, tn), np.int64)]))
    i2 = ModuleHom(N, S, np.hstack([np.zeros((tn, tm), np.int64), eye_n]))
    p1 = ModuleHom(S, M, np.vstack([eye_m, np.zeros((tn, tm), np.int64)]))
    p2 = ModuleHom(S, N, np.vstack([np.zeros((tm, tn), np.int64), eye_n]))
    return S, (i1, i2), (p1, p2)
