"""Slow reference implementations used as test oracles.

Everything here works on plain tuples and Python sets and follows the
textbook definitions directly, sharing no code with the package beyond the
module's orders and action constants.
"""
from __future__ import annotations

import math
from itertools import product


def elements(M):
    """Coefficient tuples in index order (first coordinate most significant)."""
    return list(product(*(range(o) for o in M.orders)))


def add(M, x, y):
    return tuple((a + b) % o for a, b, o in zip(x, y, M.orders))


def act(M, x, i):
    """x * e_i over a custom ring (row vector times action matrix)."""
    A = M.action[i]
    t = len(M.orders)
    return tuple(sum(x[j] * int(A[j][k]) for j in range(t)) % M.orders[k] for k in range(t))


def closure(M, gens, base=frozenset()):
    zero = tuple(0 for _ in M.orders)
    seen = set(base) | {zero}
    todo = list(gens) + list(base)
    custom = M.action is not None and not M.ring.n
    while todo:
        x = todo.pop()
        if x not in seen:
            seen.add(x)
        moves = [add(M, x, y) for y in list(seen)]
        if custom:
            moves += [act(M, x, i) for i in range(len(M.action))]
        for y in moves:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(seen)


def submodules(M):
    """All submodules by repeated closure of (submodule, element) pairs."""
    zero = closure(M, [])
    found = {zero}
    frontier = [zero]
    els = elements(M)
    while frontier:
        nxt = []
        for S in frontier:
            for x in els:
                if x not in S:
                    T = closure(M, [x], S)
                    if T not in found:
                        found.add(T)
                        nxt.append(T)
        frontier = nxt
    return found


def is_essential(K, D, subs):
    zero = min(D)
    return all(len(K & X) > 1 for X in subs if X <= D and X != {zero})


def sumset(M, A, B):
    return frozenset(add(M, a, b) for a in A for b in B)


def is_superfluous(M, K, D, subs):
    return all(X == D for X in subs if X <= D and sumset(M, K, X) == D)


def summands(M, subs):
    whole = frozenset(elements(M))
    out = set()
    for K in subs:
        for C in subs:
            if len(K & C) == 1 and len(K) * len(C) == len(whole):
                out.add(K)
                break
    return out


def essential_in_summand(K, subs, summ):
    return any(K <= D and is_essential(K, D, subs) for D in summ)


def lies_above_summand(M, L, subs, summ):
    """Some summand K <= L with L/K superfluous in M/K: L + X = M and K <= X forces X = M."""
    whole = frozenset(elements(M))
    for K in summ:
        if not K <= L:
            continue
        if all(X == whole for X in subs if K <= X and sumset(M, L, X) == whole):
            return True
    return False


def homs(M, N):
    """Every additive (and, over a custom ring, linear) map as a tuple of generator images.

    A candidate assignment is extended along the generators by f(x + g_j) =
    f(x) + y_j and kept only if no element receives two values.
    """
    t = len(M.orders)
    unit = [tuple(int(j == k) for k in range(t)) for j in range(t)]
    out = []
    for ys in product(elements(N), repeat=t):
        f = {tuple(0 for _ in M.orders): tuple(0 for _ in N.orders)}
        todo = list(f)
        ok = True
        while todo and ok:
            x = todo.pop()
            for j in range(t):
                x2 = add(M, x, unit[j])
                v = add(N, f[x], ys[j])
                if x2 in f:
                    if f[x2] != v:
                        ok = False
                        break
                else:
                    f[x2] = v
                    todo.append(x2)
        if not ok:
            continue
        if M.action is not None and not M.ring.n:
            if any(f[act(M, x, i)] != act(N, f[x], i) for x in f for i in range(len(M.action))):
                continue
        out.append((ys, f))
    return out


def kernel(f):
    zero = next(v for v in f.values() if not any(v))
    return frozenset(x for x, v in f.items() if v == zero)


def image(f):
    return frozenset(f.values())


class Brute:
    """Every derived set for one pair, computed once."""

    def __init__(self, M, N=None):
        N = M if N is None else N
        self.M, self.N = M, N
        self.subs_m = submodules(M)
        self.subs_n = self.subs_m if N is M else submodules(N)
        self.summ_m = summands(M, self.subs_m)
        self.summ_n = self.summ_m if N is M else summands(N, self.subs_n)
        self.maps = homs(M, N)

    def cs_rickart(self):
        return all(essential_in_summand(kernel(f), self.subs_m, self.summ_m) for _, f in self.maps)

    def rickart(self):
        return all(kernel(f) in self.summ_m for _, f in self.maps)

    def dual_cs_rickart(self):
        return all(lies_above_summand(self.N, image(f), self.subs_n, self.summ_n) for _, f in self.maps)

    def dual_rickart(self):
        return all(image(f) in self.summ_n for _, f in self.maps)

    def k_nonsingular(self):
        whole = frozenset(elements(self.M))
        return all(
            kernel(f) == whole for _, f in self.maps if is_essential(kernel(f), whole, self.subs_m)
        )

    def t_nonsingular(self):
        whole = frozenset(elements(self.N))
        return all(
            len(image(f)) == 1
            for _, f in self.maps
            if is_superfluous(self.N, image(f), whole, self.subs_n)
        )


def unary(M):
    """Extending, lifting and the four summand-pair properties from the definitions."""
    subs = submodules(M)
    summ = summands(M, subs)
    pairs = [(a, b) for a in summ for b in summ]
    return {
        "extending": all(essential_in_summand(K, subs, summ) for K in subs),
        "lifting": all(lies_above_summand(M, L, subs, summ) for L in subs),
        "sip-extending": all(essential_in_summand(a & b, subs, summ) for a, b in pairs),
        "ssp-lifting": all(lies_above_summand(M, sumset(M, a, b), subs, summ) for a, b in pairs),
        "sip": all((a & b) in summ for a, b in pairs),
        "ssp": all(sumset(M, a, b) in summ for a, b in pairs),
    }


def gcd_hom_count(a, b):
    return math.prod(math.gcd(x, y) for x in a for y in b)
