"""Arithmetic of finite abelian groups given by invariant factors.

Everything here works on plain integer tuples; no module carriers are built.
"""
from __future__ import annotations

import math
from functools import lru_cache
from itertools import product


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``n`` as ``((p, e), ...)`` with p increasing."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def primes_of(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def prime_partitions(orders) -> dict[int, tuple[int, ...]]:
    """Per prime, the exponents of the cyclic p-parts, largest first."""
    parts: dict[int, list[int]] = {}
    for o in orders:
        for p, e in factorize(int(o)):
            parts.setdefault(p, []).append(e)
    return {p: tuple(sorted(es, reverse=True)) for p, es in sorted(parts.items())}


def invariant_factors_from_partitions(parts: dict[int, tuple[int, ...]]) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... | d_k (all > 1) from per-prime partitions."""
    length = max((len(lam) for lam in parts.values()), default=0)
    factors = [1] * length
    for p, lam in parts.items():
        for i, e in enumerate(lam):
            factors[i] *= p**e
    return tuple(sorted(f for f in factors if f > 1))


def invariant_factors(orders) -> tuple[int, ...]:
    """Canonical form of Z_{o_1} + ... + Z_{o_t}."""
    return invariant_factors_from_partitions(prime_partitions(orders))


def partitions_of(n: int, largest: int | None = None):
    """Integer partitions of n, each as a non-increasing tuple, in reverse-lex order."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions_of(n - first, first):
            yield (first,) + rest


def groups_of_order(n: int) -> list[tuple[int, ...]]:
    """Invariant-factor lists of all abelian groups of order n, sorted."""
    if n == 1:
        return [()]
    per_prime = [[(p, lam) for lam in partitions_of(e)] for p, e in factorize(n)]
    out = []
    for combo in product(*per_prime):
        out.append(invariant_factors_from_partitions(dict(combo)))
    # shorter factor lists first (cyclic group leads), then lexicographic
    return sorted(out, key=lambda f: (len(f), f))


def count_groups_of_order(n: int) -> int:
    """Product over p^e || n of the partition number p(e)."""
    total = 1
    for _, e in factorize(n):
        total *= sum(1 for _ in partitions_of(e))
    return total


def group_order(factors) -> int:
    return math.prod(factors)


def exponent(factors) -> int:
    out = 1
    for f in factors:
        out = math.lcm(out, f)
    return out


def type_embeds(small, big) -> bool:
    """True iff the abelian group with invariant factors ``small`` embeds in ``big``.

    For finite abelian p-groups this is containment of partitions; the same
    test decides whether ``small`` is a quotient of ``big``.
    """
    ps, pb = prime_partitions(small), prime_partitions(big)
    for p, lam in ps.items():
        mu = pb.get(p, ())
        if len(lam) > len(mu):
            return False
        if any(a > b for a, b in zip(lam, mu)):
            return False
    return True


def hom_count(a, b) -> int:
    """|Hom(A, B)| for A = (+) Z_{a_i}, B = (+) Z_{b_j}: product of gcd(a_i, b_j)."""
    total = 1
    for x in a:
        for y in b:
            total *= math.gcd(int(x), int(y))
    return total


def radical_squared_zero(n: int) -> bool:
    """J(Z_n)^2 = 0 iff every prime exponent of n is at most 2."""
    return all(e <= 2 for _, e in factorize(n))


def partition_from_torsion(counts: list[int], p: int) -> tuple[int, ...]:
    """Partition of a p-group from |G[p^k]| for k = 0, 1, 2, ...

    ``counts[k]`` is the number of elements killed by p^k (counts[0] == 1).
    The first differences of log_p counts form the conjugate partition.
    """
    logs = []
    for c in counts:
        e = round(math.log(c, p))
        if p**e != c:
            raise ValueError(f"torsion count {c} is not a power of {p}")
        logs.append(e)
    conj = [logs[k] - logs[k - 1] for k in range(1, len(logs))]
    conj = [c for c in conj if c > 0]
    if not conj:
        return ()
    return tuple(sum(1 for c in conj if c > i) for i in range(conj[0]))
