"""Instance streams, theorem verification and counterexample search.

Theorems are checked as statements: on every instance of a bounded stream
the hypothesis is evaluated exhaustively and, where it holds, so is the
conclusion.  Streams run over isomorphism classes of finite abelian groups
(optionally restricted to modules over Z/n), one canonical module per class,
so every property cache is shared between isomorphic instances.
"""
from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from . import abelian
from .core import INTEGERS, LIMITS, limits, CarrierTooLarge, FiniteModule, FiniteRing, canonical_form, zn
from .homs import count_homs
from .lattice import direct_summands, lattice, submodule_type
from .properties import ALIASES, PROPERTY_NAMES, UNARY, Check, evaluate


# -- streams -------------------------------------------------------------------

def module_of_type(ring: FiniteRing, factors) -> FiniteModule:
    """The canonical module Z_{d_1} + ... + Z_{d_k} over Z or Z/n."""
    return FiniteModule(ring, tuple(factors) or (1,), validate=False)


@dataclass
class InstanceStream:
    """Modules of order at most ``max_order`` over ``ring``, one per isomorphism class."""

    ring: FiniteRing
    max_order: int
    modules: list[FiniteModule] = field(default_factory=list)

    def __iter__(self):
        return iter(self.modules)

    def __len__(self):
        return len(self.modules)

    def __getitem__(self, i):
        return self.modules[i]


def _check_bound(max_order: int) -> None:
    if max_order < 1:
        raise ValueError("max_order must be positive")
    if max_order > LIMITS.max_module_size:
        raise CarrierTooLarge(f"max_order {max_order} exceeds the carrier cap {LIMITS.max_module_size}")


def enumerate_abelian_groups(max_order: int) -> InstanceStream:
    """All abelian groups of order <= max_order, by order then invariant factors."""
    _check_bound(max_order)
    mods = [module_of_type(INTEGERS, f) for n in range(1, max_order + 1) for f in abelian.groups_of_order(n)]
    return InstanceStream(INTEGERS, max_order, mods)


def enumerate_modules_over_zn(n: int, max_order: int) -> InstanceStream:
    """All Z/n-modules of order <= max_order: the abelian groups of exponent dividing n."""
    _check_bound(max_order)
    ring = zn(n)
    mods = [
        module_of_type(ring, f)
        for m in range(1, max_order + 1)
        for f in abelian.groups_of_order(m)
        if n % abelian.exponent(f) == 0
    ]
    return InstanceStream(ring, max_order, mods)


def stream(max_order: int, ring: FiniteRing | None = None) -> InstanceStream:
    if ring is None or ring.is_integers:
        return enumerate_abelian_groups(max_order)
    if ring.n is None:
        raise ValueError("streams are only generated over Z and Z/n")
    return enumerate_modules_over_zn(ring.n, max_order)


def dsum(*mods: FiniteModule) -> FiniteModule:
    """Canonical representative of the direct sum."""
    orders = [o for m in mods for o in m.orders]
    return module_of_type(mods[0].ring, abelian.invariant_factors(orders))


def summand_types(M: FiniteModule) -> list[FiniteModule]:
    """One canonical module per isomorphism type of direct summand of M."""
    seen = {}
    for D in direct_summands(M):
        t = submodule_type(D)
        if t not in seen:
            seen[t] = module_of_type(M.ring, t)
    return list(seen.values())


def primary_parts(M: FiniteModule) -> list[FiniteModule]:
    """The p-primary components of M."""
    parts = abelian.prime_partitions(canonical_form(M))
    return [
        module_of_type(M.ring, abelian.invariant_factors([p**e for e in lam]))
        for p, lam in parts.items()
    ]


def ordered_pairs(mods, bound_product: int | None = None):
    """Ordered pairs, optionally with |A|*|B| bounded, sorted by that product."""
    out = [(a, b) for a in mods for b in mods if bound_product is None or a.size * b.size <= bound_product]
    pos = {m.key: i for i, m in enumerate(mods)}
    out.sort(key=lambda p: (p[0].size * p[1].size, pos[p[0].key], pos[p[1].key]))
    return out


# -- verification --------------------------------------------------------------

@dataclass
class VerificationResult:
    theorem: str
    instances: int
    violations: list[tuple[str, str]]
    elapsed: float
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        return f"{self.theorem}: {verdict}, {self.instances} instances, {len(self.violations)} violations, {self.elapsed:.2f}s"


def _why(c: Check) -> str:
    return c.witness.describe() if c.witness is not None else ""


class _Run:
    """Collects instance counts, violations and notes for one theorem."""

    def __init__(self):
        self.count = 0
        self.violations: list[tuple[str, str]] = []
        self.notes: list[str] = []

    def implies(self, inst: str, hyp: bool, concl: Check, label: str):
        if hyp and not concl:
            self.violations.append((inst, f"{label}: conclusion fails ({_why(concl)})"))

    def iff(self, inst: str, left: bool, right: bool, label: str):
        if bool(left) != bool(right):
            self.violations.append((inst, f"{label}: left side {bool(left)}, right side {bool(right)}"))


def _cs(N, M):
    return evaluate("cs-rickart", M, N)


def _dcs(N, M):
    return evaluate("dual-cs-rickart", M, N)


def _t_nonsing_equiv(mods, run: _Run, **_):
    for M, N in ordered_pairs(mods):
        run.count += 1
        inst = f"M={M!r}, N={N!r}"
        lhs = _cs(N, M) and evaluate("k-nonsingular", M, N)
        run.iff(inst, lhs, evaluate("rickart", M, N), "CS-Rickart and K-nonsingular iff Rickart")
        lhs = _dcs(N, M) and evaluate("t-nonsingular", M, N)
        run.iff(inst, lhs, evaluate("dual-rickart", M, N), "dual CS-Rickart and T-nonsingular iff dual Rickart")


def _summand_pass(mods, run: _Run, props):
    types = {M.key: summand_types(M) for M in mods}
    for M, N in ordered_pairs(mods):
        run.count += 1
        for prop in props:
            if not evaluate(prop, M, N):
                continue
            for Ms in types[M.key]:
                for Ns in types[N.key]:
                    c = evaluate(prop, Ms, Ns)
                    run.implies(f"M={M!r}, N={N!r}, M'={Ms!r}, N'={Ns!r}", True, c, f"{prop} passes to summands")


def _l_nonsing_summand(mods, run, **_):
    _summand_pass(mods, run, ("k-nonsingular", "t-nonsingular"))


def _c_summand(mods, run, **_):
    _summand_pass(mods, run, ("cs-rickart", "dual-cs-rickart"))


def _c_sip(mods, run, **_):
    for M in mods:
        run.count += 1
        run.implies(repr(M), bool(_cs(M, M)), evaluate("sip-extending", M), "self-CS-Rickart gives SIP-extending")
        run.implies(repr(M), bool(_dcs(M, M)), evaluate("ssp-lifting", M), "dual self-CS-Rickart gives SSP-lifting")


def _l_ab(mods, run, bound, **_):
    for A, B in ordered_pairs(mods, bound):
        run.count += 1
        S = dsum(A, B)
        inst = f"A={A!r}, B={B!r}"
        run.implies(inst, bool(evaluate("sip-extending", S)), _cs(B, A), "SIP-extending A+B gives B A-CS-Rickart")
        run.implies(inst, bool(evaluate("ssp-lifting", S)), _dcs(B, A), "SSP-lifting A+B gives B dual A-CS-Rickart")


def _c_mm(mods, run, bound, **_):
    for M in mods:
        if M.size * M.size > bound:
            continue
        run.count += 1
        S = dsum(M, M)
        run.implies(repr(M), bool(evaluate("sip-extending", S)), _cs(M, M), "SIP-extending M+M gives self-CS-Rickart")
        run.implies(repr(M), bool(evaluate("ssp-lifting", S)), _dcs(M, M), "SSP-lifting M+M gives dual self-CS-Rickart")


def _triples(mods):
    """(X, Y1, Y2) with Y1 <= Y2 in stream order: the direct sum is symmetric."""
    for X in mods:
        for Y1, Y2 in combinations_with_replacement(mods, 2):
            yield X, Y1, Y2


def _t_sum(mods, run, **_):
    for X, Y1, Y2 in _triples(mods):
        run.count += 1
        S = dsum(Y1, Y2)
        inst = f"M={X!r}, N1={Y1!r}, N2={Y2!r}"
        run.implies(inst, bool(_cs(Y1, X) and _cs(Y2, X)), _cs(S, X), "N1, N2 M-CS-Rickart gives N1+N2 M-CS-Rickart")
        inst = f"M1={Y1!r}, M2={Y2!r}, N={X!r}"
        run.implies(inst, bool(_dcs(X, Y1) and _dcs(X, Y2)), _dcs(X, S), "N dual M1-, M2-CS-Rickart gives dual M1+M2")


def _t_finite_iff(mods, run, **_):
    for X, Y1, Y2 in _triples(mods):
        run.count += 1
        S = dsum(Y1, Y2)
        inst = f"M={X!r}, N1={Y1!r}, N2={Y2!r}"
        run.iff(inst, _cs(S, X), _cs(Y1, X) and _cs(Y2, X), "N1+N2 M-CS-Rickart iff each N_i is")
        inst = f"M1={Y1!r}, M2={Y2!r}, N={X!r}"
        run.iff(inst, _dcs(X, S), _dcs(X, Y1) and _dcs(X, Y2), "N dual M1+M2-CS-Rickart iff dual M_i-CS-Rickart")


def _p_necessary(mods, run, bound, **_):
    converse = []
    for A, B in ordered_pairs(mods, bound):
        run.count += 1
        S = dsum(A, B)
        inst = f"M1={A!r}, M2={B!r}"
        for prop, f in (("cs-rickart", _cs), ("dual-cs-rickart", _dcs)):
            whole = bool(f(S, S))
            parts = [f(Y, X) for X in (A, B) for Y in (A, B)]
            for c in parts:
                run.implies(inst, whole, c, f"self {prop} sum gives pairwise {prop}")
            if all(parts) and not whole and (B.key, A.key) not in converse:
                converse.append((A.key, B.key))
                run.notes.append(f"converse fails for {prop}: {inst} pairwise {prop} but the sum {S!r} is not")


def _t_ssip(mods, run, **_):
    for X, Y1, Y2 in _triples(mods):
        run.count += 1
        S = dsum(Y1, Y2)
        if evaluate("sip-extending", X):
            inst = f"M={X!r}, N1={Y1!r}, N2={Y2!r}"
            run.iff(inst, _cs(S, X), _cs(Y1, X) and _cs(Y2, X), "M SSIP-extending: product M-CS-Rickart iff factors")
        if evaluate("ssp-lifting", X):
            inst = f"M1={Y1!r}, M2={Y2!r}, N={X!r}"
            run.iff(inst, _dcs(X, S), _dcs(X, Y1) and _dcs(X, Y2), "N SSSP-lifting: dual coproduct iff factors")


def _t_orthogonal(mods, run, bound, **_):
    def check(inst, whole, parts):
        run.count += 1
        run.iff(inst, _cs(whole, whole), all(_cs(P, P) for P in parts), "self-CS-Rickart iff each component")
        run.iff(inst, _dcs(whole, whole), all(_dcs(P, P) for P in parts), "dual self-CS-Rickart iff each component")

    for A, B in ordered_pairs(mods, bound):
        if A.size == 1 or B.size == 1 or A.key >= B.key:
            continue
        if count_homs(A, B) == 1 and count_homs(B, A) == 1:
            check(f"M1={A!r}, M2={B!r}", dsum(A, B), (A, B))
    for M in mods:
        if M.size > bound:
            continue
        parts = primary_parts(M)
        if len(parts) >= 2:
            check(f"M={M!r} = " + " + ".join(repr(P) for P in parts), M, parts)


def j_squared_zero(ring: FiniteRing) -> bool:
    """Whether J(R)^2 = 0, with J(R) read off the lattice of the regular module."""
    if ring.n is None:
        raise ValueError("J(R)^2 is only computed for Z/n here")
    R = FiniteModule(ring, (ring.n,), validate=False)
    J = lattice(R).radical
    idx = [i for i in range(R.size) if (J >> i) & 1]
    mul = ring.mul_table
    return all(mul[a, b] == 0 for a in idx for b in idx)


SERIAL_PROPERTIES = ("extending", "lifting", "cs-rickart", "dual-cs-rickart")


def _c_serial(ring_n: int, max_order: int, run: _Run):
    ring = zn(ring_n)
    predicted = abelian.radical_squared_zero(ring_n)
    computed = j_squared_zero(ring)
    if predicted != computed:
        run.violations.append((f"Z/{ring_n}", f"exponent rule says J^2 = 0 is {predicted}, the ring says {computed}"))
    failing = {p: None for p in SERIAL_PROPERTIES}
    for M in enumerate_modules_over_zn(ring_n, max_order):
        run.count += 1
        for p in SERIAL_PROPERTIES:
            c = evaluate(p, M)
            if not c and failing[p] is None:
                failing[p] = (M, c)
            if predicted and not c:
                run.violations.append((f"{M!r} over Z/{ring_n}", f"{p} fails although J^2 = 0 ({_why(c)})"))
    if predicted:
        run.notes.append(f"Z/{ring_n}: J^2 = 0 and every module of order <= {max_order} has all four properties")
        return
    for p, hit in failing.items():
        if hit is None:
            run.violations.append((f"Z/{ring_n}", f"J^2 != 0 but no module of order <= {max_order} fails {p}"))
        else:
            M, c = hit
            run.notes.append(f"Z/{ring_n}: {M!r} is not {p} ({_why(c)})")


THEOREMS = {
    "T-nonsing-equiv": (_t_nonsing_equiv, "pair"),
    "L-nonsing-summand": (_l_nonsing_summand, "pair"),
    "C-summand": (_c_summand, "pair"),
    "C-sip": (_c_sip, "unary"),
    "L-ab": (_l_ab, "sum"),
    "C-mm": (_c_mm, "sum"),
    "T-sum": (_t_sum, "triple"),
    "T-finite-iff": (_t_finite_iff, "triple"),
    "P-necessary": (_p_necessary, "sum"),
    "T-ssip": (_t_ssip, "triple"),
    "T-orthogonal": (_t_orthogonal, "sum"),
    "C-serial": (None, "serial"),
}
DEFAULT_BOUNDS = {"pair": 24, "unary": 48, "sum": 48, "triple": 24, "serial": 32}
SERIAL_DEFAULT_RINGS = tuple(range(2, 13))


def verify_theorem(theorem: str, max_order: int | None = None, ring: FiniteRing | None = None) -> VerificationResult:
    """Check one theorem (and its dual) on every instance of its stream.

    ``max_order`` bounds each module of a pair or triple, the modules of a
    unary statement, and the direct sum for statements about sums.  For
    ``C-serial`` the ring is Z/n (every n from 2 to 12 when omitted).
    """
    if theorem not in THEOREMS:
        raise KeyError(f"unknown theorem id {theorem!r}; known: {', '.join(THEOREMS)}")
    fn, kind = THEOREMS[theorem]
    bound = DEFAULT_BOUNDS[kind] if max_order is None else max_order
    run = _Run()
    start = time.perf_counter()
    if kind == "serial":
        if ring is not None and ring.n is None:
            raise ValueError("C-serial needs a ring Z/n")
        for n in ([ring.n] if ring is not None else SERIAL_DEFAULT_RINGS):
            _c_serial(n, bound, run)
    else:
        # direct sums of two stream modules may exceed the default carrier cap
        with limits(max_module_size=max(LIMITS.max_module_size, bound * bound)):
            fn(list(stream(bound, ring)), run, bound=bound)
    elapsed = time.perf_counter() - start
    return VerificationResult(theorem, run.count, run.violations, elapsed, run.notes)


# -- expressions and counterexample search ----------------------------------------

_TOKEN = re.compile(r"\s*(?:(\()|(\))|(,)|(&|!|~|\+)|([A-Za-z][A-Za-z0-9_-]*))")
ARGUMENTS = {"self", "M", "A", "B", "A+B"}


class ExpressionError(ValueError):
    pass


@dataclass(frozen=True)
class Atom:
    name: str
    args: tuple[str, ...]

    def __str__(self):
        return f"{self.name}({', '.join(self.args)})" if self.args else self.name


@dataclass(frozen=True)
class Not:
    arg: object

    def __str__(self):
        return f"not ({self.arg})" if isinstance(self.arg, And) else f"not {self.arg}"


@dataclass(frozen=True)
class And:
    parts: tuple

    def __str__(self):
        return " and ".join(str(p) for p in self.parts)


def _tokenize(text: str) -> list[str]:
    toks, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExpressionError(f"unexpected character {text[pos]!r} at position {pos}")
        toks.append(next(g for g in m.groups() if g is not None))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return toks


def parse_expression(text: str):
    """Parse ``atom``, ``not e``, ``e and e`` and parentheses.

    An atom is a property name with optional arguments drawn from self, M,
    A, B and A+B; ``&`` and ``!``/``~`` are accepted for and/not.  A relative
    property with one argument X means X relative to itself; with two,
    ``p(X, Y)`` quantifies over Hom(X, Y).
    """
    toks = _tokenize(text)
    if not toks:
        raise ExpressionError("empty expression")
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok is None or (expected is not None and tok != expected):
            raise ExpressionError(f"expected {expected or 'a term'}, found {tok or 'end of input'}")
        pos += 1
        return tok

    def argument():
        tok = take()
        if tok == "A" and peek() == "+":
            take("+")
            take("B")
            return "A+B"
        if tok not in ARGUMENTS:
            raise ExpressionError(f"unknown argument {tok!r}; use self, M, A, B or A+B")
        return "M" if tok == "self" else tok

    def primary():
        tok = peek()
        if tok in ("not", "!", "~"):
            take()
            return Not(primary())
        if tok == "(":
            take("(")
            e = conj()
            take(")")
            return e
        name = take()
        name = ALIASES.get(name, name)
        if name not in PROPERTY_NAMES:
            raise ExpressionError(f"unknown property {name!r}")
        args: tuple[str, ...] = ()
        if peek() == "(":
            take("(")
            args = (argument(),)
            if peek() == ",":
                take(",")
                args += (argument(),)
            take(")")
        if name in UNARY and len(args) > 1:
            raise ExpressionError(f"{name} takes one module")
        return Atom(name, args)

    def conj():
        parts = [primary()]
        while peek() in ("and", "&"):
            take()
            parts.append(primary())
        # conjunction is associative, so nested groups are flattened
        parts = [q for p in parts for q in (p.parts if isinstance(p, And) else (p,))]
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    e = conj()
    if pos != len(toks):
        raise ExpressionError(f"unexpected {toks[pos]!r}")
    return e


def _atoms(e):
    if isinstance(e, Atom):
        yield e
    elif isinstance(e, Not):
        yield from _atoms(e.arg)
    else:
        for p in e.parts:
            yield from _atoms(p)


def _uses_pair(*exprs) -> bool:
    return any(a in ("A", "B", "A+B") for e in exprs for atom in _atoms(e) for a in atom.args)


@dataclass
class SearchResult:
    instance: str
    modules: dict[str, FiniteModule]
    checks: list[tuple[str, Check]]
    examined: int

    @property
    def failing(self) -> Check:
        return self.checks[-1][1]


def _evaluate_expr(e, env, log):
    if isinstance(e, Atom):
        mods = [env[a] for a in (e.args or ("M",))]
        c = evaluate(e.name, *mods)
        log.append((str(e), c))
        return c.holds
    if isinstance(e, Not):
        return not _evaluate_expr(e.arg, env, log)
    return all(_evaluate_expr(p, env, log) for p in e.parts)


def search_counterexample(hypothesis: str, conclusion: str, max_order: int, ring: FiniteRing | None = None):
    """First instance with hypothesis true and conclusion false, or None.

    Without A/B in either expression the instances are the modules of order
    at most ``max_order`` in increasing order; otherwise they are ordered pairs
    (A, B) with |A|*|B| <= max_order, and M stands for A+B.
    """
    hyp, concl = parse_expression(hypothesis), parse_expression(conclusion)
    mods = list(stream(max_order, ring))
    if _uses_pair(hyp, concl):
        envs = []
        for A, B in ordered_pairs(mods, max_order):
            S = dsum(A, B)
            envs.append((f"A={A!r}, B={B!r}", {"A": A, "B": B, "A+B": S, "M": S}))
    else:
        envs = [(repr(M), {"M": M}) for M in mods]
    for n, (inst, env) in enumerate(envs, 1):
        log: list[tuple[str, Check]] = []
        if not _evaluate_expr(hyp, env, log):
            continue
        if _evaluate_expr(concl, env, log):
            continue
        return SearchResult(inst, env, log, n)
    return None
