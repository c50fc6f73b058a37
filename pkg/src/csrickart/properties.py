"""Deciding the (dual) CS-Rickart family of properties by exhaustive search.

Relative properties take the pair in the order the definitions name it:
``is_cs_rickart(N, M)`` asks whether N is M-CS-Rickart, so the maps run
M -> N.  The nonsingularity predicates follow the same rule for their first
argument: ``is_k_nonsingular(N, M)`` and ``is_t_nonsingular(M, N)`` both
quantify over Hom(M, N).

Every quantifier over Hom(M, N) only needs the set of kernels (or images)
that occur, so each pair is reduced once to those two families.  Small hom
sets are enumerated outright.  Over Z and Z/n a large hom set is replaced by
its exact lattice description: K is a kernel iff M/K embeds in N, and I is an
image iff I is a quotient of M.  Both descriptions are decided by comparing
partitions, and a witness map is built for any kernel or image that is
reported.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

from . import abelian
from .core import (
    LIMITS,
    AlgebraError,
    FiniteModule,
    ModuleHom,
    RingMismatch,
    Submodule,
    canonical_form,
)
from .homs import additive_count, first_hom_hitting, hom_with_image, hom_with_kernel, kernels_and_images
from .lattice import lattice, sum_masks

PROPERTY_NAMES = (
    "rickart",
    "dual-rickart",
    "cs-rickart",
    "dual-cs-rickart",
    "extending",
    "lifting",
    "sip-extending",
    "ssp-lifting",
    "sip",
    "ssp",
    "k-nonsingular",
    "t-nonsingular",
)
RELATIVE = {"rickart", "dual-rickart", "cs-rickart", "dual-cs-rickart", "k-nonsingular", "t-nonsingular"}
# for finite modules the arbitrary-family variants coincide with the two-summand ones
ALIASES = {"ssip-extending": "sip-extending", "sssp-lifting": "ssp-lifting"}


@dataclass
class Witness:
    hom: ModuleHom | None = None
    submodule: Submodule | None = None
    summand: Submodule | None = None
    pair: tuple[Submodule, Submodule] | None = None
    note: str = ""

    def to_json(self) -> dict:
        out = {}
        if self.hom is not None:
            out["hom"] = [list(r) for r in self.hom.matrix]
        if self.submodule is not None:
            out["submodule"] = self.submodule.generator_coords()
        if self.summand is not None:
            out["summand"] = self.summand.generator_coords()
        if self.pair is not None:
            out["pair"] = [s.generator_coords() for s in self.pair]
        if self.note:
            out["note"] = self.note
        return out

    def describe(self) -> str:
        parts = []
        if self.note:
            parts.append(self.note)
        if self.hom is not None:
            rows = "; ".join(" ".join(str(v) for v in r) for r in self.hom.matrix)
            parts.append(f"hom [{rows}]")
        if self.pair is not None:
            parts.append(f"summands {self.pair[0]!r} and {self.pair[1]!r}")
        if self.submodule is not None:
            parts.append(f"submodule {self.submodule!r}")
        if self.summand is not None:
            parts.append(f"summand {self.summand!r}")
        return ", ".join(parts)


@dataclass
class Check:
    """Outcome of one property test: a verdict plus the evidence for it."""

    holds: bool
    witness: Witness | None = None
    certificates: list[Witness] = field(default_factory=list)

    def __bool__(self):
        return self.holds


# -- kernels and images of a hom set -------------------------------------------

class HomFamily:
    """The distinct kernels and images of the maps in Hom(M, N), with witnesses.

    Over a custom ring Hom(M, N) is enumerated.  Over Z and Z/n the families
    come from the partition tests; a reported failure is still realized by
    the lexicographically first failing map whenever Hom(M, N) is within the
    enumeration cap.
    """

    def __init__(self, M: FiniteModule, N: FiniteModule):
        if M.ring != N.ring:
            raise RingMismatch("properties need modules over the same ring")
        self.M, self.N = M, N
        self.enumerated = not M.is_abelian_type

    @cached_property
    def _enumeration(self):
        return kernels_and_images(self.M, self.N)

    @cached_property
    def kernels(self) -> list[int]:
        lat = lattice(self.M)
        if self.enumerated:
            return sorted(self._enumeration[0], key=lat.position.__getitem__)
        cf = canonical_form(self.N)
        return [k for k in lat.masks if abelian.type_embeds(lat.quotient_type(k), cf)]

    @cached_property
    def images(self) -> list[int]:
        lat = lattice(self.N)
        if self.enumerated:
            return sorted(self._enumeration[1], key=lat.position.__getitem__)
        cf = canonical_form(self.M)
        return [i for i in lat.masks if abelian.type_embeds(lat.submodule_type(i), cf)]

    def kernel_witness(self, k: int) -> ModuleHom:
        if self.enumerated:
            return ModuleHom(self.M, self.N, self._enumeration[0][k])
        return hom_with_kernel(self.M, Submodule(self.M, k), self.N)

    def image_witness(self, i: int) -> ModuleHom:
        if self.enumerated:
            return ModuleHom(self.M, self.N, self._enumeration[1][i])
        return hom_with_image(self.M, Submodule(self.N, i))

    def first_failure(self, failing: list[int], use_kernels: bool) -> ModuleHom:
        """The failing map with the smallest matrix; if Hom(M, N) is beyond the
        enumeration cap, a map realizing the first failing submodule."""
        get = self.kernel_witness if use_kernels else self.image_witness
        if self.enumerated:
            return min((get(m) for m in failing), key=lambda f: f.matrix)
        if additive_count(self.M, self.N) <= LIMITS.max_homs:
            return first_hom_hitting(self.M, self.N, failing, kernels=use_kernels)
        return get(failing[0])


_FAMILIES: dict = {}
_CHECKS: dict = {}


def hom_family(M: FiniteModule, N: FiniteModule) -> HomFamily:
    key = (M.key, N.key)
    fam = _FAMILIES.get(key)
    if fam is None:
        fam = _FAMILIES[key] = HomFamily(M, N)
    return fam


def clear_caches() -> None:
    _FAMILIES.clear()
    _CHECKS.clear()


def _memo(name: str, *mods: FiniteModule, verbose: bool = False):
    return (name, verbose) + tuple(m.key for m in mods)


def _cached(fn):
    def wrapper(*mods, verbose: bool = False):
        key = _memo(fn.__name__, *mods, verbose=verbose)
        out = _CHECKS.get(key)
        if out is None:
            out = _CHECKS[key] = fn(*mods, verbose=verbose)
        return out

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    wrapper.__wrapped__ = fn
    return wrapper


# -- relative properties -----------------------------------------------------

def _kernel_check(N, M, verbose, good, note, certify) -> Check:
    fam = hom_family(M, N)
    lat = lattice(M)
    failing = [k for k in fam.kernels if not good(lat, k)]
    if failing:
        f = fam.first_failure(failing, True)
        return Check(False, Witness(hom=f, submodule=f.kernel, note=note))
    certs = []
    if verbose and certify is not None:
        for k in fam.kernels:
            d = certify(lat, k)
            certs.append(Witness(submodule=lat.sub(k), summand=None if d is None else lat.sub(d)))
    return Check(True, certificates=certs)


def _image_check(N, M, verbose, good, note, certify) -> Check:
    fam = hom_family(M, N)
    lat = lattice(N)
    failing = [i for i in fam.images if not good(lat, i)]
    if failing:
        f = fam.first_failure(failing, False)
        return Check(False, Witness(hom=f, submodule=f.image, note=note))
    certs = []
    if verbose and certify is not None:
        for i in fam.images:
            d = certify(lat, i)
            certs.append(Witness(submodule=lat.sub(i), summand=None if d is None else lat.sub(d)))
    return Check(True, certificates=certs)


@_cached
def is_cs_rickart(N: FiniteModule, M: FiniteModule, *, verbose: bool = False) -> Check:
    """N is M-CS-Rickart: every kernel of a map M -> N is essential in a summand of M."""
    return _kernel_check(
        N, M, verbose,
        lambda lat, k: lat.essential_summand(k) is not None,
        "kernel is essential in no direct summand",
        lambda lat, k: lat.essential_summand(k),
    )


@_cached
def is_rickart(N: FiniteModule, M: FiniteModule, *, verbose: bool = False) -> Check:
    """N is M-Rickart: every kernel of a map M -> N is a direct summand of M."""
    return _kernel_check(
        N, M, verbose,
        lambda lat, k: lat.is_summand(k),
        "kernel is not a direct summand",
        lambda lat, k: k,
    )


@_cached
def is_dual_cs_rickart(N: FiniteModule, M: FiniteModule, *, verbose: bool = False) -> Check:
    """N is dual M-CS-Rickart: every image of a map M -> N lies above a summand of N."""
    return _image_check(
        N, M, verbose,
        lambda lat, i: lat.summand_below(i) is not None,
        "image lies above no direct summand",
        lambda lat, i: lat.summand_below(i),
    )


@_cached
def is_dual_rickart(N: FiniteModule, M: FiniteModule, *, verbose: bool = False) -> Check:
    """N is dual M-Rickart: every image of a map M -> N is a direct summand of N."""
    return _image_check(
        N, M, verbose,
        lambda lat, i: lat.is_summand(i),
        "image is not a direct summand",
        lambda lat, i: i,
    )


@_cached
def is_k_nonsingular(N: FiniteModule, M: FiniteModule, *, verbose: bool = False) -> Check:
    """N is M-K-nonsingular: a map M -> N with essential kernel is zero."""
    return _kernel_check(
        N, M, verbose,
        lambda lat, k: k == lat.full or not lat.is_essential(k),
        "nonzero map with essential kernel",
        None,
    )


@_cached
def is_t_nonsingular(M: FiniteModule, N: FiniteModule, *, verbose: bool = False) -> Check:
    """M is N-T-nonsingular: a map M -> N with superfluous image is zero."""
    return _image_check(
        N, M, verbose,
        lambda lat, i: i == 1 or not lat.is_superfluous(i),
        "nonzero map with superfluous image",
        None,
    )


# -- unary properties ------------------------------------------------------

@_cached
def is_extending(M: FiniteModule, *, verbose: bool = False) -> Check:
    """Every submodule is essential in a direct summand."""
    lat = lattice(M)
    certs = []
    for k in lat.masks:
        d = lat.essential_summand(k)
        if d is None:
            return Check(False, Witness(submodule=lat.sub(k), note="essential in no direct summand"))
        if verbose:
            certs.append(Witness(submodule=lat.sub(k), summand=lat.sub(d)))
    return Check(True, certificates=certs)


@_cached
def is_lifting(M: FiniteModule, *, verbose: bool = False) -> Check:
    """Every submodule lies above a direct summand."""
    lat = lattice(M)
    certs = []
    for l in lat.masks:
        d = lat.summand_below(l)
        if d is None:
            return Check(False, Witness(submodule=lat.sub(l), note="lies above no direct summand"))
        if verbose:
            certs.append(Witness(submodule=lat.sub(l), summand=lat.sub(d)))
    return Check(True, certificates=certs)


def _summand_pairs(M: FiniteModule, combine):
    """Distinct combinations of two summands, each with its first producing pair."""
    lat = lattice(M)
    summ = lat.summands
    seen: dict[int, tuple[int, int]] = {}
    for a_pos, a in enumerate(summ):
        for b in summ[a_pos + 1:]:
            if a & ~b == 0 or b & ~a == 0:
                continue  # nested pair: the combination is one of the two
            c = combine(a, b)
            if c not in seen:
                seen[c] = (a, b)
    return lat, seen


def _pair_check(M, verbose, combine, good, note, certify) -> Check:
    lat, combos = _summand_pairs(M, combine)
    certs = []
    for c, (a, b) in combos.items():
        if not good(lat, c):
            return Check(False, Witness(submodule=lat.sub(c), pair=(lat.sub(a), lat.sub(b)), note=note))
        if verbose:
            d = certify(lat, c)
            certs.append(Witness(submodule=lat.sub(c), pair=(lat.sub(a), lat.sub(b)), summand=lat.sub(d)))
    return Check(True, certificates=certs)


@_cached
def has_sip_extending(M: FiniteModule, *, verbose: bool = False) -> Check:
    """The intersection of any two direct summands is essential in a direct summand.

    By the two-summand reduction this is SIP-extending; for a finite module the
    arbitrary-family version (SSIP-extending) agrees, since every intersection
    of summands is an intersection of finitely many and the property passes
    from pairs to finite families by induction.
    """
    return _pair_check(
        M, verbose, lambda a, b: a & b,
        lambda lat, c: lat.essential_summand(c) is not None,
        "intersection of two summands is essential in no direct summand",
        lambda lat, c: lat.essential_summand(c),
    )


@_cached
def has_ssp_lifting(M: FiniteModule, *, verbose: bool = False) -> Check:
    """The sum of any two direct summands lies above a direct summand."""
    return _pair_check(
        M, verbose, lambda a, b: sum_masks(M, a, b),
        lambda lat, c: lat.summand_below(c) is not None,
        "sum of two summands lies above no direct summand",
        lambda lat, c: lat.summand_below(c),
    )


@_cached
def has_sip(M: FiniteModule, *, verbose: bool = False) -> Check:
    """The intersection of any two direct summands is a direct summand."""
    return _pair_check(
        M, verbose, lambda a, b: a & b,
        lambda lat, c: lat.is_summand(c),
        "intersection of two summands is not a direct summand",
        lambda lat, c: c,
    )


@_cached
def has_ssp(M: FiniteModule, *, verbose: bool = False) -> Check:
    """The sum of any two direct summands is a direct summand."""
    return _pair_check(
        M, verbose, lambda a, b: sum_masks(M, a, b),
        lambda lat, c: lat.is_summand(c),
        "sum of two summands is not a direct summand",
        lambda lat, c: c,
    )


UNARY = {
    "extending": is_extending,
    "lifting": is_lifting,
    "sip-extending": has_sip_extending,
    "ssp-lifting": has_ssp_lifting,
    "sip": has_sip,
    "ssp": has_ssp,
}
BINARY = {
    "rickart": is_rickart,
    "dual-rickart": is_dual_rickart,
    "cs-rickart": is_cs_rickart,
    "dual-cs-rickart": is_dual_cs_rickart,
    "k-nonsingular": is_k_nonsingular,
    "t-nonsingular": is_t_nonsingular,
}


def evaluate(name: str, source: FiniteModule, target: FiniteModule | None = None, *, verbose=False) -> Check:
    """Evaluate a property by its command-line name.

    Relative properties quantify over Hom(source, target), so
    ``evaluate("cs-rickart", M, N)`` asks whether N is M-CS-Rickart and
    ``evaluate("t-nonsingular", M, N)`` whether M is N-T-nonsingular.  The
    target defaults to the source.
    """
    name = ALIASES.get(name, name)
    if name in UNARY:
        if target is not None:
            raise AlgebraError(f"{name} is not a relative property")
        return UNARY[name](source, verbose=verbose)
    if name not in BINARY:
        raise KeyError(f"unknown property {name!r}")
    other = source if target is None else target
    if name == "t-nonsingular":
        return is_t_nonsingular(source, other, verbose=verbose)
    return BINARY[name](other, source, verbose=verbose)


# -- reports ------------------------------------------------------------------

IMPLICATIONS = (
    ("rickart", "cs-rickart"),
    ("dual-rickart", "dual-cs-rickart"),
    ("extending", "cs-rickart"),
    ("lifting", "dual-cs-rickart"),
    ("cs-rickart", "sip-extending"),
    ("dual-cs-rickart", "ssp-lifting"),
    ("sip", "sip-extending"),
    ("ssp", "ssp-lifting"),
)


@dataclass
class PropertyReport:
    module: FiniteModule
    properties: dict[str, bool]
    witnesses: dict[str, Witness | None]
    certificates: dict[str, list[Witness]] = field(default_factory=dict)

    def inconsistencies(self) -> list[str]:
        p = self.properties
        out = [f"{a} without {b}" for a, b in IMPLICATIONS if p[a] and not p[b]]
        if (p["cs-rickart"] and p["k-nonsingular"]) != p["rickart"]:
            out.append("cs-rickart and k-nonsingular disagree with rickart")
        if (p["dual-cs-rickart"] and p["t-nonsingular"]) != p["dual-rickart"]:
            out.append("dual-cs-rickart and t-nonsingular disagree with dual-rickart")
        for alias, base in ALIASES.items():
            if p.get(alias, p[base]) != p[base]:
                out.append(f"{alias} differs from {base}")
        return out

    def describe_module(self) -> dict:
        M = self.module
        out = {"name": repr(M), "ring": M.ring.describe(), "orders": list(M.orders), "size": M.size}
        if M.is_abelian_type:
            out["canonical_form"] = list(canonical_form(M))
        return out

    def to_dict(self) -> dict:
        return {
            "module": self.describe_module(),
            "properties": dict(self.properties),
            "witnesses": {k: w.to_json() for k, w in self.witnesses.items() if w is not None},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def format(self) -> str:
        lines = [f"module {self.module!r} over {self.module.ring.describe()}"]
        width = max(len(k) for k in self.properties)
        for k, v in self.properties.items():
            w = self.witnesses.get(k)
            tail = f"   ({w.describe()})" if w is not None else ""
            lines.append(f"  {k:<{width}}  {'true' if v else 'false'}{tail}")
        return "\n".join(lines)


def property_report(M: FiniteModule, *, verbose: bool = False) -> PropertyReport:
    """All twelve properties of M (relative ones taken with M = N) plus the aliases."""
    props: dict[str, bool] = {}
    wits: dict[str, Witness | None] = {}
    certs: dict[str, list[Witness]] = {}
    for name in PROPERTY_NAMES:
        c = evaluate(name, M, verbose=verbose)
        props[name] = c.holds
        wits[name] = c.witness
        if verbose:
            certs[name] = c.certificates
    for alias, base in ALIASES.items():
        props[alias] = props[base]
        wits[alias] = wits[base]
    rep = PropertyReport(M, props, wits, certs)
    bad = rep.inconsistencies()
    if bad:
        raise AssertionError(f"inconsistent report for {M!r}: {bad}")
    return rep
