"""Exhaustive decision procedures for CS-Rickart type properties of finite modules."""
from .core import (
    INTEGERS,
    LIMITS,
    AlgebraError,
    AxiomError,
    CarrierTooLarge,
    Element,
    FiniteModule,
    FiniteRing,
    ModuleHom,
    RingMismatch,
    Submodule,
    canonical_form,
    canonical_module,
    direct_sum,
    limits,
    make_abelian_group,
    make_module,
    make_ring,
    zero_module,
    zn,
)
from .homs import (
    compose,
    cokernel,
    count_homs,
    embeds_in,
    enumerate_homs,
    idempotent_endos,
    identity,
    image,
    is_isomorphic,
    kernel,
    zero_hom,
)
from .lattice import (
    direct_summands,
    intersect,
    is_direct_summand,
    is_essential,
    is_superfluous,
    lies_above_summand,
    quotient,
    radical,
    socle,
    submodule_sum,
    submodules,
)
from .properties import (
    Check,
    PropertyReport,
    Witness,
    evaluate,
    has_sip,
    has_sip_extending,
    has_ssp,
    has_ssp_lifting,
    is_cs_rickart,
    is_dual_cs_rickart,
    is_dual_rickart,
    is_extending,
    is_k_nonsingular,
    is_lifting,
    is_rickart,
    is_t_nonsingular,
    property_report,
)
from .specfile import SpecSyntaxError, format_module_spec, parse_module_spec, read_module
from .theorems import (
    InstanceStream,
    VerificationResult,
    enumerate_abelian_groups,
    enumerate_modules_over_zn,
    search_counterexample,
    verify_theorem,
)

__version__ = "0.1.0"
