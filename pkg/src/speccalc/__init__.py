"""Support, depth and coherence computations for ℤⁿ-graded modules over
polynomial rings with monomial data."""

from .errors import DomainError, InputError, InternalError, ResourceError, SoundnessAlarm, StabilityError
from .field_linalg import DEFAULT_PRIME, Field
from .graded_modules import (
    BoxModule,
    DegreeBox,
    DirectSum,
    FreeComplex,
    Presented,
    Region,
    Shift,
    SummandComplex,
    ZeroModule,
    default_box,
    evaluate,
    free_resolution,
    homology,
    koszul_complex,
    minimalize,
    taylor_resolution,
)
from .homological_invariants import (
    bass_numbers,
    bass_table,
    betti_numbers,
    betti_vector,
    depth_at_prime,
    depth_ideal,
    find_deep_module,
    find_depth_dim_prime,
    localize,
)
from .monomial_core import (
    Monomial,
    MonomialIdeal,
    MonomialPrime,
    PrimeSet,
    associated_primes,
    colon,
    dimension,
    irreducible_decomposition,
    minimal_generators,
    radical,
)
from .ring import Ring
from .spec_calculus import (
    CoherenceVerdict,
    check_dimension_theorem,
    coherence_verdict,
    default_catalog,
    is_specialization_closed,
    lambda_set,
    restrict,
    satisfies_union_condition,
    v_set,
    vlambda_family,
)
from .support_theory import (
    ass_module,
    closure_probes,
    supp_cohomology,
    supp_complex,
    supp_module,
    theorem_main_check,
)

__version__ = "0.1.0"
