"""Finite measured groupoids: non-local conditioning, grade-2 measures,
the convolution *-algebra and its GNS data."""

from ._kernels import backend
from .algebra import (
    GroupoidFunction,
    algebra_unit,
    bridge_certified,
    bridge_decoherence,
    char_fn,
    convolve,
    involution,
    state,
    support,
)
from .decoherence import (
    PhaseAction,
    decoherence,
    decoherence_matrix,
    decoherence_report,
    grade2,
    interference,
    phase_from_potential,
    sorkin_audit,
    sorkin_third_order,
    validate_phase,
)
from .errors import *  # noqa: F401,F403
from .gns import gns_dimension, gns_report, gram, in_gelfand_ideal, null_set_correspondence
from .groupoid import (
    FiniteGroupoid,
    ValidationReport,
    cyclic_group,
    disjoint_union,
    group_groupoid,
    isotropy,
    orbits,
    pair_groupoid,
    unit_groupoid,
    validate,
)
from .haar import (
    MeasuredGroupoid,
    counting_haar,
    custom_haar,
    invariant_representative,
    modular_function,
    normalized_haar,
)
from .lattice import (
    FiniteLattice,
    dimension_check,
    irreducible_elements,
    modular_audit,
    modular_check,
    powerset_lattice,
)
from .subsets import (
    MorphismSet,
    ObjectSet,
    conditioned,
    relation_report,
    set_product,
    source_fiber,
    target_fiber,
)

__version__ = "0.1.0"
