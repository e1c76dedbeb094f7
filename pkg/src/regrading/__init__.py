"""Exact-arithmetic engine for group-graded modules over finite-dimensional
algebras: change-of-grading functors, minimal projective resolutions, and
machine-checked injective-dimension bounds under regrading."""

from .groups import (
    ExtendedNat,
    FgAbelianGroup,
    GroupElement,
    GroupMorphism,
    cohomological_dimension,
    fiber_elements,
    kernel,
    smith_normal_form,
)
from .linalg import FieldSpec, Matrix, QQ
from .algebra import (
    Arrow,
    GradedAlgebra,
    QuiverPresentation,
    ValidationReport,
    compile_quiver,
    validate_algebra,
)
from .modules import (
    GradedMap,
    GradedModule,
    GradedVectorSpace,
    cokernel_map,
    direct_sum,
    dual,
    hom_space,
    kernel_map,
    projective_module,
    shift,
    simple_module,
    submodule_generated,
    validate,
    validate_map,
    validate_module,
    zero_module,
)
from .functors import (
    AdjunctionWitness,
    LazyGradedModule,
    adjunction_witness,
    coinduction,
    decomposition_iso,
    product_decomposition_check,
    pullback,
    pushforward,
    pushforward_map,
    rank1_regrade_resolution,
    regrade_algebra,
)
from .homology import (
    DEFAULT_CAP,
    DimensionVerdict,
    ExtResult,
    MinimalResolution,
    check_graded_injective,
    ext_table,
    graded_ext,
    graded_injective_dimension,
    graded_injectives,
    is_minimal,
    minimal_resolution,
    nonminimal_free_resolution,
    projective_dimension,
    top_and_radical,
    verify_acyclicity,
    verify_inequality,
)
from .pid import PidAtom, PidGradedModule, injective_dimensions, verify_sharpness
from .harness import (
    CampaignReport,
    DocumentError,
    kernel_window,
    parse_and_validate,
    random_module,
    run_campaign,
)

__version__ = "0.1.0"
