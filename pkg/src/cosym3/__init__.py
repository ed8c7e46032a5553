"""Exact-arithmetic toolkit for almost contact metric 3-structures.

Builds and certifies the flat model spaces (Euclidean, torus, mapping-torus
quotients), verifies the full set of 3-cosymplectic identities, computes
harmonic decompositions and Betti arithmetic, and analyzes the operator
algebra on basic harmonic forms; everything over exact rationals.
"""

from .cohomology import (
    GradedOperatorMatrix,
    HarmonicTable,
    betti_checks,
    decompose,
    harmonic_space,
    invariant_forms,
    is_basic,
    quaternion_module,
    small_operators,
    verify_ladder,
)
from .exterior import (
    EndField,
    HodgeOperator,
    KForm,
    Metric,
    VectorField,
    exterior_derivative,
    form_inner_product,
    hodge_star,
    interior_product,
    lie_bracket,
    pullback,
    volume_form,
    wedge,
)
from .liealg import LieAlgebraReport, big_operators, lie_report, xi_form
from .models import (
    HyperKahlerData,
    ModelSpace,
    Topology,
    builtin,
    check_hyper_kahler_isometry,
    euclidean_space,
    flat_torus,
    hyper_kahler_torus,
    m7f,
    mapping_torus,
    monodromy_invariance,
    quaternion_left_mult,
    quaternion_right_mult,
)
from .poly import Poly
from .structures import (
    AlmostContactMetricStructure,
    CheckItem,
    CheckReport,
    ThreeStructure,
    check_almost_contact,
    check_compatible,
    check_quaternionic,
    check_three_cosymplectic,
    d_homothetic_deform,
    fundamental_form,
    nijenhuis_tensor,
)

__version__ = "0.1.0"

__all__ = [
    "AlmostContactMetricStructure",
    "CheckItem",
    "CheckReport",
    "EndField",
    "GradedOperatorMatrix",
    "HarmonicTable",
    "HodgeOperator",
    "HyperKahlerData",
    "KForm",
    "LieAlgebraReport",
    "Metric",
    "ModelSpace",
    "Poly",
    "ThreeStructure",
    "Topology",
    "VectorField",
    "betti_checks",
    "big_operators",
    "builtin",
    "check_almost_contact",
    "check_compatible",
    "check_hyper_kahler_isometry",
    "check_quaternionic",
    "check_three_cosymplectic",
    "d_homothetic_deform",
    "decompose",
    "euclidean_space",
    "exterior_derivative",
    "flat_torus",
    "form_inner_product",
    "fundamental_form",
    "harmonic_space",
    "hodge_star",
    "hyper_kahler_torus",
    "interior_product",
    "invariant_forms",
    "is_basic",
    "lie_bracket",
    "lie_report",
    "m7f",
    "mapping_torus",
    "monodromy_invariance",
    "nijenhuis_tensor",
    "pullback",
    "quaternion_left_mult",
    "quaternion_module",
    "quaternion_right_mult",
    "small_operators",
    "verify_ladder",
    "volume_form",
    "wedge",
    "xi_form",
]
