"""octaline: matrix *-algebras, two-product structures, the projective line
with its octahedral pole symmetry, and unitary torsor flows."""

from .algebra import StarAlgebra, adjoint, check_p_star, invert, is_hermitian, is_positive
from .jordanlie import (
    ConversionParams,
    JordanLieStructure,
    associator,
    check_axioms,
    complexify_to_star,
    from_associative,
    from_star_algebra,
    split_sym_skew,
    tensor_product,
    to_associative,
    triple_systems,
)
from .octahedron import (
    OctGroup,
    abstract_octahedral_group,
    check_isomorphism,
    derive_permutation,
    generate_group,
    standard_poles,
    table_diff_report,
)
from .projline import (
    FormMatrix,
    MoebiusMap,
    Point,
    apply_moebius,
    chart_value,
    cross_ratio,
    dilation,
    form_matrix,
    is_lagrangian,
    orthocomplement,
    point_equals,
    point_from_chart,
    real_form_tau,
    symmetry_J,
    transversal,
)
from .unitary import (
    Obstate,
    UnitaryGroupSpec,
    UnitarySetting,
    affine_completeness_check,
    antipode,
    cayley,
    embed_unitary,
    inverse_cayley,
    is_unitary,
    make_obstate,
    sample_real_form,
    standard_setting,
)
from .evolution import (
    CotangentVector,
    LeftInvariantField,
    TangentVector,
    field_bracket,
    flow_closed_form,
    flow_rk4,
    left_invariant_field,
    pairing,
    picture_equivalence_check,
    quantum_identify,
    schrodinger_reference,
)

__version__ = "0.1.0"
