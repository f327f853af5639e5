"""atf-studio: exact-arithmetic toolkit for almost toric base diagrams."""

from .affine import (
    HalfPlane,
    IMat2,
    IVec2,
    QVec2,
    affine_length,
    det,
    piecewise_shear,
    piecewise_shear_inverse,
    primitive_decompose,
    qvec,
    shear_matrix,
)
from .diagram import (
    Corner,
    CornerType,
    Diagram,
    corner_type,
    diagram_from_json,
    diagram_to_json,
    diagrams_equal,
    isolate,
    preset,
    validate,
    vertex_kind,
)
from .energy import (
    EnergyValue,
    GermClass,
    PLGerm,
    best_probe_bound,
    brute_force_equiv,
    energy_at,
    energy_field,
    germ_equivalent,
    germ_normal_form,
    germ_of_fibre,
    probe_bound,
)
from .moves import (
    MoveRecord,
    change_branch_cut,
    clear_region,
    mutate,
    nodal_slide,
    nodal_trade,
)
from .rat import Rat, rat, rat_str
from .walker import (
    MarkovNode,
    StepRecord,
    WalkTrace,
    markov_tree,
    prepare,
    step,
    two_corner_report,
    walk,
)

__version__ = "0.1.0"
