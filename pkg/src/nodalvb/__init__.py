"""Vector bundles over noncommutative nodal curves: validation, type
classification, string/band enumeration, matrix realization, and the
exact-arithmetic isomorphism oracle."""

from .bunches import (
    BunchOfChains,
    ChainElement,
    DegreeWindow,
    build_bunch_almost,
    build_bunch_string,
    to_dot,
)
from .curves import (
    ComponentSpec,
    NodalCurveSpec,
    PointSpec,
    RelationPair,
    Shape,
    ShapeKind,
    SlotRef,
    ValidationReport,
    curve_shape,
    hereditary_points,
    spec_from_dict,
    spec_to_dict,
    validate,
)
from .realize import (
    LabeledBlockMatrix,
    TripleRealization,
    check_invertible,
    direct_sum,
    precanonical_blocks,
    realize_band,
    realize_string,
)
from .rep_type import (
    RepType,
    RepTypeVerdict,
    classify,
    classify_weighted,
    has_cycle,
    replay_cycle,
    tits_q1,
    tits_q2,
    tits_q3b,
)
from .strings_bands import (
    GENERIC,
    Band,
    BispecialString,
    SpecialString,
    UsualString,
    canonical_band,
    canonical_string,
    canonicalize,
    enumerate_objects,
    format_object,
    parse_object,
    rank,
    twist_canonicalize,
    validate_object,
    word_rank,
)
from .verify import (
    MorphismSpace,
    are_isomorphic,
    end_quotient_dim,
    end_reduced_length,
    hom_space,
    is_indecomposable,
    isomorphism_report,
)
from .words import (
    Word,
    WordKind,
    WordVerdict,
    check_word,
    classify_word,
    epsilon,
    format_word,
    invert,
    is_aperiodic,
    is_cyclic_symmetric,
    is_quasisymmetric,
    is_symmetric,
    parse_word,
    shift,
)

__all__ = [name for name in dir() if not name.startswith("_")]
