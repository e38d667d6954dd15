"""Euler characteristics of signed Selmer groups: the computable side.

Local reduction data, Tamagawa numbers, rational torsion, the standing
hypotheses, and the assembled Euler characteristic as an exact power of p.
"""

__version__ = "0.1.0"

from .curves import WeierstrassCurve, ModelTransform, new_curve, parse_curve, minimal_model, reduce_mod  # noqa: F401
from .counting import count_points, trace_of_frobenius  # noqa: F401
from .local import LocalData, ReductionType, classify_reduction, local_data, local_packet  # noqa: F401
from .torsion import TorsionInfo, torsion_subgroup, torsion_p_part, check_torsion_vanishing  # noqa: F401
from .euler import (  # noqa: F401
    FieldLocalData,
    HypothesisReport,
    EulerCharResult,
    LambdaSeries,
    PlaceAboveP,
    check_hypotheses,
    euler_char,
    lambda_euler_char,
    propagate_vanishing,
    sign_independence,
)
