"""Exact laminations of the circle, group actions on it, and their certificates."""

from .scalar import QuadraticScalar, compare, golden_angle, golden_ratio
from .circle import (
    INF,
    Arc,
    BlownUpPoint,
    Chord,
    DenjoyFrame,
    Linking,
    Model,
    TreePoint,
    angle,
    chord,
    cyclic_order,
    linked,
    proj,
)
from .maps import (
    ArcAffineInvolution,
    BlowupRotation,
    PiecewiseAffine,
    classify_moebius,
    fixed_points,
    moebius,
    rotation_number,
)
from .group import (
    GroupAction,
    Word,
    classify_element,
    enumerate_ball,
    fixed_point_cloud,
    north_south_diagnostic,
    triple_discontinuity,
)
from .lamination import (
    Certificate,
    CollectionMode,
    Lamination,
    Verdict,
    check_collection,
    coverage_report,
    face_summary,
    gaps,
    materialize,
    rainbow,
)
from .constructions import denjoy, denjoy_tessellation, farey, geodesic_lift_lamination, pa_like_map
from .moore import induced_fixed_classes, looseness_check, moore_complex
from .scenario import load_scenario, parse_scenario, run_scenario

__version__ = "0.1.0"
