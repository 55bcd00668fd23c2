"""Numerical ODE tools for planar polynomial fields."""

from .index import Circle, IndexAccumulationError, IndexRecord, Polyline, ZeroOnCurveError, index_on_curve, index_record
from .integrate import TERMINATIONS, OrbitTrace, integrate, winding_angle
from .monodromy import MonodromyReport, ProbeConfig, monodromy_probe
from .sections import Crossing, NotTransverseError, Section, choose_section, count_contact_points, return_map
from .singular import SingularPoint, SingularPointSet, find_singular_points

__all__ = [
    "Circle",
    "Crossing",
    "IndexAccumulationError",
    "IndexRecord",
    "MonodromyReport",
    "NotTransverseError",
    "OrbitTrace",
    "Polyline",
    "ProbeConfig",
    "Section",
    "SingularPoint",
    "SingularPointSet",
    "TERMINATIONS",
    "ZeroOnCurveError",
    "choose_section",
    "count_contact_points",
    "find_singular_points",
    "index_on_curve",
    "index_record",
    "integrate",
    "monodromy_probe",
    "return_map",
    "winding_angle",
]
