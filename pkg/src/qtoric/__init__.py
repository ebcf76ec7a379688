"""Exact computations with quantum fans: calibrated fans over real number
fields, their morphisms, weighted blow-ups, polytope and fan cobordisms."""

from .exactreal import QQ, ExactMatrix, QFanError, RealField, Scalar, field_create, sqrt_field
from .fan_core import Calibration, Cone, QuantumFan, ValidationReport, validate_fan
from .fan_maps import BirationalFanMorphism, FanMorphism, gale_transform, validate_birational, validate_morphism
from .blowup import BlowupSpec, fiber_strata, star_subdivision
from .polytopes import Polytope, normal_fan
from .fan_cobordism import FanCobordism, blowup_cobordism, cobordism_index, validate_cobordism

__version__ = "0.1.0"
