"""Integer-program assembly, LP/MPS writers and parsers, MIP starts."""
from .model import (  # noqa: F401
    Constraint, DeadlineMode, InTransitMode, ModelConfigError, ModelDescription, Variable,
    VariantConfig, build_model, check_assignment, decode_assignment, encode_plan, objective_value,
)
from .lp import LpFormatError, read_lp, write_lp  # noqa: F401
from .mps import MpsFormatError, read_mps, read_names, write_mps, write_names  # noqa: F401
from .start import MipStartError, read_mip_start, write_mip_start  # noqa: F401
