"""Passivity analysis for velocity-sourced impedance control of series elastic actuators."""
from .bounds import (
    UNBOUNDED,
    BoundsReport,
    b_max,
    bounds_report,
    j_max_null,
    j_max_spring,
    kd_max,
)
from .config import AnalysisConfig, emit_config, load_config, parse_config
from .estimator import BoundsTransformer, PassivityClassifier
from .exceptions import (
    ConfigError,
    EvalAtPole,
    Infeasible,
    InsufficientSpan,
    InvalidTarget,
    NotSimplePole,
    SEAPassivityError,
    UnknownScenario,
    ZeroPolynomial,
)
from .freq import bode, phase_extrema, segment_regimes
from .guidelines import evaluate_prior_guidelines
from .model import (
    ControllerGains,
    PlantParams,
    RenderTarget,
    assemble_block_diagram,
    build_impedance,
    build_null_impedance,
    build_spring_impedance,
)
from .passivity import PassivityVerdict, SamplerConfig, agreement_sweep, check_closed_form, check_numeric
from .polyalg import Polynomial, RationalTransferFunction, residue_simple_pole, routh_stable
from .tuner import TuningSpec, tune

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
