"""Granular association rules between two information systems joined by a relation."""

__version__ = "0.1.0"

from .discretize import (
    BoundaryChain,
    DiscretizationWarning,
    DiscretizerEntry,
    DiscretizerSpec,
    Method,
    discretize_system,
    equal_frequency_boundaries,
    equal_width_boundaries,
)
from .errors import (
    DataError,
    DomainError,
    GranularError,
    KindError,
    OutOfRangeError,
    ParameterError,
    ReferentialError,
    SchemaError,
)
from .measures import GranularRule, RuleMeasures, Thresholds, evaluate_rule
from .miner import MiningResult, candidates, enumerate_granules, mine
from .model import (
    MMER,
    Attribute,
    AttributeKind,
    BinaryRelation,
    Granule,
    InformationSystem,
    Interval,
    Nominal,
    Numeric,
    Side,
    block,
    granule,
    support,
)
from .dataio import load_mmer, load_movielens, write_mmer, MovieLensOptions, SchemaConfig

__all__ = [name for name in dir() if not name.startswith("_")]
