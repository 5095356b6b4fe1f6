"""Trivalent hypothesis tests read off from confidence regions."""

__version__ = "0.1.0"

from .confidence import (
    BernoulliSequence,
    Evidence,
    IncompatibleModelError,
    NormalKnownSigma,
    Rigged,
    WaldBinomial,
    WaldNormal,
    bits,
)
from .hypothesis_space import (
    NONNEGATIVE,
    REAL_LINE,
    UNIT_INTERVAL,
    AmbientMismatchError,
    Interval,
    RegionSet,
    closed,
    complement,
    contains,
    dense_codense,
    interior,
    intersects,
    is_confirmable,
    open_interval,
    point,
)
from .power import ClosedForm, MonteCarlo, d_value, power_curve, power_point
from .verdict import Outcome, Verdict, evaluate, run_test

__all__ = [
    "NONNEGATIVE",
    "REAL_LINE",
    "UNIT_INTERVAL",
    "AmbientMismatchError",
    "BernoulliSequence",
    "ClosedForm",
    "Evidence",
    "IncompatibleModelError",
    "Interval",
    "MonteCarlo",
    "NormalKnownSigma",
    "Outcome",
    "RegionSet",
    "Rigged",
    "Verdict",
    "WaldBinomial",
    "WaldNormal",
    "__version__",
    "bits",
    "closed",
    "complement",
    "contains",
    "d_value",
    "dense_codense",
    "evaluate",
    "interior",
    "intersects",
    "is_confirmable",
    "open_interval",
    "point",
    "power_curve",
    "power_point",
    "run_test",
]
