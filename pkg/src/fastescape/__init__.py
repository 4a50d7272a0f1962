"""Growth, regularity and escape-rate analysis for entire functions.

The package tracks maximum/minimum modulus growth of entire functions,
classifies them against iterated-threshold and dilation regularity criteria,
classifies point orbits against escape-rate thresholds at finite horizon, and
reconstructs counterexample growth models with their defining inequalities
asserted numerically.  Magnitudes of iterated-modulus size are carried in
``TowerReal`` exponential-tower arithmetic.
"""

from .efun import (EntireFunction, ExpFamily, LacunaryProduct, ModulusResult,
                   TruncatedSeries, exp_series, from_descriptor, max_modulus,
                   min_modulus, modulus_sandwich_check, to_descriptor)
from .errors import RangeError, ThresholdNotFound
from .growth import (FunctionGrowthModel, GrowthModel, OrbitSequence,
                     as_growth_model, iterate_map, order_estimates, phi,
                     threshold_R)
from .xreal import (Ordering, TowerReal, apply_exp, apply_log, compare,
                    from_float, mul_by, normalize, scale_pow)

__version__ = "0.1.0"

__all__ = [
    "EntireFunction", "ExpFamily", "LacunaryProduct", "TruncatedSeries",
    "ModulusResult", "exp_series", "max_modulus", "min_modulus",
    "modulus_sandwich_check", "to_descriptor", "from_descriptor",
    "GrowthModel", "FunctionGrowthModel", "OrbitSequence", "as_growth_model",
    "phi", "iterate_map", "threshold_R", "order_estimates",
    "TowerReal", "Ordering", "normalize", "from_float", "compare",
    "apply_exp", "apply_log", "scale_pow", "mul_by",
    "RangeError", "ThresholdNotFound",
    "__version__",
]
