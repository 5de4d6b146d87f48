"""Exact computation in local fields of positive characteristic.

Subpackages cover finite-field and truncated p-adic arithmetic (arith),
truncated Laurent/power series with p-adic exponentiation and Hasse
derivatives (series), the coordinate description of one-units (units),
continuous and locally analytic characters of the one-unit group
(characters), weight-graded Cech and local cohomology of twisted line
bundles on projective space with exact Gauss norms (projcoh), and PBW
preimages with p-adic norm certificates (pbw).
"""

from .arith import FieldSpec, FqElem, ZpApprox, ff_mul, fp_coords_twisted, frobenius, lucas_binom
from .characters import (
    AnalyticCharacter,
    AnalyticityVerdict,
    ContinuousCharacter,
    TargetField,
    compose_analytic,
    diagonal_embed,
    eval_analytic,
    eval_continuous,
    is_locally_analytic,
    recover_exponent,
    series_at_one,
)
from .errors import (
    DivisionByZero,
    HorizonExceeded,
    InsufficientPrecision,
    NotAnalytic,
    NotOneUnit,
    PivotFailure,
    ToolkitError,
)
from .pbw import (
    AuxLog,
    FreeModuleElement,
    PBWElement,
    act,
    aux_A,
    good_preimage,
    pbw_mul,
    pbw_norm,
)
from .projcoh import (
    CechData,
    MonomialSection,
    NormValue,
    gauss_norm,
    global_cohomology_dim,
    lie_action,
    local_cohomology_dim,
    strictness_modulus,
    uniform_strictness,
    weight_change,
    weight_cohomology,
)
from .series import LaurentSeries, PowerSeriesAtOne, hasse_derivative, ls_inv, ls_mul, one_unit_pow
from .units import OneUnitExponents, UnitDecomposition, decompose, expand, peel

__version__ = "0.1.0"
