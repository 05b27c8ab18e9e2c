# Services package
from services.calculus_service import CalculusService
from services.algebroid_service import AlgebroidService
from services.expression_service import ExpressionService
from services.lift_service import LiftService
from services.dual_poisson_service import DualPoissonService
from services.pair_groupoid_service import PairGroupoidService
from services.poisson_pair_service import PoissonPairService
from services.model_service import ModelService
from services.suite_service import SuiteService

__all__ = [
    "CalculusService",
    "AlgebroidService",
    "ExpressionService",
    "LiftService",
    "DualPoissonService",
    "PairGroupoidService",
    "PoissonPairService",
    "ModelService",
    "SuiteService",
]
