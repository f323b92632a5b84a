"""Online estimators for the stopping-rule rates"""

from .lms import LmsFilter, lms_predict, lms_update
from .rate import (
    DegreeGrowthStats,
    RateCounter,
    degree_growth_estimate,
    rate_estimate,
    rate_record,
)

__all__ = [
    "LmsFilter",
    "lms_predict",
    "lms_update",
    "DegreeGrowthStats",
    "RateCounter",
    "degree_growth_estimate",
    "rate_estimate",
    "rate_record",
]
