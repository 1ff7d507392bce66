"""Convertible bond valuation on a defaultable-stock binomial tree.

Everything lives in the compiled extension; this package just re-exports it.
"""

from ._core import (  # noqa: F401
    CallWindow,
    ConvertibleTerms,
    CouponPayment,
    Date,
    DefaultSpec,
    FdGrid,
    FdScheme,
    FdSolution,
    HazardModel,
    MarketState,
    ModelKind,
    PriceResult,
    PricingConfig,
    PricingError,
    ProfilePoint,
    Provisions,
    PutDate,
    RatioPeriod,
    StepParams,
    TermSheetError,
    apply_provisions,
    build_step_params,
    coupon_amounts,
    days_between,
    default_payoff,
    hazard_at,
    hull_step_params,
    load_termsheet,
    max_hazard_step,
    parse_termsheet,
    price,
    price_profile,
    provisions_at,
    rollback_step,
    solve_afv,
    solve_afv_checked,
    stock_floor,
    write_termsheet,
    year_fraction,
)

__version__ = "1.0.0"
