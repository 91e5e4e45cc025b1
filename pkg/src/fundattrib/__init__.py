"""Holdings-based fund performance attribution.

Modules, bottom up: ``data_model`` (types and validation), ``ingestion``
(CSV files, return windows), ``brinson`` (SS/IA/IT/AA and the holdings
validity check), ``regression`` (factor, timing, benchmark and persistence
fits), ``inference`` (t tests, correlations, summaries), ``synthetic``
(seeded universes with known skills), ``pipeline`` and ``cli`` (batch
commands).
"""
from .brinson import (
    AssetAllocationRecord,
    AttributionRecord,
    IndustryBreakdown,
    ValidityDiff,
    accumulate_geometric,
    asset_allocation,
    attribute,
    build_breakdown,
    decompose,
    holding_validity_diff,
    industry_allocation,
    interaction_term,
    within_industry_selection,
)
from .data_model import (
    AssetWeights,
    AttribError,
    BenchmarkDefinition,
    HoldingsSnapshot,
    Issue,
    MarketPanel,
    ValidationReport,
    normalize_stock_sleeve,
    validate_snapshot,
)
from .inference import (
    BoxStats,
    CorrelationResult,
    SummaryRow,
    TestResult,
    box_stats,
    coef_test,
    correlation_from_r,
    cross_section_summary,
    mean_positive_test,
    pearson_test,
    significance_stars,
    t_cdf,
    t_sf,
)
from .ingestion import (
    WindowReturns,
    WindowSpec,
    parse_benchmark_csv,
    parse_fund_map,
    parse_holdings_csv,
    parse_market_panel,
    resolve_window,
    write_market_panel,
)
from .regression import (
    RegressionFit,
    fit_benchmark_ff,
    fit_benchmark_simple,
    fit_excess_ff,
    fit_fama_french,
    fit_persistence,
    fit_treynor_mazuy,
    ols_fit,
)
from .synthetic import FundSkill, SyntheticUniverse, UniverseConfig, generate_universe, inject_trading_gap

__version__ = "0.1.0"

__all__ = [
    "AssetAllocationRecord",
    "AssetWeights",
    "AttribError",
    "AttributionRecord",
    "BenchmarkDefinition",
    "BoxStats",
    "CorrelationResult",
    "FundSkill",
    "HoldingsSnapshot",
    "IndustryBreakdown",
    "Issue",
    "MarketPanel",
    "RegressionFit",
    "SummaryRow",
    "SyntheticUniverse",
    "TestResult",
    "UniverseConfig",
    "ValidationReport",
    "ValidityDiff",
    "WindowReturns",
    "WindowSpec",
    "accumulate_geometric",
    "asset_allocation",
    "attribute",
    "box_stats",
    "build_breakdown",
    "coef_test",
    "correlation_from_r",
    "cross_section_summary",
    "decompose",
    "fit_benchmark_ff",
    "fit_benchmark_simple",
    "fit_excess_ff",
    "fit_fama_french",
    "fit_persistence",
    "fit_treynor_mazuy",
    "generate_universe",
    "holding_validity_diff",
    "industry_allocation",
    "inject_trading_gap",
    "interaction_term",
    "mean_positive_test",
    "normalize_stock_sleeve",
    "ols_fit",
    "parse_benchmark_csv",
    "parse_fund_map",
    "parse_holdings_csv",
    "parse_market_panel",
    "pearson_test",
    "resolve_window",
    "significance_stars",
    "t_cdf",
    "t_sf",
    "validate_snapshot",
    "within_industry_selection",
    "write_market_panel",
]

