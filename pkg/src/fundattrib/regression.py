"""Least-squares fits for the factor, timing, benchmark and persistence models."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .data_model import AttribError

RANK_TOL = 1e-10
MIN_FACTOR_OBS = 24
FULL_SAMPLE_OBS = 60

ModelTag = str  # ff3 | tm | bench_simple | bench_ff | excess_ff | persistence | ols


@dataclass(frozen=True, eq=False)
class RegressionFit:
    model_tag: ModelTag
    coef: dict[str, float]
    stderr: dict[str, float]
    residual_variance: float
    n_obs: int
    df_resid: int
    residuals: np.ndarray = field(repr=False)

    @property
    def short_sample(self) -> bool:
        """True when the fit used fewer observations than a five-year monthly sample."""
        return self.n_obs < FULL_SAMPLE_OBS

    def tstat(self, name: str) -> float:
        se = self.stderr[name]
        return self.coef[name] / se if se > 0 else float("inf") * np.sign(self.coef[name])


def ols_fit(design, response, names: Sequence[str] | None = None, model_tag: ModelTag = "ols",
            min_obs: int | None = None) -> RegressionFit:
    """Ordinary least squares through an SVD of the design.

    ``design`` must already contain the intercept column. Standard errors
    are the homoskedastic ones, ``sqrt(diag(s2 * inv(X'X)))`` with
    ``s2 = RSS / (n - k)``.

    Raises ``TOO_FEW_OBS`` unless ``n > k`` (and ``n >= min_obs`` when
    given), and ``RANK_DEFICIENT`` when the smallest singular value is at
    most 1e-10 of the largest.
    """
    X = np.asarray(design, dtype=float)
    y = np.asarray(response, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    n, k = X.shape
    if y.shape != (n,):
        raise AttribError("ALIGNMENT_GAP", f"response length {y.shape} vs design rows {n}")
    if not (np.isfinite(X).all() and np.isfinite(y).all()):
        raise AttribError("NONFINITE", "design or response has missing values")
    if n <= k or (min_obs is not None and n < min_obs):
        need = max(k + 1, min_obs or 0)
        raise AttribError("TOO_FEW_OBS", f"{n} observations, need at least {need}")
    names = list(names) if names is not None else ["alpha"] + [f"x{j}" for j in range(1, k)]
    if len(names) != k:
        raise ValueError(f"{len(names)} names for {k} columns")

    U, s, Vt = np.linalg.svd(X, full_matrices=False)
    if s[-1] <= RANK_TOL * s[0]:
        raise AttribError("RANK_DEFICIENT", f"condition {s[0] / max(s[-1], 1e-300):.3g}")
    beta = Vt.T @ ((U.T @ y) / s)
    resid = y - X @ beta
    df = n - k
    s2 = float(resid @ resid) / df
    cov_diag = ((Vt.T / s) ** 2).sum(axis=1)
    se = np.sqrt(s2 * cov_diag)
    resid.setflags(write=False)
    return RegressionFit(
        model_tag=model_tag,
        coef={nm: float(b) for nm, b in zip(names, beta)},
        stderr={nm: float(e) for nm, e in zip(names, se)},
        residual_variance=s2,
        n_obs=n,
        df_resid=df,
        residuals=resid,
    )


def align(*series, allow_gaps: bool = False) -> list[np.ndarray]:
    """Restrict equal-length, grid-aligned series to rows where all are present.

    Series are 1-D or 2-D (rows = periods) arrays with NaN for missing. The
    kept rows must be contiguous on the grid unless ``allow_gaps``.
    """
    arrays = [np.asarray(s, dtype=float) for s in series]
    n = len(arrays[0])
    if any(len(a) != n for a in arrays):
        raise AttribError("ALIGNMENT_GAP", f"series lengths differ: {[len(a) for a in arrays]}")
    ok = np.ones(n, dtype=bool)
    for a in arrays:
        ok &= ~np.isnan(a).reshape(n, -1).any(axis=1)
    idx = np.flatnonzero(ok)
    if not allow_gaps and idx.size and idx[-1] - idx[0] + 1 != idx.size:
        raise AttribError("ALIGNMENT_GAP", "interior gap in the shared observation dates")
    return [a[ok] for a in arrays]


def _factor_block(factors) -> np.ndarray:
    f = np.asarray(factors, dtype=float)
    if f.ndim != 2 or f.shape[1] < 3:
        raise ValueError("factors must have columns market_excess, smb, hml[, risk_free]")
    return f[:, :3]


def _design(*cols) -> np.ndarray:
    return np.column_stack([np.ones(len(cols[0]))] + list(cols))


def fit_fama_french(fund_excess, factors, allow_gaps: bool = False) -> RegressionFit:
    """Three-factor regression of fund excess return; ``alpha`` is selection ability."""
    y, f = align(fund_excess, _factor_block(factors), allow_gaps=allow_gaps)
    return ols_fit(_design(f[:, 0], f[:, 1], f[:, 2]), y,
                   ["alpha", "beta_m", "beta_smb", "beta_hml"], "ff3", MIN_FACTOR_OBS)


def fit_treynor_mazuy(fund_excess, market_excess, allow_gaps: bool = False) -> RegressionFit:
    """Quadratic market-timing regression; ``gamma`` is timing ability."""
    y, m = align(fund_excess, market_excess, allow_gaps=allow_gaps)
    return ols_fit(_design(m, m * m), y, ["alpha", "beta_m", "gamma"], "tm", MIN_FACTOR_OBS)


def fit_benchmark_simple(fund_return, benchmark_return, allow_gaps: bool = False) -> RegressionFit:
    y, d = align(fund_return, benchmark_return, allow_gaps=allow_gaps)
    return ols_fit(_design(d), y, ["alpha", "beta_d"], "bench_simple", MIN_FACTOR_OBS)


def fit_benchmark_ff(fund_return, benchmark_return, factors, allow_gaps: bool = False) -> RegressionFit:
    y, d, f = align(fund_return, benchmark_return, _factor_block(factors), allow_gaps=allow_gaps)
    return ols_fit(_design(d, f[:, 1], f[:, 2]), y,
                   ["alpha", "beta_d", "beta_smb", "beta_hml"], "bench_ff", MIN_FACTOR_OBS)


def fit_excess_ff(fund_return, benchmark_return, market_return, factors,
                  allow_gaps: bool = False) -> RegressionFit:
    """Regress fund-minus-benchmark return on the total market return, SMB and HML."""
    y, d, m, f = align(fund_return, benchmark_return, market_return, _factor_block(factors),
                       allow_gaps=allow_gaps)
    return ols_fit(_design(m, f[:, 1], f[:, 2]), y - d,
                   ["alpha", "beta_m", "beta_smb", "beta_hml"], "excess_ff", MIN_FACTOR_OBS)


def fit_persistence(measure_series: Sequence[float]) -> RegressionFit:
    """AR(1) regression of each report's measure on the previous report's."""
    x = np.asarray(measure_series, dtype=float)
    if x.ndim != 1 or len(x) < 4:
        raise AttribError("TOO_FEW_OBS", f"persistence needs 4 values, got {len(x)}")
    return ols_fit(_design(x[:-1]), x[1:], ["alpha", "beta_1"], "persistence")


class TrackingStats(NamedTuple):
    mean_diff: float
    sd_diff: float
    median_rel_diff: float
    n_obs: int
    n_zero_benchmark: int


def tracking_stats(fund_return, benchmark_return, allow_gaps: bool = False) -> TrackingStats:
    """Mean and sample sd of ``r - r_d`` and median of ``(r - r_d) / r_d``.

    Periods with a zero benchmark return are left out of the relative median
    and counted in ``n_zero_benchmark``.
    """
    r, d = align(fund_return, benchmark_return, allow_gaps=allow_gaps)
    if len(r) < 2:
        raise AttribError("TOO_FEW_OBS", "tracking statistics need two periods")
    diff = r - d
    nz = d != 0
    rel = diff[nz] / d[nz]
    median = float(np.median(rel)) if rel.size else float("nan")
    return TrackingStats(float(diff.mean()), float(diff.std(ddof=1)), median,
                         len(r), int((~nz).sum()))
