"""
Brinson attribution on a two-industry toy portfolio
===================================================

Build an industry breakdown by hand, split the excess return into
selection, allocation and interaction, then add the stock/bond mix effect.
"""
import numpy as np

from fundattrib import IndustryBreakdown, decompose
from fundattrib.brinson import industry_allocation, interaction_term, within_industry_selection

# Two industries. The fund overweights tech and picks better tech stocks;
# its energy picks lag the benchmark's.
b = IndustryBreakdown(
    industries=("energy", "tech"),
    w_f=np.array([0.3, 0.7]),      # fund weights
    r_f=np.array([0.01, 0.12]),    # fund industry returns over the window
    w_b=np.array([0.5, 0.5]),      # benchmark weights
    r_b=np.array([0.03, 0.08]),    # benchmark industry returns
)

ss = within_industry_selection(b)   # picking within industries, benchmark weights
ia = industry_allocation(b)         # over/underweighting industries, benchmark returns
it = interaction_term(b)            # both at once
print(f"SS {ss:+.4f}  IA {ia:+.4f}  IT {it:+.4f}")

# The three parts always add up to the stock-sleeve excess return
_, _, _, excess = decompose(b)
print(f"sum {ss + ia + it:+.4f}  excess {excess:+.4f}  fund {b.fund_return:.4f}  bench {b.benchmark_return:.4f}")

# Asset allocation: a 10-point tilt from bonds into stocks in a quarter when
# stocks returned 10% and bonds 1%
r_s, r_b = 0.10, 0.01
aa = r_s * (0.9 - 0.8) + r_b * (0.05 - 0.15)
print(f"AA {aa:+.4f}")
