"""Asymptotic sparsity fractions known for zero-one measurement matrices.

These hold as n grows without bound and can't be observed on desk-scale
matrices; they are kept for reference only. Each value is the largest
fraction alpha = k/n covered, with the matrix family it applies to.
"""

# every k-sparse vector, expander-based, m/n = 1/2 and column weight 32
ALPHA_EXPANDER_STRONG = 0.000175
EXPANDER_COLUMN_WEIGHT = 32
EXPANDER_RATE = 0.5

# randomly supported k-sparse vectors, column weight 8
ALPHA_RANDOM_SUPPORT_DV8 = 0.002

# randomly supported k-sparse vectors, (3, 6)-regular matrices
ALPHA_RANDOM_SUPPORT_36 = 0.05

ASYMPTOTIC_THRESHOLDS = {
    "expander_strong_dv32_rate_half": ALPHA_EXPANDER_STRONG,
    "random_support_dv8": ALPHA_RANDOM_SUPPORT_DV8,
    "random_support_regular_3_6": ALPHA_RANDOM_SUPPORT_36,
}
