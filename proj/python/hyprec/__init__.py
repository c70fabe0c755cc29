"""Hyperbolic recommender core: hyperboloid geometry, ranking losses,
Riemannian SGD, power-law statistics, and a one-call train/evaluate pipeline.

The heavy lifting lives in the compiled extension ``_hyprec``; this package
re-exports its functions under a stable name.
"""

from _hyprec import (  # noqa: F401
    bpr_loss,
    dissimilarity,
    distance,
    distance_gradient,
    einstein_midpoint,
    exp_map,
    fit_power_law,
    frechet_mean,
    from_klein,
    from_poincare,
    hit_rate_at_k,
    hurwitz_zeta,
    log_map,
    ndcg_at_k,
    power_law_p_value,
    rank_of_positive,
    rsgd_step,
    sample_power_law,
    to_klein,
    to_poincare,
    train_and_evaluate,
    wmrb_rank,
)

__all__ = [
    "bpr_loss",
    "dissimilarity",
    "distance",
    "distance_gradient",
    "einstein_midpoint",
    "exp_map",
    "fit_power_law",
    "frechet_mean",
    "from_klein",
    "from_poincare",
    "hit_rate_at_k",
    "hurwitz_zeta",
    "log_map",
    "ndcg_at_k",
    "power_law_p_value",
    "rank_of_positive",
    "rsgd_step",
    "sample_power_law",
    "to_klein",
    "to_poincare",
    "train_and_evaluate",
    "wmrb_rank",
]

__version__ = "0.1.0"
