"""Observability toolkit for state-space models."""

try:
    from obskit._obskit import (
        bilinear_discretize,
        certify_permutation,
        conv_kernel,
        eig_jacobian,
        lipschitz_lower_bound,
        loss_permutation,
        loss_thm3,
        loss_thm4,
        loss_thm5,
        nearest_permutation,
        obs_matrix,
        obs_report,
        zoh_discretize,
        __version__,
    )
except ImportError:
    from _obskit import (
        bilinear_discretize,
        certify_permutation,
        conv_kernel,
        eig_jacobian,
        lipschitz_lower_bound,
        loss_permutation,
        loss_thm3,
        loss_thm4,
        loss_thm5,
        nearest_permutation,
        obs_matrix,
        obs_report,
        zoh_discretize,
        __version__,
    )

__all__ = [
    "bilinear_discretize",
    "certify_permutation",
    "conv_kernel",
    "eig_jacobian",
    "lipschitz_lower_bound",
    "loss_permutation",
    "loss_thm3",
    "loss_thm4",
    "loss_thm5",
    "nearest_permutation",
    "obs_matrix",
    "obs_report",
    "zoh_discretize",
    "__version__",
]
