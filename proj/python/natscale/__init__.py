"""Natural scales for tail analysis."""

from ._core import (
    Model,
    NatscaleError,
    Scale,
    __version__,
    check_concave,
    check_subadditive_product,
    check_subadditive_sum,
    determinacy_test,
    exponential_index,
    h_order,
    mgf_sup_order,
    moment_index,
    natural_scale_fit,
    simulate,
    verify_transform_bound,
)

__all__ = [
    "Model",
    "NatscaleError",
    "Scale",
    "__version__",
    "check_concave",
    "check_subadditive_product",
    "check_subadditive_sum",
    "determinacy_test",
    "exponential_index",
    "h_order",
    "mgf_sup_order",
    "moment_index",
    "natural_scale_fit",
    "simulate",
    "verify_transform_bound",
]
