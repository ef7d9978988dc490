"""Hierarchical spatiotemporal oriented-energy features for video volumes."""

try:
    from ._soenet import bhattacharyya, extract, generate, plan
except ImportError:  # running against a module built outside the package
    from _soenet import bhattacharyya, extract, generate, plan

__all__ = ["bhattacharyya", "extract", "generate", "plan"]
