"""Multiplicative-order statistics, character sums and explicit constants
around averages of l_a(p)/(p-1) and lambda-primitive roots."""

__version__ = "0.1.0"

from .errors import CapacityError, DomainError  # noqa: E402

__all__ = ["CapacityError", "DomainError", "__version__"]
