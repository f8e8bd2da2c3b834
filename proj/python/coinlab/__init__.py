"""Coin billiard maps on convex tables."""

from ._coinlab import CoinSystem, DomainError, NumericError

__all__ = ["CoinSystem", "DomainError", "NumericError"]
