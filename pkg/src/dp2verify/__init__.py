"""Machine checks for a pointless degree 2 del Pezzo surface over Q(sqrt -7)."""

__version__ = "0.1.0"
