"""Graph computation machines and the constructions built on them."""

__version__ = "0.1.0"
