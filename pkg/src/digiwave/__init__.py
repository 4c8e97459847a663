"""Digital spaces and the hyperbolic (wave) equation on graphs."""

__version__ = "0.1.0"
