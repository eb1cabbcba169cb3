"""Distinguished principal series of GL(n) over a quadratic extension of p-adic
fields, checked on exact tame and finite-field models."""

__version__ = "0.1.0"
