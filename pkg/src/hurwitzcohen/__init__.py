"""Exact Hurwitz class number q-series on Gamma0(4) and checks of Cohen's
generating series, with numeric checks of the mock-modular identities
behind it."""

__version__ = "0.1.0"
