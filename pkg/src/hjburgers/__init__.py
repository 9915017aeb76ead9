"""Exact caustic, level-surface, Maxwell-set and turbulence analysis for the
inviscid stochastic Burgers equation with polynomial initial data."""

__version__ = "0.1.0"
