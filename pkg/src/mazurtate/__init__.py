"""Exact Mazur-Tate elements for weight-2 eigenforms: construction from
modular symbols, finite-level Iwasawa invariants, ramified transition
formulas, and a complex-analytic interpolation oracle."""

__version__ = "0.1.0"
