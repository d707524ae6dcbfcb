"""Exact tools for characteristic-dependent linear rank inequalities,
the guide matroids behind them, and the index-coding networks whose
linear capacity they bound."""

__version__ = "0.1.0"
