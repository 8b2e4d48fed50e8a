"""Exact computations with Whittaker modules over the Witt algebra W_n."""

__version__ = "0.1.0"
