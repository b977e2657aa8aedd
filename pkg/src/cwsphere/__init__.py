"""Numerical toolkit for octonions, Spin(8) triality, spin(7) < spin(8) < spin(9),
homogeneous sphere models and Killing fields of constant length."""

__version__ = "0.1.0"
