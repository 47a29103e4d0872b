"""Auslander-Reiten quivers of bounded derived categories of bound quiver algebras over F_p."""

__version__ = "0.1.0"
