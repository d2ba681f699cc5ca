"""Exact structure-constant toolkit for n-Lie algebras and n-Lie bialgebras."""

__version__ = "0.1.0"
