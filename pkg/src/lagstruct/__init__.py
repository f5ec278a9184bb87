"""Top-level package for lagstruct."""

__author__ = """lagstruct Developers"""
__version__ = "0.1.0"
