"""PCQA - Point Cloud Quality Assessment toolkit."""

__version__ = "0.3.2"
