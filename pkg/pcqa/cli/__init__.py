"""Command-line interface for PCQA."""
