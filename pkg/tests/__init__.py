"""PCQA test suite."""
