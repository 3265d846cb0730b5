"""Scenario configuration, the built-in library, file output and the CLI."""
