"""Diagnostics: entropy budgets, Knudsen ordering, rotating equilibrium,
mechanical checks, dispersion and manufactured solutions."""
