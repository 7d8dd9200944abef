"""Experiment configuration, seeded runs, comparison of variants and the invariant suite."""
