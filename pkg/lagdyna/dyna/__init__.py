"""Dyna-style model-based training loop on the pendulum."""
