"""The ground-truth pendulum swing-up environment."""
