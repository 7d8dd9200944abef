"""Actor-critic agent: a squashed Gaussian policy and a state-action critic."""
