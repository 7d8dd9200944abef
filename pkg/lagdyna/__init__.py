# -*- coding: utf-8 -*-
"""lagdyna: Lagrangian neural network models inside a Dyna reinforcement learning loop."""

__version__ = '0.1.0'
