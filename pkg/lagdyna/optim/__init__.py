"""Weight learning: stochastic gradient steps and extended Kalman filter updates."""
