"""Explicit two-stage Runge-Kutta integration of second-order dynamics."""
