"""Velocity-dependent dispersion and Roentgen forces on a moving excited atom."""
