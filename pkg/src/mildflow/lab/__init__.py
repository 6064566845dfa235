"""Empirical checks of the semigroup, nonlinear, decay, Hoelder and Gronwall estimates."""
