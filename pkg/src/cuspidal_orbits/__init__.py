"""Exact finite-level calculus for cuspidal-type orbits on GL_n over local rings."""
