"""Nested positive quadrature and sparse cubature by Caratheodory reduction."""
