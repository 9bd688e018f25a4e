"""Curvature apparatus for Hermitian metrics: jets, connections, curvature
tensors, structure classification, operator identities, positivity reports,
and a curvature flow on discretized tori."""

__version__ = "0.1.0"
