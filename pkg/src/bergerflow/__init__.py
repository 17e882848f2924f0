"""Closed-form geodesics and contact magnetic trajectories on Berger 3-spheres."""

__version__ = "0.1.0"
