"""Monte Carlo experiments on the topology of random real algebraic curves."""

__version__ = "0.1.0"
