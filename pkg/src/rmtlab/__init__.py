"""Random-matrix laboratory: ensembles, spectral measures, exact transport
distances, determinantal counting statistics and rate experiments."""

__version__ = "0.1.0"
