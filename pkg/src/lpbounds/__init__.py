"""Exact rational LP bounds for communication and query complexity.

Library surface:

- :mod:`lpbounds.model` -- Boolean functions, product measures, rectangles,
  subcubes, exact measure computations.
- :mod:`lpbounds.lp` -- exact rational simplex with dual certificates.
- :mod:`lpbounds.ccbounds` -- smooth rectangle / partition / relaxed
  partition bounds and partition-bound error reduction.
- :mod:`lpbounds.ccsynth` -- communication protocol trees built from
  distributional LP solutions, with tree balancing.
- :mod:`lpbounds.qcbounds` -- query partition bound, majority boosting,
  feasible-system extraction.
- :mod:`lpbounds.qcsynth` -- decision trees built from feasible systems.
- :mod:`lpbounds.oracle` -- brute-force optimal protocol / decision trees
  at small scale, for validating synthesized artifacts.
- :mod:`lpbounds.cli` -- command-line front end.
"""

from .model import (
    BitProductDistribution,
    ProductDistribution2P,
    QueryFunction,
    Rectangle,
    Subcube,
    TwoPartyFunction,
    bit_measure,
    enumerate_rectangles,
    enumerate_subcubes,
    measure,
)

__all__ = [
    "BitProductDistribution",
    "ProductDistribution2P",
    "QueryFunction",
    "Rectangle",
    "Subcube",
    "TwoPartyFunction",
    "bit_measure",
    "enumerate_rectangles",
    "enumerate_subcubes",
    "measure",
]

__version__ = "0.1.0"
