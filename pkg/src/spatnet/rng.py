"""Seeded random stream for the simulation engines.

One stream per simulation run, backed by numpy's PCG64. Draws are consumed
in a fixed order (links in ascending link id, then loop iteration), so a
given seed always yields the same state sequence. The generator algorithm
is part of the reproducibility contract; changing it invalidates recorded
runs.
"""

from __future__ import annotations

import numpy as np


class RandomStream:
    def __init__(self, seed: int = 0):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))
        self.position = 0

    def uniform(self) -> float:
        """Next float in [0, 1)."""
        self.position += 1
        return float(self._gen.random())
