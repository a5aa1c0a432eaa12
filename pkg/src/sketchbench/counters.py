"""Single-cell counter semantics: linear cells and logarithmic (Morris-style) cells.

A logarithmic cell at level c stands for roughly (b^c - 1) / (b - 1) observed
events.  It advances from c to c+1 with probability b^(-c), which makes the
decoded value an unbiased estimate of the number of increment attempts.
Linear cells are ordinary saturating integer counters; all three operations
degenerate to (always-true, identity, identity) in that mode.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class Mode(enum.IntEnum):
    LINEAR = 0
    LOGARITHMIC = 1


_SUPPORTED_CELL_BITS = (8, 16, 32)


@dataclass(frozen=True)
class CounterSemantics:
    """How a cell value maps to a count estimate.

    ``base`` is the growth factor b of the logarithmic counter and must be
    strictly greater than 1 in logarithmic mode; it is ignored in linear
    mode.  ``cell_bits`` fixes the saturation ceiling at 2^cell_bits - 1.
    """

    mode: Mode
    base: float = 0.0
    cell_bits: int = 32
    # ln(base), precomputed once; 0.0 in linear mode.
    ln_base: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.cell_bits not in _SUPPORTED_CELL_BITS:
            raise ValueError(
                f"cell_bits must be one of {_SUPPORTED_CELL_BITS}, got {self.cell_bits}"
            )
        if self.mode == Mode.LOGARITHMIC and not self.base > 1.0:
            raise ValueError(f"base must be > 1 in logarithmic mode, got {self.base}")
        ln_b = math.log(self.base) if self.mode == Mode.LOGARITHMIC else 0.0
        object.__setattr__(self, "ln_base", ln_b)

    @property
    def max_cell(self) -> int:
        return (1 << self.cell_bits) - 1


def increase_decision(c: int, sem: CounterSemantics, rng) -> bool:
    """Decide whether a cell at level c advances to c+1.

    Linear mode always advances and consumes no randomness.  Logarithmic
    mode consumes exactly one uniform draw and advances iff it falls below
    b^(-c).  A saturated cell (c = max_cell) never advances in either mode,
    and consumes no draw: there is no decision left to make.
    """
    if c >= sem.max_cell:
        return False
    if sem.mode == Mode.LINEAR:
        return True
    return rng.next_float() < sem.base ** (-c)


def point_value(c: int, sem: CounterSemantics) -> float:
    """Count mass contributed by the step from level c-1 to c.

    Logarithmic: 0 for c = 0, else b^(c-1) evaluated as exp((c-1) * ln b).
    Linear: the identity.
    """
    if sem.mode == Mode.LINEAR:
        return float(c)
    if c == 0:
        return 0.0
    return math.exp((c - 1) * sem.ln_base)


def cell_value(c: int, sem: CounterSemantics) -> float:
    """Decode a cell level into an estimated count.

    Logarithmic cells decode to the geometric series sum of the point
    values, (b^c - 1) / (b - 1), so that cell_value(c) equals
    sum(point_value(i) for i in 1..c).  Linear cells decode to c.
    """
    if sem.mode == Mode.LINEAR:
        return float(c)
    if c <= 1:
        return point_value(c, sem)
    return (sem.base**c - 1.0) / (sem.base - 1.0)
