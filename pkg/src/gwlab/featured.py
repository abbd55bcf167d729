"""Bundled GW instances backing the figure presets and the docs.

Figure 1: monogamy/polygamy envelope of a four-qubit W-class state, checked
on the three-party reduction with singleton blocks.  Figure 2: the merged
two-block upper bound on a second four-qubit state with blocks
{0}, {1,2}, {3}.  Figure 3: the tightened three-qubit bound sweep.
"""

from __future__ import annotations

import math

from .states import GWSpec, build_w_qubit, reduce_to_parties
from .tensor import DensityOperator, Partition, PureState

__all__ = [
    "FIG1_AMPLITUDES",
    "FIG2_AMPLITUDES",
    "FIG3_AMPLITUDES",
    "figure1_state",
    "figure1_reduction",
    "figure2_state",
    "figure2_blocks",
    "figure3_state",
    "figure_spec",
]

#: Four amplitudes (most significant party first): the parties carry weights
#: 0.5, 0.25, 0.16 and 0.09.
FIG1_AMPLITUDES = (math.sqrt(0.5), 0.5, 0.4, 0.3)

#: Second four-qubit instance; parties 1 and 2 are grouped into one block.
FIG2_AMPLITUDES = (3 / 4, 1 / 2, math.sqrt(2) / 4, 1 / 4)

#: Three-qubit instance with pairwise concurrences 1/3 and 2/3.
FIG3_AMPLITUDES = (1 / math.sqrt(6), 1 / math.sqrt(6), 2 / math.sqrt(6))


def figure1_state() -> PureState:
    return build_w_qubit(FIG1_AMPLITUDES)


def figure1_reduction() -> tuple[DensityOperator, Partition]:
    """Three-party reduction of the figure-1 state with singleton blocks."""
    rho = reduce_to_parties(figure1_state(), {0, 1, 2})
    return rho, Partition.singletons(3)


def figure2_state() -> PureState:
    return build_w_qubit(FIG2_AMPLITUDES)


def figure2_blocks() -> tuple[frozenset, frozenset, frozenset]:
    return frozenset({0}), frozenset({1, 2}), frozenset({3})


def figure3_state() -> PureState:
    return build_w_qubit(FIG3_AMPLITUDES)


def figure_spec(fig_id: int) -> GWSpec:
    """GW spec of the state behind the given figure preset."""
    table = {1: FIG1_AMPLITUDES, 2: FIG2_AMPLITUDES, 3: FIG3_AMPLITUDES}
    if fig_id not in table:
        raise ValueError(f"unknown figure id {fig_id}")
    return GWSpec.qubit(table[fig_id])
