"""Far-field fast-fading channels.

Magnitudes are deterministic path losses ||r_tx - r_rx||**(-alpha/2); fading
enters only through i.i.d. phases, uniform on [0, 2*pi) and redrawn on every
sample.  A source-to-group channel is kept in the factored form
diag(path ratios) @ (unit-modulus phase matrix), which is what the rate
computation consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .netgeom import NetworkParams, NetworkRealization


def phase_matrix(rng: np.random.Generator, *shape: int) -> np.ndarray:
    """Complex array of the given shape with unit-modulus i.i.d. phases."""
    return np.exp(2j * np.pi * rng.random(shape))


@dataclass
class GroupChannel:
    """Source-to-group channel split into path-loss and phase factors.

    gamma[i] = (d_far / d_i)**(alpha/2) relative to the group's farthest
    member (so gamma[-1] == 1 and every entry >= 1); theta is the (n2, m)
    unit-modulus phase matrix; path_gain[i] = d_i**(-alpha/2).  The physical
    channel row of member i is path_gain[i] * theta[i].
    """

    group_index: int
    gamma: np.ndarray
    theta: np.ndarray
    path_gain: np.ndarray

    def rows(self) -> np.ndarray:
        """Full (n2, m) channel matrix including path loss."""
        return self.path_gain[:, None] * self.theta


@dataclass
class ScalarChannel:
    """Single destination-to-destination channel coefficient."""

    value: complex

    @property
    def magnitude(self) -> float:
        return abs(self.value)


def sample_group_channel(
    realization: NetworkRealization,
    k: int,
    params: NetworkParams,
    rng: np.random.Generator,
) -> GroupChannel:
    """Fresh fast-fading draw of the source-to-group-k channel."""
    d = realization.group_distances(k)
    if d.size == 0:
        raise ValueError(f"group {k} is empty")
    half = params.alpha / 2.0
    return GroupChannel(
        group_index=k,
        gamma=(d[-1] / d) ** half,
        theta=phase_matrix(rng, d.size, params.m),
        path_gain=d**-half,
    )


def sample_pair_channel(
    realization: NetworkRealization,
    tx_index: int,
    rx_index: int,
    params: NetworkParams,
    rng: np.random.Generator,
) -> ScalarChannel:
    """Fresh fast-fading draw of the channel between two destinations."""
    if tx_index == rx_index:
        raise ValueError("tx_index and rx_index must differ")
    dist = float(
        np.linalg.norm(realization.dest_pos[tx_index] - realization.dest_pos[rx_index])
    )
    if dist == 0.0:
        raise ValueError(
            f"destinations {tx_index} and {rx_index} share a position; "
            "the path loss is singular"
        )
    phase = np.exp(2j * np.pi * rng.random())
    return ScalarChannel(value=dist ** (-params.alpha / 2.0) * phase)
