"""Relay-phase link capacities and scheduling.

Within a group of n2 destinations, every ordered pair must exchange one
quantized observation.  The pairs are organized into n2 - 1 scheduling sets
(perfect matchings of directed pairs); groups reuse the spectrum under a
4-cell activation pattern where one cell out of every 2x2 block is active at
a time.  Three capacity models are provided for a directed in-group link:

* exact-geometry SINR under the 4-cell reuse pattern (default in tdma mode),
* the pessimistic closed-form worst-case bound (kept as a diagnostic: it is
  negative for every admissible parameter choice, see
  tdma_worst_case_capacity),
* the hierarchical-cooperation per-node rate guarantee c2 * n2**(-epsilon).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .netgeom import NetworkParams, NetworkRealization

TDMA_WORST_CASE = "tdma_worst_case"
TDMA_EXACT_SINR = "tdma_exact_sinr"
HIER = "hier"

LINK_MODES = (TDMA_WORST_CASE, TDMA_EXACT_SINR, HIER)

# Partial-sum length for the zeta evaluation; with the Euler-Maclaurin tail
# below this keeps the absolute error under 1e-9 for every s > 1.
_ZETA_TERMS = 20_000


@dataclass(frozen=True)
class SchedulingSet:
    """One slot of directed relay pairs: every member transmits and receives
    exactly once."""

    index: int
    pairs: tuple[tuple[int, int], ...]


def build_scheduling_sets(n2: int) -> tuple[SchedulingSet, ...]:
    """Cyclic-shift construction of the n2 - 1 scheduling sets.

    Set s pairs transmitter i with receiver (i + s) mod n2, so across all
    sets every ordered pair of distinct members appears exactly once.
    A single-member group relays nothing and yields an empty tuple.
    """
    if n2 < 1:
        raise ValueError(f"n2 must be >= 1, got {n2}")
    return tuple(
        SchedulingSet(s, tuple((i, (i + s) % n2) for i in range(n2)))
        for s in range(1, n2)
    )


def riemann_zeta(s: float) -> float:
    """zeta(s) = sum_{i>=1} i**-s for s > 1, to absolute error < 1e-9.

    Partial sum to K terms plus the integral tail K**(1-s)/(s-1) with the
    Euler-Maclaurin endpoint and first curvature corrections; the truncation
    error is then of order s**3 * K**(-s-3).
    """
    if s <= 1.0:
        raise ValueError(f"zeta series diverges for s <= 1, got s={s}")
    k = _ZETA_TERMS
    i = np.arange(1, k + 1, dtype=float)
    partial = float(np.sum(i**-s))
    tail = k ** (1.0 - s) / (s - 1.0) - 0.5 * k**-s + (s / 12.0) * k ** (-s - 1.0)
    return partial + tail


def tdma_worst_case_capacity(d: float, n2: int, p1: float, alpha: float) -> float:
    """Closed-form worst-case link capacity with 8i interferers at ring i.

    Returns (1/n2) * log2(p1 / ((sqrt(2) d)**alpha + 2**(alpha/2+3) p1
    zeta(alpha-1))) for cell side d.  Diagnostic only: the interference term
    exceeds p1 for every alpha > 2, so the value is negative whenever it is
    finite.  The exact-geometry model below is what the rate pipeline uses.
    """
    if d <= 0:
        raise ValueError(f"cell side d must be > 0, got {d}")
    if n2 < 1:
        raise ValueError(f"n2 must be >= 1, got {n2}")
    if alpha <= 2:
        raise ValueError(f"alpha must be > 2, got {alpha}")
    if p1 < 0:
        raise ValueError(f"p1 must be >= 0, got {p1}")
    if p1 == 0.0:
        return -math.inf
    denom = (math.sqrt(2.0) * d) ** alpha + 2.0 ** (alpha / 2.0 + 3.0) * p1 * riemann_zeta(alpha - 1.0)
    return math.log2(p1 / denom) / n2


def hier_capacity(n2: int, epsilon: float, c2: float) -> float:
    """Hierarchical-cooperation per-link rate guarantee c2 * n2**(-epsilon)."""
    if n2 < 1:
        raise ValueError(f"n2 must be >= 1, got {n2}")
    return c2 * n2 ** (-epsilon)


def tdma4_active_groups(realization: NetworkRealization, k: int) -> list[int]:
    """Groups sharing group k's activation slot (k included).

    The cell grid is 4-colored by (row mod 2, col mod 2); a slot activates
    one color class, so exactly one cell per 2x2 block is ever active at a
    time.
    """
    row, col = realization.group_cells[k]
    color = (row & 1, col & 1)
    return [
        g
        for g, (r, c) in enumerate(realization.group_cells)
        if (r & 1, c & 1) == color
    ]


def exact_sinr_capacity(
    realization: NetworkRealization,
    k: int,
    pair: tuple[int, int],
    params,
    rng: np.random.Generator | None = None,
    trials: int | None = None,
    trunc_radius: float = math.inf,
) -> float:
    """Exact-geometry capacity of directed in-group link (rank i -> rank j).

    While pair (i, j) is served in group k, the rank-i member of every other
    co-active group transmits as well (clamped to the last member when a
    group is smaller), so

        SINR = p1 |h_ij|**2 / (1 + p1 * sum_l |h_l|**2).

    Unit-modulus fading leaves every received power at its deterministic
    path-loss value, so the ergodic log2(1 + SINR) equals its single-draw
    value; rng/trials are accepted for interface parity but cannot change the
    estimate.  The in-set TDMA share contributes the 1/n2 prefactor, and the
    result is >= 0 by construction.  `params` only needs `p1` and `alpha`
    attributes.  Interferers beyond trunc_radius are ignored when a finite
    radius is given.
    """
    members = realization.group_members[k]
    n2 = members.size
    i, j = pair
    if i == j or not (0 <= i < n2 and 0 <= j < n2):
        raise ValueError(
            f"pair {pair} is not served by any scheduling set of a group of size {n2}"
        )
    pos = realization.dest_pos
    rx = pos[members[j]]
    sig_dist = float(np.linalg.norm(pos[members[i]] - rx))
    if sig_dist == 0.0:
        raise ValueError("transmitter and receiver share a position")

    interference = 0.0
    for l in tdma4_active_groups(realization, k):
        if l == k:
            continue
        other = realization.group_members[l]
        tx = pos[other[min(i, other.size - 1)]]
        dist = float(np.linalg.norm(tx - rx))
        if dist == 0.0:
            raise ValueError("interferer and receiver share a position")
        if dist <= trunc_radius:
            interference += params.p1 * dist**-params.alpha

    sinr = params.p1 * sig_dist**-params.alpha / (1.0 + interference)
    return math.log2(1.0 + sinr) / n2


@dataclass(frozen=True)
class LinkCapacityModel:
    """Selects and parameterizes the in-group link-capacity computation."""

    mode: str
    p1: float
    alpha: float
    epsilon: float = 0.05
    c2: float = 1.0
    trunc_radius: float = math.inf

    def __post_init__(self) -> None:
        if self.mode not in LINK_MODES:
            raise ValueError(f"mode must be one of {LINK_MODES}, got {self.mode!r}")

    @classmethod
    def from_params(cls, params: NetworkParams) -> "LinkCapacityModel":
        mode = TDMA_EXACT_SINR if params.mode == "tdma" else HIER
        return cls(
            mode=mode,
            p1=params.p1,
            alpha=params.alpha,
            epsilon=params.epsilon,
            c2=params.c2,
        )


def link_capacity(
    model: LinkCapacityModel,
    realization: NetworkRealization,
    k: int,
    pair: tuple[int, int],
) -> float:
    """Capacity of the directed in-group link `pair` under `model`."""
    n2 = realization.n2_of(k)
    if model.mode == HIER:
        return hier_capacity(n2, model.epsilon, model.c2)
    if model.mode == TDMA_EXACT_SINR:
        return exact_sinr_capacity(
            realization, k, pair, model, trunc_radius=model.trunc_radius
        )
    return tdma_worst_case_capacity(
        1.0 / realization.grid_side, n2, model.p1, model.alpha
    )
