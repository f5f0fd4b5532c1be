"""Recursive moment reconstruction from time-resolved position densities.

Given the probability density sampled at ``m + 1`` uniform times, each higher
momentum moment follows from the ones below it:

    f_{n+1} = -mass * d/dt CumInt(f_n)
              - mass * sum_k (-1)^k (hbar/2)^(2k) C(n, 2k+1)
                       CumInt(d^(2k+1)V/dx^(2k+1) * f_{n-2k-1})

where ``CumInt`` is the running integral from the left grid edge and the time
derivative is the uniform-node collocation derivative.  Producing order ``N``
therefore consumes ``N + 1`` time samples; requesting more is rejected.

Every moment is computed at all nodes so that repeated application of the
same differentiation matrix realizes the nested time derivatives; the central
node, where differentiation is most accurate, is the reported slice.  All
arithmetic is real: the even powers of (hbar / 2i) are the real numbers
(-1)^k (hbar/2)^(2k).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .numerics import (
    GridField,
    PhysicalConstants,
    SpatialGrid,
    TimeNodes,
    cumulative_integral,
    differentiation_matrix,
    smooth_local_poly,
)
from .potentials import PotentialModel, potential_derivative

__all__ = [
    "InsufficientTimeSamplesError",
    "MomentField",
    "MomentPyramid",
    "next_moment",
    "build_pyramid",
    "reconstruct_current",
]


class InsufficientTimeSamplesError(ValueError):
    """Raised when an order-N reconstruction has fewer than N+1 time samples."""


@dataclass(frozen=True)
class MomentField:
    """A single moment f_n(x) at one time node."""

    order: int
    time_node: int
    time: float
    field: GridField

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("moment order must be >= 0")


@dataclass(frozen=True)
class MomentPyramid:
    """All moments up to order N at all time nodes.

    ``levels[n]`` is an ``(m+1, n_points)`` array of f_n at every node.  Order
    0 is the (possibly smoothed) input density; each higher level derives only
    from the levels below it.
    """

    grid: SpatialGrid
    nodes: TimeNodes
    levels: tuple = field(repr=False)

    @property
    def order_max(self) -> int:
        return len(self.levels) - 1

    @property
    def central_time(self) -> float:
        return self.nodes.central_time

    def moment(self, order: int, node: int | None = None) -> MomentField:
        """f_n at one node (central by default)."""
        if node is None:
            node = self.nodes.central_index
        values = self.levels[order][node]
        return MomentField(
            order=order,
            time_node=node,
            time=float(self.nodes.t_0 + node * self.nodes.dt),
            field=GridField(self.grid, values),
        )

    def central_slice(self) -> list[MomentField]:
        """All orders at the central node."""
        return [self.moment(n) for n in range(self.order_max + 1)]


def _as_record_matrix(f0_records, grid: SpatialGrid, nodes: TimeNodes) -> np.ndarray:
    records = [np.asarray(getattr(r, "values", r), dtype=float) for r in f0_records]
    if len(records) != nodes.m_plus_1:
        raise ValueError(
            f"got {len(records)} density records for {nodes.m_plus_1} time nodes"
        )
    for r in records:
        if r.shape != (grid.n_points,):
            raise ValueError("all density records must share the spatial grid")
    return np.stack(records)


def _force_orders(n: int) -> list[int]:
    """Odd potential-derivative orders entering the step from level n."""
    return [2 * k + 1 for k in range((n - 1) // 2 + 1)] if n >= 1 else []


def _next_level(
    levels: list[np.ndarray],
    grid: SpatialGrid,
    nodes: TimeNodes,
    diff: np.ndarray,
    model: PotentialModel,
    constants: PhysicalConstants,
) -> np.ndarray:
    """f_{n+1} at all nodes from levels 0..n."""
    n = len(levels) - 1
    mass, hbar = constants.mass, constants.hbar
    cumulative = np.stack(
        [cumulative_integral(GridField(grid, row)).values for row in levels[n]]
    )
    out = -mass * (diff @ cumulative)
    x = grid.points
    times = nodes.points
    for k in range((n - 1) // 2 + 1) if n >= 1 else []:
        coef = mass * (-1.0) ** k * (hbar / 2.0) ** (2 * k) * comb(n, 2 * k + 1)
        lower = levels[n - 2 * k - 1]
        for j in range(nodes.m_plus_1):
            dv = potential_derivative(model, 2 * k + 1, x, float(times[j]))
            term = cumulative_integral(GridField(grid, dv * lower[j])).values
            out[j] -= coef * term
    return out


def build_pyramid(
    f0_records,
    grid: SpatialGrid,
    nodes: TimeNodes,
    model: PotentialModel,
    constants: PhysicalConstants,
    order_max: int,
    smoothing: tuple[int, int] | None = None,
) -> MomentPyramid:
    """Reconstruct all moments up to ``order_max`` from density records.

    Parameters
    ----------
    f0_records : sequence of GridField or arrays
        Probability density at each of the ``m + 1`` time nodes.
    grid, nodes : SpatialGrid, TimeNodes
        Shared sampling lattices of the records.
    model : PotentialModel
        Potential generating the dynamics.
    constants : PhysicalConstants
        hbar and mass.
    order_max : int
        Highest moment order N; requires ``N <= m``.
    smoothing : (window, degree), optional
        Local-polynomial smoothing applied to the input densities only,
        before the recursion.  Off by default.

    Returns
    -------
    MomentPyramid
    """
    m = nodes.m
    if order_max < 0:
        raise ValueError("order_max must be >= 0")
    if order_max > m:
        raise InsufficientTimeSamplesError(
            f"order {order_max} needs at least {order_max + 1} time samples "
            f"(an order-n moment requires the density at n+1 times); got {m + 1}"
        )
    base = _as_record_matrix(f0_records, grid, nodes)
    if smoothing is not None:
        window, degree = smoothing
        base = np.stack(
            [smooth_local_poly(GridField(grid, row), window, degree).values for row in base]
        )
    levels = [base]
    if order_max >= 1:
        if m > 12:
            warnings.warn(
                "more than 13 uniform nodes: high-order collocation derivatives "
                "amplify noise; prefer a short window with fewer samples",
                UserWarning,
                stacklevel=2,
            )
        diff = differentiation_matrix(nodes)
        for _ in range(order_max):
            levels.append(_next_level(levels, grid, nodes, diff, model, constants))
    return MomentPyramid(grid=grid, nodes=nodes, levels=tuple(levels))


def next_moment(
    pyramid: MomentPyramid,
    model: PotentialModel,
    constants: PhysicalConstants,
    node: int | None = None,
) -> MomentField:
    """One more moment order from an existing pyramid, at one node.

    Evaluates the recursion step from the pyramid's top level; the pyramid
    itself is immutable and unchanged.
    """
    n = pyramid.order_max
    nodes = pyramid.nodes
    if n + 1 > nodes.m:
        raise InsufficientTimeSamplesError(
            f"order {n + 1} needs at least {n + 2} time samples; got {nodes.m_plus_1}"
        )
    if node is None:
        node = nodes.central_index
    diff = differentiation_matrix(nodes)
    level = _next_level(list(pyramid.levels), pyramid.grid, nodes, diff, model, constants)
    return MomentField(
        order=n + 1,
        time_node=node,
        time=float(nodes.t_0 + node * nodes.dt),
        field=GridField(pyramid.grid, level[node]),
    )


def reconstruct_current(
    f0_records,
    grid: SpatialGrid,
    nodes: TimeNodes,
    constants: PhysicalConstants,
    node: int | None = None,
) -> MomentField:
    """Probability-current moment f_1 from densities alone.

    The order-0 recursion step is potential-independent: f_1 is ``-mass``
    times the time derivative of the cumulative position probability.
    """
    from .potentials import free_potential

    pyramid = build_pyramid(f0_records, grid, nodes, free_potential(), constants, order_max=0)
    return next_moment(pyramid, free_potential(), constants, node=node)
