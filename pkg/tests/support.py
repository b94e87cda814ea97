"""Shared record/graph samplers for the test suite."""

import numpy as np

from stabpurity import (
    GraphSpec,
    MeasurementRecord,
    closed_form_is_optimal,
    walsh_hadamard_inplace,
)


def random_graph(rng, n: int) -> GraphSpec:
    """Uniformly random simple graph on n labeled vertices."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5]
    return GraphSpec.from_edges(n, edges)


def feasible_record(rng, n: int) -> MeasurementRecord:
    """Record with a in [0, 1]^n and sum(a) >= n - 2 (the hard feasibility gate).

    Draws deficits 1 - a_k and rescales them into a random budget <= 2, which
    covers the whole feasible band including records where the closed form is
    only an upper bound.
    """
    deficits = rng.uniform(0.0, 1.0, size=n)
    budget = 2.0 * rng.uniform(0.0, 1.0)
    total = deficits.sum()
    if total > budget:
        deficits *= budget / total
    return MeasurementRecord(n, 1.0 - deficits)


def optimal_record(rng, n: int) -> MeasurementRecord:
    """Record inside the closed form's optimality domain.

    All a_k >= n/(n+2) forces sum(a) + (two smallest) >= n, the multiplier
    nonnegativity condition, so the closed form equals the true minimum.
    """
    floor = max(0.7, n / (n + 2))
    return MeasurementRecord(n, rng.uniform(floor, 1.0, size=n))


def suboptimal_record(rng, n: int) -> MeasurementRecord:
    """Feasible record violating the multiplier condition (n >= 2)."""
    assert n >= 2
    while True:
        record = feasible_record(rng, n)
        if not closed_form_is_optimal(record):
            return record


def random_density_matrix(rng, dim: int) -> np.ndarray:
    """Haar-ish random full-rank density matrix."""
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho)


def random_physical_coeffs(rng, n: int) -> np.ndarray:
    """Coefficient vector of a random stabilizer-diagonal state (physical by construction)."""
    lam = rng.dirichlet(np.ones(1 << n))
    c = lam.copy()
    walsh_hadamard_inplace(c)
    c[0] = 1.0  # exact; the transform leaves sum(lam) = 1 up to rounding
    return c
