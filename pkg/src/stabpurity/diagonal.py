"""Stabilizer-diagonal density operators.

A state that is diagonal in the common eigenbasis of a stabilizer group is
fixed by 2^n real coefficients c[i] = tr(rho S_i), one per group element, with
c[0] = 1 by normalization.  Its eigenvalues are the signed averages

    lambda[j] = 2^{-n} * sum_i (-1)^{popcount(i & j)} c[i],

a Walsh-Hadamard transform, computed here as an in-place butterfly in
O(n 2^n).  The inverse is the same transform without the 2^{-n} factor.

Entropy uses the natural logarithm throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DenseCapExceeded, NonPhysicalSpectrum, NonUnitTrace
from .stabilizer import DENSE_CAP, GraphSpec, dense_matrix, expectation_value, stabilizer_element

#: Entropy clamps eigenvalues in [-SPECTRUM_FLOOR, 0) to zero and rejects below.
SPECTRUM_FLOOR = 1e-9


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


def _check_length(n: int, values: np.ndarray, what: str) -> None:
    if n < 1:
        raise ValueError("need at least one qubit")
    if values.ndim != 1 or values.size != (1 << n):
        raise ValueError(f"{what} for n = {n} must have length {1 << n}, got {values.size}")


@dataclass(frozen=True)
class CoeffVector:
    """Stabilizer-basis coefficients of a state; index bit k selects generator k."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))
        _check_length(self.n, self.values, "coefficient vector")
        if abs(self.values[0] - 1.0) > 1e-9:
            raise ValueError(f"c[0] must be 1 (unit trace), got {self.values[0]!r}")

    def __getitem__(self, i: int) -> float:
        return float(self.values[i])

    def generator_expectations(self) -> np.ndarray:
        """The n single-generator coefficients c[2^k]."""
        return self.values[1 << np.arange(self.n)]


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a stabilizer-diagonal state, indexed by eigenvector bit-strings."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))
        _check_length(self.n, self.values, "spectrum")

    def __getitem__(self, j: int) -> float:
        return float(self.values[j])

    def is_physical(self, tol: float = SPECTRUM_FLOOR) -> bool:
        return bool(self.values.min() >= -tol)


def walsh_hadamard_inplace(a: np.ndarray) -> None:
    """Unnormalized Walsh-Hadamard transform of a length-2^m buffer, in place.

    The butterfly pairs indices differing in one bit; the bit order does not
    affect the result.  O(m 2^m) time, one length-2^{m-1} temporary per pass.
    """
    size = a.size
    if size & (size - 1):
        raise ValueError("buffer length must be a power of two")
    h = 1
    while h < size:
        pairs = a.reshape(-1, 2 * h)
        lo = pairs[:, :h]
        hi = pairs[:, h:]
        tmp = lo - hi
        lo += hi
        hi[:] = tmp
        h *= 2


def eigenvalues(c: CoeffVector) -> Spectrum:
    """Spectrum of the state with coefficients c: normalized transform of c."""
    buf = c.values.copy()
    walsh_hadamard_inplace(buf)
    buf /= buf.size
    return Spectrum(c.n, buf)


def coefficients(s: Spectrum) -> CoeffVector:
    """Inverse of :func:`eigenvalues`; round-trips to the identity."""
    buf = s.values.copy()
    walsh_hadamard_inplace(buf)
    return CoeffVector(s.n, buf)


def purity(c: CoeffVector) -> float:
    """tr(rho^2) = 2^{-n} sum_i c[i]^2."""
    return float(np.dot(c.values, c.values) / c.values.size)


def entropy(s: Spectrum, floor: float = SPECTRUM_FLOOR) -> float:
    """Von Neumann entropy -sum lambda ln lambda, with 0 ln 0 = 0.

    Eigenvalues in [-floor, 0) are treated as exact zeros; anything below
    raises NonPhysicalSpectrum.
    """
    lam = s.values
    worst = lam.min()
    if worst < -floor:
        raise NonPhysicalSpectrum(
            f"eigenvalue {worst!r} below -{floor:g}; not a density-operator spectrum"
        )
    pos = lam[lam > 0.0]
    return float(-np.dot(pos, np.log(pos)))


def _stabilizer_group(graph: GraphSpec):
    return [stabilizer_element(graph, i) for i in range(1 << graph.n)]


def _check_dense_input(rho: np.ndarray, graph: GraphSpec, cap: int, what: str) -> None:
    if graph.n > cap:
        raise DenseCapExceeded(graph.n, cap, what)
    dim = 1 << graph.n
    if rho.shape != (dim, dim):
        raise ValueError(f"expected a {dim} x {dim} matrix, got {rho.shape}")


def twirl(rho: np.ndarray, graph: GraphSpec, cap: int = DENSE_CAP) -> CoeffVector:
    """Project rho onto stabilizer-diagonal form by reading tr(rho S_i) for all i.

    Equivalent to group-averaging rho over the stabilizer group (see
    :func:`twirl_average` for that literal, slower path) and preserves every
    stabilizer expectation value.  Requires unit trace.
    """
    _check_dense_input(rho, graph, cap, "twirl")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > 1e-9:
        raise NonUnitTrace(f"trace {tr:.12g} differs from 1 by more than 1e-9")
    return CoeffVector(
        graph.n, [expectation_value(rho, s) for s in _stabilizer_group(graph)]
    )


def twirl_average(rho: np.ndarray, graph: GraphSpec, cap: int = DENSE_CAP) -> np.ndarray:
    """The twirled state computed as the literal group average 2^{-n} sum S rho S.

    Reference path used to cross-validate :func:`twirl`; quadratically more
    work, so not the production route.
    """
    _check_dense_input(rho, graph, cap, "twirl average")
    acc = np.zeros_like(rho, dtype=complex)
    for s in _stabilizer_group(graph):
        m = dense_matrix(s, cap)
        acc += m @ rho @ m
    return acc / (1 << graph.n)


def assemble_dense(c: CoeffVector, graph: GraphSpec, cap: int = DENSE_CAP) -> np.ndarray:
    """Dense 2^{-n} sum_i c[i] S_i; Hermitian with unit trace when c[0] = 1."""
    if graph.n != c.n:
        raise ValueError("graph and coefficient vector disagree on qubit count")
    if graph.n > cap:
        raise DenseCapExceeded(graph.n, cap, "dense assembly")
    dim = 1 << graph.n
    k = np.arange(dim)
    out = np.zeros((dim, dim), dtype=complex)
    for i, s in enumerate(_stabilizer_group(graph)):
        # each group element is a signed permutation: one entry per column
        signs = 1 - 2 * (np.bitwise_count(k & np.int64(s.z_mask)).astype(np.int64) & 1)
        coeff = s.phase * (1j) ** (s.x_mask & s.z_mask).bit_count()
        out[k ^ s.x_mask, k] += (c[i] * coeff / dim) * signs
    return out
