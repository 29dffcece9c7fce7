"""Entropic quantities and distances on multi-register states.

All logarithms are base 2 and 0 log 0 = 0. Entropies of subsystems of a
pure global state are evaluated on the smaller side of the bipartition,
using the fact that both sides of a pure state share a spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import svdvals
from scipy.special import xlogy

from .hilbert import (
    TOL_PSD,
    DensityOperator,
    StateValidationError,
    StateVector,
    _bipartition_matrix,
    _prod,
    reduced_density,
)

LOG2 = np.log(2.0)


@dataclass(frozen=True)
class EntropyReport:
    """Entropy value in bits plus the smallest retained eigenvalue."""

    value: float
    subsystem: tuple[str, ...]
    spectrum_floor: float


def _entropy_from_spectrum(w: np.ndarray, tol: float = TOL_PSD) -> tuple[float, float]:
    """Shannon entropy (bits) of an eigenvalue list with clamping.

    Eigenvalues in [-tol, 0) are clamped to zero; anything below -tol is
    an invalid state. Returns (entropy, smallest retained eigenvalue).
    """
    w = np.asarray(w, dtype=float)
    lo = float(w.min()) if w.size else 0.0
    if lo < -tol:
        raise StateValidationError(f"eigenvalue {lo} below -{tol}: state invalid")
    w = np.clip(w, 0.0, None)
    h = float(-np.sum(xlogy(w, w)) / LOG2)
    positive = w[w > 0]
    floor = float(positive.min()) if positive.size else 0.0
    return max(h, 0.0), floor


def _pure_subsystem_spectrum(state: StateVector, subsystem: Sequence[str]) -> np.ndarray:
    """Spectrum of a reduction of a pure state, via the smaller side."""
    system = state.system
    subsystem = list(subsystem)
    comp = system.complement(subsystem)
    d_sub = _prod(system.register(n).dim for n in subsystem)
    d_comp = system.total_dim // d_sub
    side = subsystem if d_sub <= d_comp else list(comp)
    if not side:
        return np.array([1.0])
    m = _bipartition_matrix(state, side)
    s = svdvals(m)
    return s * s


def entropy(state, subsystem: Sequence[str] | None = None) -> float:
    """Von Neumann entropy in bits of a subsystem reduction."""
    if subsystem is None:
        subsystem = state.system.names
    if isinstance(state, StateVector):
        spec = _pure_subsystem_spectrum(state, subsystem)
        return _entropy_from_spectrum(spec)[0]
    if isinstance(state, DensityOperator):
        if tuple(subsystem) == state.system.names:
            rho = state
        else:
            rho = reduced_density(state, subsystem)
        w = np.linalg.eigvalsh(rho.matrix)
        return _entropy_from_spectrum(w)[0]
    raise TypeError(f"cannot take entropy of {type(state).__name__}")


def entropy_report(state, subsystem: Sequence[str] | None = None) -> EntropyReport:
    """Like :func:`entropy` but reporting the retained spectrum floor."""
    if subsystem is None:
        subsystem = state.system.names
    if isinstance(state, StateVector):
        spec = _pure_subsystem_spectrum(state, subsystem)
    else:
        rho = reduced_density(state, subsystem)
        spec = np.linalg.eigvalsh(rho.matrix)
    value, floor = _entropy_from_spectrum(spec)
    return EntropyReport(value, tuple(subsystem), floor)


def _disjoint(*groups: Sequence[str]) -> None:
    seen: set[str] = set()
    for g in groups:
        g = set(g)
        if g & seen:
            raise ValueError(f"overlapping register groups: {sorted(g & seen)}")
        seen |= g


def cond_entropy(state, a: Sequence[str], b: Sequence[str]) -> float:
    """H(A|B) = H(AB) - H(B)."""
    _disjoint(a, b)
    return entropy(state, list(a) + list(b)) - entropy(state, list(b))


def mutual_info(state, a: Sequence[str], b: Sequence[str]) -> float:
    """I(A;B) = H(A) + H(B) - H(AB)."""
    _disjoint(a, b)
    return (
        entropy(state, list(a))
        + entropy(state, list(b))
        - entropy(state, list(a) + list(b))
    )


def cond_mutual_info(
    state, a: Sequence[str], b: Sequence[str], c: Sequence[str]
) -> float:
    """I(A;B|C) = H(AC) + H(BC) - H(C) - H(ABC)."""
    _disjoint(a, b, c)
    a, b, c = list(a), list(b), list(c)
    return (
        entropy(state, a + c)
        + entropy(state, b + c)
        - entropy(state, c)
        - entropy(state, a + b + c)
    )


def _aligned_matrix(state, subsystem: Sequence[str]) -> np.ndarray:
    if isinstance(state, StateVector) or tuple(subsystem) != state.system.names:
        return reduced_density(state, subsystem).matrix
    return state.matrix


def trace_norm(delta: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(np.linalg.eigvalsh(delta))))


def trace_distance(state1, state2, subsystem: Sequence[str] | None = None) -> float:
    """Trace distance between two states on a common subsystem, in [0, 2].

    Both states must reduce to register systems with the same names and
    dimensions on ``subsystem``.
    """
    if subsystem is None:
        subsystem = state1.system.names
    subsystem = list(subsystem)
    sub1 = state1.system.subsystem(subsystem)
    sub2 = state2.system.subsystem(subsystem)
    if sub1.names != sub2.names or sub1.dims != sub2.dims:
        raise ValueError(
            f"subsystem mismatch: {sub1.names}/{sub1.dims} vs {sub2.names}/{sub2.dims}"
        )
    m1 = _aligned_matrix(state1, subsystem)
    m2 = _aligned_matrix(state2, subsystem)
    return trace_norm(m1 - m2)
