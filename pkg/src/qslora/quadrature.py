"""Adaptive Gauss-Legendre quadrature for smooth (piecewise) integrands.

Used for waveform energy checks and the continuous-time matched filter.
Integrands must accept a numpy array of abscissae and return array values
(real or complex).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

__all__ = ["QuadratureError", "integrate"]


class QuadratureError(RuntimeError):
    """Raised when the adaptive subdivision fails to reach the tolerance."""


def _gauss_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return nodes, weights


_N10, _W10 = _gauss_nodes(10)
_N20, _W20 = _gauss_nodes(20)


def _panel(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> tuple[complex, float]:
    """Return the 20-node estimate on [a, b] and its error estimate."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    coarse = half * np.sum(_W10 * np.asarray(f(mid + half * _N10)))
    fine = half * np.sum(_W20 * np.asarray(f(mid + half * _N20)))
    return fine, abs(fine - coarse)


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-10,
    max_depth: int = 40,
) -> complex:
    """Integrate f over [a, b] to absolute tolerance tol.

    Bisects panels whose 10-vs-20 node Gauss-Legendre estimates disagree by
    more than the panel's share of the tolerance. Raises QuadratureError if
    any panel still disagrees after max_depth bisections.
    """
    if not b > a:
        if b == a:
            return 0.0
        raise ValueError("integration interval is reversed (need b > a)")
    total = 0.0 + 0.0j
    width = b - a
    stack = [(float(a), float(b), 0)]
    while stack:
        lo, hi, depth = stack.pop()
        value, err = _panel(f, lo, hi)
        if err <= tol * max((hi - lo) / width, 1e-3):
            total += value
            continue
        if depth >= max_depth:
            raise QuadratureError(
                f"no convergence on [{lo}, {hi}] after {depth} bisections "
                f"(estimate {value}, error {err:.3e}, tol {tol:.3e})"
            )
        mid = 0.5 * (lo + hi)
        stack.append((lo, mid, depth + 1))
        stack.append((mid, hi, depth + 1))
    if abs(total.imag) == 0.0:
        return float(total.real)
    return complex(total)
