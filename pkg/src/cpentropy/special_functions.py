r"""The thermal kernel :math:`C(y) = \tfrac12\coth(y/2)` and operators built on it.

Every free energy in the package has the form

.. math::

    \Phi(y) = y \sum_j a_j\, y^j \partial_y^j C(y),

so :class:`EulerOperator` evaluates such combinations and their
y-derivatives.  Two routes are used:

* the Laurent series :math:`C = \sum_n c_n y^{2n-1}` with
  :math:`c_n = B_{2n}/(2n)!`.  The operator :math:`y^j\partial^j` acts on
  :math:`y^k` as the falling factorial :math:`k^{\underline{j}}`, so the
  series of :math:`\Phi` is obtained term by term without cancellation;
* the closed forms of :math:`C^{(n)}` in :math:`q = e^{-y}` for larger y.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import zeta

__all__ = [
    "CothKernel",
    "coth_kernel",
    "kernel_series",
    "kernel_rational",
    "laurent_coefficients",
    "EulerOperator",
    "KERNEL_SWITCH",
    "SERIES_SWITCH",
    "UNDERFLOW_Y",
]

#: below this y the kernel itself uses the Laurent series
KERNEL_SWITCH = 0.25
#: below this y composite operators use their own Bernoulli series
SERIES_SWITCH = 2.0
#: exp(-y) underflows beyond this point
UNDERFLOW_Y = 745.0

_KERNEL_TERMS = 7
_OPERATOR_TERMS = 40
MAX_ORDER = 6

# Eulerian numbers: sum_k k^n q^k = q A_n(q) / (1-q)^(n+1)
_EULERIAN = {
    0: (1.0,),
    1: (1.0,),
    2: (1.0, 1.0),
    3: (1.0, 4.0, 1.0),
    4: (1.0, 11.0, 11.0, 1.0),
    5: (1.0, 26.0, 66.0, 26.0, 1.0),
    6: (1.0, 57.0, 302.0, 302.0, 57.0, 1.0),
}


@lru_cache(maxsize=None)
def _laurent(nterms: int) -> tuple[float, ...]:
    out = [1.0]
    for n in range(1, nterms):
        # B_2n / (2n)! = (-1)^(n+1) 2 zeta(2n) / (2 pi)^(2n)
        out.append((-1) ** (n + 1) * 2.0 * float(zeta(2 * n)) / (2.0 * math.pi) ** (2 * n))
    return tuple(out)


def laurent_coefficients(nterms: int = _OPERATOR_TERMS) -> np.ndarray:
    """Coefficients ``c_n`` of ``C(y) = sum_n c_n y**(2n-1)``, starting with ``c_0 = 1``."""
    return np.array(_laurent(nterms))


def _falling(k: np.ndarray | float, j: int):
    out = np.ones_like(np.asarray(k, dtype=float))
    for i in range(j):
        out = out * (k - i)
    return out


@dataclass(frozen=True)
class CothKernel:
    """Values of C and its derivatives at a single point.

    ``c[n]`` is the n-th derivative, ``c[0]`` is C itself.
    """

    y: float
    c: tuple[float, ...]

    def __getitem__(self, n: int) -> float:
        return self.c[n]

    @property
    def order(self) -> int:
        return len(self.c) - 1


def _check_y(y) -> np.ndarray:
    arr = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"y must be finite, got {y!r}")
    if np.any(arr <= 0):
        raise ValueError(f"y must be positive, got {y!r}")
    return arr


def kernel_series(y, order: int = 4, nterms: int = _KERNEL_TERMS) -> np.ndarray:
    """Laurent-series branch; returns array of shape ``(order + 1,) + y.shape``."""
    y = np.asarray(y, dtype=float)
    coeffs = _laurent(nterms)
    out = np.zeros((order + 1,) + y.shape)
    for n, cn in enumerate(coeffs):
        k = 2 * n - 1
        for j in range(order + 1):
            fall = _falling(float(k), j)
            if fall == 0.0:
                continue
            out[j] += cn * fall * y ** (k - j)
    return out


def kernel_rational(y, order: int = 4) -> np.ndarray:
    """Closed forms in ``q = exp(-y)``; returns array of shape ``(order + 1,) + y.shape``."""
    y = np.asarray(y, dtype=float)
    q = np.exp(-y)
    omq = -np.expm1(-y)
    out = np.empty((order + 1,) + y.shape)
    out[0] = 0.5 + q / omq
    for n in range(1, order + 1):
        poly = np.polyval(_EULERIAN[n][::-1], q)
        out[n] = (-1) ** n * q * poly / omq ** (n + 1)
    return out


def _kernel_array(y: np.ndarray, order: int) -> np.ndarray:
    out = np.empty((order + 1,) + y.shape)
    small = y < KERNEL_SWITCH
    huge = y > UNDERFLOW_Y
    mid = ~small & ~huge
    if np.any(small):
        out[:, small] = kernel_series(y[small], order)
    if np.any(mid):
        out[:, mid] = kernel_rational(y[mid], order)
    if np.any(huge):
        out[:, huge] = 0.0
        out[0, huge] = 0.5
    return out


def coth_kernel(y: float, order: int = 4) -> CothKernel:
    """Evaluate C(y) = coth(y/2)/2 and its derivatives through ``order``.

    Parameters
    ----------
    y : float
        Reduced temperature, positive and finite.
    order : int
        Highest derivative returned, at most 6.

    Returns
    -------
    CothKernel

    Raises
    ------
    ValueError
        If y is not a positive finite number.
    """
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"order must be in [0, {MAX_ORDER}]")
    arr = _check_y(y)
    if arr.ndim != 0:
        raise ValueError("coth_kernel takes a scalar; use EulerOperator for grids")
    vals = _kernel_array(arr.reshape(1), order)[:, 0]
    return CothKernel(float(arr), tuple(float(v) for v in vals))


class EulerOperator:
    r"""Linear combination :math:`\Phi(y) = y\sum_j a_j y^j C^{(j)}(y)`.

    Evaluates the value and first y-derivative on scalars or arrays,
    including the analytic limit at ``y = 0``.  Negative y is rejected.

    Parameters
    ----------
    coeffs : sequence of float
        ``coeffs[j]`` multiplies :math:`y^j\partial^j_y`.
    """

    def __init__(self, coeffs: Sequence[float]):
        coeffs = tuple(float(a) for a in coeffs)
        if len(coeffs) > MAX_ORDER:
            raise ValueError("operator order too high")
        self.coeffs = coeffs
        cn = laurent_coefficients(_OPERATOR_TERMS)
        k = 2.0 * np.arange(_OPERATOR_TERMS) - 1.0
        # value coefficients of y^(2n), derivative coefficients of y^(2n-1)
        self._value_coeffs = cn * self.symbol(k)
        self._deriv_coeffs = self._value_coeffs * 2.0 * np.arange(_OPERATOR_TERMS)

    def __repr__(self) -> str:
        return f"EulerOperator({list(self.coeffs)})"

    def __add__(self, other: EulerOperator) -> EulerOperator:
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0.0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0.0] * (n - len(other.coeffs))
        return EulerOperator([x + y for x, y in zip(a, b)])

    def __rmul__(self, scalar: float) -> EulerOperator:
        return EulerOperator([scalar * a for a in self.coeffs])

    def symbol(self, k):
        """Eigenvalue of the bracketed operator on the monomial ``y**k``."""
        k = np.asarray(k, dtype=float)
        return sum(a * _falling(k, j) for j, a in enumerate(self.coeffs))

    def series_coefficients(self, nterms: int = 4, derivative: bool = False) -> np.ndarray:
        """Taylor coefficients of the value (powers y^0, y^2, ...) or of its
        derivative (powers y^-1, y^1, y^3, ...; the first entry is always 0)."""
        src = self._deriv_coeffs if derivative else self._value_coeffs
        return src[:nterms].copy()

    def at_zero(self) -> float:
        return float(self._value_coeffs[0])

    def _series(self, y: np.ndarray, derivative: bool) -> np.ndarray:
        y2 = y * y
        if derivative:
            coeffs = self._deriv_coeffs[1:]
            acc = np.zeros_like(y)
            for c in coeffs[::-1]:
                acc = acc * y2 + c
            return acc * y
        acc = np.zeros_like(y)
        for c in self._value_coeffs[::-1]:
            acc = acc * y2 + c
        return acc

    def _closed(self, y: np.ndarray, derivative: bool) -> np.ndarray:
        order = len(self.coeffs) + (1 if derivative else 0)
        ker = _kernel_array(y, order)
        acc = np.zeros_like(y)
        for j, a in enumerate(self.coeffs):
            if a == 0.0:
                continue
            if derivative:
                acc += a * ((j + 1) * y**j * ker[j] + y ** (j + 1) * ker[j + 1])
            else:
                acc += a * y ** (j + 1) * ker[j]
        return acc

    def _eval(self, y, derivative: bool):
        arr = np.asarray(y, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"y must be finite, got {y!r}")
        if np.any(arr < 0):
            raise ValueError(f"y must be non-negative, got {y!r}")
        flat = np.atleast_1d(arr).ravel()
        out = np.empty_like(flat)
        small = flat < SERIES_SWITCH
        if np.any(small):
            out[small] = self._series(flat[small], derivative)
        if np.any(~small):
            out[~small] = self._closed(flat[~small], derivative)
        out = out.reshape(np.shape(arr))
        return float(out) if out.ndim == 0 else out

    def __call__(self, y):
        return self._eval(y, derivative=False)

    def derivative(self, y):
        return self._eval(y, derivative=True)
