"""Truncated complex power-series algebra.

A :class:`TruncatedSeries` of order ``N`` stores the Maclaurin coefficients
``c_0 .. c_N`` of an analytic germ as complex128 values.  All arithmetic is
exact-to-order: binary operations demand equal orders (callers truncate
explicitly), and products are Cauchy products cut at order ``N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import OrderMismatchError, SingularInputError

#: Default truncation order.  All families handled here are analytic on the
#: unit disk and every coefficient claim involves indices <= 12, so 64 keeps
#: truncation error far below the 1e-12 working tolerances.
DEFAULT_ORDER = 64

#: Constant terms below this modulus are treated as zero when inverting.
SINGULAR_EPS = 1e-14


def _as_coeffs(values: Iterable[complex]) -> np.ndarray:
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                     dtype=np.complex128)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("coefficient array must be one-dimensional and non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError("coefficients must be finite")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TruncatedSeries:
    """Maclaurin polynomial c_0 + c_1 z + ... + c_N z^N, immutable."""

    coeffs: np.ndarray = field()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    # -- constructors -------------------------------------------------

    @classmethod
    def from_coeffs(cls, values: Iterable[complex], order: int | None = None) -> "TruncatedSeries":
        """Build a series from leading coefficients, zero-padded to *order*."""
        arr = np.asarray(list(values), dtype=np.complex128)
        if order is None:
            return cls(arr)
        if order + 1 < arr.size:
            arr = arr[: order + 1]
        elif order + 1 > arr.size:
            arr = np.concatenate([arr, np.zeros(order + 1 - arr.size, dtype=np.complex128)])
        return cls(arr)

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        return cls(np.zeros(order + 1, dtype=np.complex128))

    @classmethod
    def one(cls, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        return cls.monomial(1.0, 0, order)

    @classmethod
    def identity(cls, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        """The series of z itself."""
        return cls.monomial(1.0, 1, order)

    @classmethod
    def monomial(cls, c: complex, n: int, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        if n < 0:
            raise ValueError("monomial exponent must be nonnegative")
        coeffs = np.zeros(order + 1, dtype=np.complex128)
        if n <= order:
            coeffs[n] = c
        return cls(coeffs)

    @classmethod
    def geometric(cls, ratio: complex = 1.0, order: int = DEFAULT_ORDER) -> "TruncatedSeries":
        """Series of 1/(1 - ratio*z)."""
        return cls(ratio ** np.arange(order + 1, dtype=np.complex128))

    # -- structure ----------------------------------------------------

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self) -> int:
        return self.coeffs.size

    def __getitem__(self, n: int) -> complex:
        return complex(self.coeffs[n])

    def truncate(self, order: int) -> "TruncatedSeries":
        """Return a copy cut or zero-padded to the given order."""
        return TruncatedSeries.from_coeffs(self.coeffs, order)

    def _check_order(self, other: "TruncatedSeries") -> None:
        if self.order != other.order:
            raise OrderMismatchError(
                f"series orders differ: {self.order} vs {other.order}; truncate first")

    # -- arithmetic ---------------------------------------------------

    def linear_combine(self, other: "TruncatedSeries",
                       alpha: complex = 1.0, beta: complex = 1.0) -> "TruncatedSeries":
        """Coefficientwise alpha*self + beta*other (equal orders)."""
        self._check_order(other)
        return TruncatedSeries(alpha * self.coeffs + beta * other.coeffs)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self.linear_combine(other)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self.linear_combine(other, 1.0, -1.0)

    def scale(self, alpha: complex) -> "TruncatedSeries":
        return TruncatedSeries(alpha * self.coeffs)

    def mul(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Cauchy product truncated to the common order."""
        self._check_order(other)
        full = np.convolve(self.coeffs, other.coeffs)
        return TruncatedSeries(full[: self.order + 1])

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def reciprocal(self) -> "TruncatedSeries":
        """Multiplicative inverse to truncation order; needs |c_0| > 1e-14."""
        a = self.coeffs
        if abs(a[0]) <= SINGULAR_EPS:
            raise SingularInputError("cannot invert a series with vanishing constant term")
        n = self.order
        b = np.zeros(n + 1, dtype=np.complex128)
        b[0] = 1.0 / a[0]
        for k in range(1, n + 1):
            b[k] = -(a[1:k + 1] @ b[k - 1::-1]) / a[0]
        return TruncatedSeries(b)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """Series of self∘inner; inner must vanish at 0."""
        self._check_order(inner)
        if abs(inner.coeffs[0]) >= SINGULAR_EPS:
            raise SingularInputError("composition requires the inner series to vanish at 0")
        # Horner over series: result = c_N, then result*inner + c_k downwards.
        n = self.order
        acc = TruncatedSeries.monomial(self.coeffs[n], 0, n)
        for k in range(n - 1, -1, -1):
            acc = acc.mul(inner)
            acc = acc.linear_combine(TruncatedSeries.monomial(self.coeffs[k], 0, n))
        return acc

    def differentiate(self) -> "TruncatedSeries":
        """Term-by-term derivative; drops the order by one."""
        if self.order == 0:
            return TruncatedSeries.zero(0)
        k = np.arange(1, self.order + 1, dtype=np.complex128)
        return TruncatedSeries(k * self.coeffs[1:])

    def integrate0(self) -> "TruncatedSeries":
        """Primitive vanishing at 0; raises the order by one."""
        k = np.arange(1, self.order + 2, dtype=np.complex128)
        out = np.concatenate([[0.0 + 0.0j], self.coeffs / k])
        return TruncatedSeries(out)

    # -- evaluation ---------------------------------------------------

    def eval(self, z):
        """Horner evaluation; accepts scalars or numpy arrays."""
        z = np.asarray(z, dtype=np.complex128)
        acc = np.full(z.shape, self.coeffs[-1], dtype=np.complex128)
        for c in self.coeffs[-2::-1]:
            acc = acc * z + c
        if acc.ndim == 0:
            return complex(acc)
        return acc

    def trimmed_coeffs(self, tol: float = 0.0) -> np.ndarray:
        """Coefficients with the trailing (near-)zero run removed."""
        a = self.coeffs
        last = a.size - 1
        while last > 0 and abs(a[last]) <= tol:
            last -= 1
        return a[: last + 1]

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        lead = ", ".join(f"{c:.6g}" for c in self.coeffs[: min(5, len(self))])
        return f"TruncatedSeries(order={self.order}, coeffs=[{lead}, ...])"


def linear_combine(a: TruncatedSeries, b: TruncatedSeries,
                   alpha: complex = 1.0, beta: complex = 1.0) -> TruncatedSeries:
    return a.linear_combine(b, alpha, beta)


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a.mul(b)


def reciprocal(a: TruncatedSeries) -> TruncatedSeries:
    return a.reciprocal()


def compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    return outer.compose(inner)


def differentiate(a: TruncatedSeries) -> TruncatedSeries:
    return a.differentiate()


def integrate0(a: TruncatedSeries) -> TruncatedSeries:
    return a.integrate0()
