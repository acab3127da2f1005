"""Concrete disk functions, Schwarz candidates and scalar formulas.

Every map built here carries two synchronized representations: a closed-form
evaluator (numpy-vectorized) and the truncated Maclaurin series of both f/z
and z/f.  Disagreement between the two beyond tolerance is treated as a
construction bug, so downstream analyses can cross-validate freely.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from .errors import HypothesisError, SingularInputError
from .series import DEFAULT_ORDER, TruncatedSeries

__all__ = [
    "AnalyticMap", "SchwarzCandidate", "BlaschkeSpec",
    "make_f_theta", "make_g_threefold", "make_example32", "make_f_a",
    "make_from_omega", "blaschke_eval",
    "v_integral", "w_func", "w_prime", "u_func", "u_prime", "delta",
    "a_bound", "b_bound", "r_squared", "t_zero", "lemma31_upper",
    "re_n_boundary",
]

_SERIES_VS_CLOSED_TOL = 1e-9


# ---------------------------------------------------------------------------
# Scalar formula pack
# ---------------------------------------------------------------------------

def v_integral(a: float) -> float:
    """∫_0^1 (t+a)/(1+at) dt, monotone from v(0)=1/2 up to v(1)=1.

    The closed form 1/a - ((1-a^2)/a^2) log(1+a) loses all precision as
    a -> 0, so small arguments switch to the alternating Maclaurin series
    1/2 + sum 2(-1)^(k-1) a^k / (k(k+2)).
    """
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"v(a) needs a in [0,1], got {a}")
    if a < 1e-3:
        total = 0.5
        term_sign = 1.0
        ak = a
        for k in range(1, 12):
            total += term_sign * 2.0 * ak / (k * (k + 2))
            ak *= a
            term_sign = -term_sign
        return total
    return 1.0 / a - (1.0 - a * a) / (a * a) * math.log1p(a)


def w_func(a: float) -> float:
    """w(a) = 2 v(a) - a; concave on [0,1] with w(0) = w(1) = 1."""
    return 2.0 * v_integral(a) - a


def w_prime(a: float) -> float:
    """w'(a) = 2/a - 4/a^2 + (4/a^3) log(1+a) - 1, series-guarded near 0."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"w'(a) needs a in [0,1], got {a}")
    if a < 1e-2:
        # 4 * sum_{n>=3} (-1)^(n-1) a^(n-3) / n  - 1
        total = -1.0
        ap = 1.0
        sign = 1.0
        for n in range(3, 24):
            total += sign * 4.0 * ap / n
            ap *= a
            sign = -sign
        return total
    return 2.0 / a - 4.0 / (a * a) + 4.0 / (a ** 3) * math.log1p(a) - 1.0


def u_func(a: float) -> float:
    """u(a) = 6a + 3a^2 - a^3 - 6(1+a) log(1+a); negative on (0,1]."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"u(a) needs a in [0,1], got {a}")
    return 6.0 * a + 3.0 * a * a - a ** 3 - 6.0 * (1.0 + a) * math.log1p(a)


def u_prime(a: float) -> float:
    """u'(a) = 6a - 3a^2 - 6 log(1+a)."""
    if not 0.0 <= a <= 1.0:
        raise ValueError(f"u'(a) needs a in [0,1], got {a}")
    return 6.0 * a - 3.0 * a * a - 6.0 * math.log1p(a)


def delta() -> float:
    """(3 - 4 ln 2)/(4 ln 2 - 2) ~ 0.29435, the third-coefficient threshold."""
    ln2 = math.log(2.0)
    return (3.0 - 4.0 * ln2) / (4.0 * ln2 - 2.0)


def a_bound(r: float, lam: float) -> float:
    """A(r, lam) = (1 - 2 lam r^2 - lam^2 r^4) / (1 + lam r^2)^2."""
    r2 = r * r
    return (1.0 - 2.0 * lam * r2 - (lam * r2) ** 2) / (1.0 + lam * r2) ** 2


def b_bound(r: float, lam: float) -> float:
    """B(r, lam) = sqrt((1 - lam^2 r^4)(1 - 4 lam^2 r^4)^2)."""
    q = lam * r * r
    return math.sqrt(max((1.0 - q * q), 0.0)) * abs(1.0 - 4.0 * q * q)


def r_squared(theta0: float, lam: float, t: float) -> float:
    """Squared limit of the class functional along a radius hitting e^{i theta0}.

    (1+lam)^2 t^2 + lam^2 (2t+1)^2 - 2 t (2t+1) lam (1+lam) cos(theta0),
    for t >= 0.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    c = math.cos(theta0)
    return ((1.0 + lam) ** 2 * t * t + lam * lam * (2.0 * t + 1.0) ** 2
            - 2.0 * t * (2.0 * t + 1.0) * lam * (1.0 + lam) * c)


def _t_zero_from_cos(c: float, lam: float) -> float:
    denom = 5.0 * lam * lam + 2.0 * lam + 1.0 - 4.0 * lam * (1.0 + lam) * c
    return lam * ((1.0 + lam) * c - 2.0 * lam) / denom


def t_zero(theta0: float, lam: float) -> float:
    """Location of the minimum of r_squared in t; 0 at cos(theta0)=2lam/(1+lam)."""
    return _t_zero_from_cos(math.cos(theta0), lam)


def lemma31_upper(theta0: float, lam: float) -> float:
    """(1+lam)(1+lam-2lam cos theta0) / (5lam^2+2lam+1-4lam(1+lam)cos theta0).

    Upper bound for the Julia quotient when cos(theta0) > 2lam/(1+lam);
    algebraically equal to 1 + 2*t_zero.
    """
    c = math.cos(theta0)
    denom = 5.0 * lam * lam + 2.0 * lam + 1.0 - 4.0 * lam * (1.0 + lam) * c
    return (1.0 + lam) * (1.0 + lam - 2.0 * lam * c) / denom


def re_n_boundary(lam: float, theta) -> np.ndarray | float:
    """Re N(e^{i theta}) = 1 - lam^3 - 2 lam(1-lam) cos t - lam(1-lam) cos 2t.

    Boundary real part governing convexity of the extremal family; bounded
    below by (1-lam)^3.  Vectorized in theta.
    """
    theta = np.asarray(theta, dtype=float)
    out = (1.0 - lam ** 3 - 2.0 * lam * (1.0 - lam) * np.cos(theta)
           - lam * (1.0 - lam) * np.cos(2.0 * theta))
    if out.ndim == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# Schwarz candidates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SchwarzCandidate:
    """A bounded analytic map of the disk, tagged by the role it plays.

    role 'omega'  : the density in z/f = 1 - a2 z + lam z ∫ω; any member of B.
    role 'omega1' : the integrated symbol with ω1(0) = ω1'(0) = 0.
    role 'phi'    : a subordination Schwarz function, phi(0) = 0.
    """

    role: str
    series: Optional[TruncatedSeries] = None
    evaluator: Optional[Callable] = None
    deriv: Optional[Callable] = None
    primitive: Optional[Callable] = None
    label: str = ""

    def __post_init__(self):
        if self.role not in ("omega", "omega1", "phi"):
            raise ValueError(f"unknown Schwarz role {self.role!r}")
        if self.series is None and self.evaluator is None:
            raise ValueError("SchwarzCandidate needs a series or an evaluator")
        # Only the integrated/subordination roles are pinned at the origin:
        # a plain omega in B may be a nonzero constant.
        if self.role in ("omega1", "phi"):
            if self.series is not None and abs(self.series[0]) > 1e-12:
                raise ValueError(f"role {self.role} requires zero constant term")
            if self.role == "omega1" and self.series is not None \
                    and abs(self.series[1]) > 1e-12:
                raise ValueError("role omega1 requires vanishing derivative at 0")

    def __call__(self, z):
        if self.evaluator is not None:
            return self.evaluator(z)
        return self.series.eval(z)

    def derivative(self, z):
        if self.deriv is not None:
            return self.deriv(z)
        if self.series is None:
            raise ValueError("no derivative available: candidate has no series")
        return self.series.differentiate().eval(z)

    @classmethod
    def monomial(cls, c: complex, n: int, role: str = "omega",
                 order: int = DEFAULT_ORDER) -> "SchwarzCandidate":
        """c*z^n with |c| <= 1; closed forms supplied for speed."""
        if abs(c) > 1.0 + 1e-12:
            raise ValueError("monomial coefficient must satisfy |c| <= 1")
        ser = TruncatedSeries.monomial(c, n, order)
        return cls(
            role=role,
            series=ser,
            evaluator=(lambda z, c=c, n=n: c * np.asarray(z, dtype=complex) ** n),
            deriv=(lambda z, c=c, n=n: c * n * np.asarray(z, dtype=complex) ** (n - 1)
                   if n >= 1 else np.zeros_like(np.asarray(z, dtype=complex))),
            primitive=(lambda z, c=c, n=n: c * np.asarray(z, dtype=complex) ** (n + 1) / (n + 1)),
            label=f"{c}*z^{n}",
        )

    @classmethod
    def moebius_integrand(cls, a: float, order: int = DEFAULT_ORDER) -> "SchwarzCandidate":
        """(z+a)/(1+az) for a in (0,1): the density behind the a3 counterexample."""
        if not 0.0 < a < 1.0:
            raise ValueError("moebius integrand needs a in (0,1)")
        # (z+a)/(1+az) = a + (1-a^2) sum_{n>=1} (-a)^(n-1) z^n
        coeffs = np.empty(order + 1, dtype=np.complex128)
        coeffs[0] = a
        coeffs[1:] = (1.0 - a * a) * (-a) ** np.arange(order, dtype=float)
        ser = TruncatedSeries(coeffs)

        def _eval(z, a=a):
            z = np.asarray(z, dtype=complex)
            return (z + a) / (1.0 + a * z)

        def _deriv(z, a=a):
            z = np.asarray(z, dtype=complex)
            return (1.0 - a * a) / (1.0 + a * z) ** 2

        def _prim(z, a=a):
            # ∫_0^z (t+a)/(1+at) dt with the principal log; Re(1+az) > 0 on the disk.
            z = np.asarray(z, dtype=complex)
            return z / a + (a * a - 1.0) / (a * a) * np.log(1.0 + a * z)

        return cls(role="omega", series=ser, evaluator=_eval, deriv=_deriv,
                   primitive=_prim, label=f"(z+{a})/(1+{a}z)")

    @classmethod
    def from_series(cls, ser: TruncatedSeries, role: str = "omega",
                    label: str = "") -> "SchwarzCandidate":
        return cls(role=role, series=ser, label=label)


# ---------------------------------------------------------------------------
# AnalyticMap
# ---------------------------------------------------------------------------

def _horner(coeffs: np.ndarray, z):
    acc = np.full(np.shape(z), coeffs[-1], dtype=np.complex128)
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


@dataclass(frozen=True)
class AnalyticMap:
    """A normalized disk function with dual closed-form/series representation.

    ``inverse_series`` holds z/f(z) and ``series`` holds f(z)/z, both to the
    same truncation order; ``u_closed``, when present, is the exact functional
    (z/f)^2 f' - 1 in closed form.
    """

    name: str
    lam: float
    a2: complex
    params: Mapping[str, complex]
    inverse_series: TruncatedSeries
    series: TruncatedSeries
    evaluator: Callable
    u_closed: Optional[Callable] = None
    _inv_trimmed: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        inv = self.inverse_series
        if abs(inv[0] - 1.0) > 1e-12:
            raise ValueError("z/f must have constant term 1 (normalization)")
        if abs(self.series[0] - 1.0) > 1e-12:
            raise ValueError("f/z must have constant term 1 (normalization)")
        if abs(self.series[1] - self.a2) > 1e-10:
            raise ValueError("declared a2 disagrees with the series coefficient")
        object.__setattr__(self, "_inv_trimmed",
                           inv.trimmed_coeffs(tol=0.0))

    # -- evaluation -----------------------------------------------------

    def __call__(self, z):
        return self.evaluator(z)

    def inverse_eval(self, z):
        """z/f(z) via Horner on the (trimmed) inverse series."""
        return _horner(self._inv_trimmed, np.asarray(z, dtype=complex))

    def derivative(self, z):
        """f'(z) = (q - z q')/q^2 where q = z/f."""
        z = np.asarray(z, dtype=complex)
        q = _horner(self._inv_trimmed, z)
        dq = _horner(np.arange(1, self._inv_trimmed.size, dtype=complex)
                     * self._inv_trimmed[1:], z) if self._inv_trimmed.size > 1 else 0.0
        return (q - z * dq) / (q * q)

    def order(self) -> int:
        return self.inverse_series.order

    def spec_dict(self) -> dict:
        """CLI-facing descriptor: {family, lambda, extra params...}."""
        out = {"family": self.name, "lambda": self.lam}
        out.update({k: (v if isinstance(v, (int, float, str)) else complex(v))
                    for k, v in self.params.items()})
        return out


def _build_map(name: str, lam: float, inverse_series: TruncatedSeries,
               evaluator: Callable | None, params: Mapping,
               u_closed: Callable | None = None) -> AnalyticMap:
    fz = inverse_series.reciprocal()
    a2 = fz[1]
    if evaluator is None:
        trimmed = inverse_series.trimmed_coeffs()

        def evaluator(z, _c=trimmed):
            z = np.asarray(z, dtype=complex)
            return z / _horner(_c, z)

    m = AnalyticMap(name=name, lam=lam, a2=a2, params=dict(params),
                    inverse_series=inverse_series, series=fz,
                    evaluator=evaluator, u_closed=u_closed)
    _cross_validate(m)
    return m


def _cross_validate(m: AnalyticMap, n_points: int = 64, radius: float = 0.5) -> None:
    """Closed form vs series agreement; a disagreement is a build defect."""
    t = np.linspace(0.0, 2.0 * np.pi, n_points, endpoint=False)
    z = radius * np.exp(1j * t)
    closed = m.evaluator(z)
    via_series = z * m.series.eval(z)
    err = np.max(np.abs(closed - via_series))
    if err > _SERIES_VS_CLOSED_TOL:
        raise SingularInputError(
            f"map {m.name}: closed form and series disagree by {err:.3e}")


# ---------------------------------------------------------------------------
# Families
# ---------------------------------------------------------------------------

def make_f_theta(lam: float, theta: float, order: int = DEFAULT_ORDER) -> AnalyticMap:
    """Extremal family z / (1 - (1+lam) e^{i theta} z + lam e^{2 i theta} z^2)."""
    if not 0.0 < lam <= 1.0:
        raise HypothesisError(f"lambda must lie in (0,1], got {lam}")
    e1 = cmath.exp(1j * theta)
    e2 = cmath.exp(2j * theta)
    inv = TruncatedSeries.from_coeffs([1.0, -(1.0 + lam) * e1, lam * e2], order)

    def evaluator(z, e1=e1, e2=e2, lam=lam):
        z = np.asarray(z, dtype=complex)
        return z / (1.0 - (1.0 + lam) * e1 * z + lam * e2 * z * z)

    def u_closed(z, e2=e2, lam=lam):
        z = np.asarray(z, dtype=complex)
        return -lam * e2 * z * z

    return _build_map("f_theta", lam, inv, evaluator,
                      {"theta": theta}, u_closed)


def make_g_threefold(order: int = DEFAULT_ORDER) -> AnalyticMap:
    """g(z) = z/(1 + z^3/2): 3-fold symmetric, in U(1), convex in no direction."""
    inv = TruncatedSeries.from_coeffs([1.0, 0.0, 0.0, 0.5], order)

    def evaluator(z):
        z = np.asarray(z, dtype=complex)
        return z / (1.0 + 0.5 * z ** 3)

    def u_closed(z):
        # (z/g)^2 g' - 1 expands to -z^3 (the integrand role is omega(t)=t).
        z = np.asarray(z, dtype=complex)
        return -z ** 3

    return _build_map("g", 1.0, inv, evaluator, {}, u_closed)


def make_example32(lam: float, k: int, order: int = DEFAULT_ORDER) -> AnalyticMap:
    """Pole-at-one family with z/f = 1 - (1 + lam/k) z + (lam/k) z^(k+1)."""
    if not 0.0 < lam < 1.0:
        raise HypothesisError(f"lambda must lie in (0,1), got {lam}")
    if k < 2:
        raise HypothesisError(f"k must be >= 2, got {k}")
    coeffs = np.zeros(k + 2, dtype=np.complex128)
    coeffs[0] = 1.0
    coeffs[1] = -(1.0 + lam / k)
    coeffs[k + 1] = lam / k
    inv = TruncatedSeries.from_coeffs(coeffs, order)

    def u_closed(z, lam=lam, k=k):
        z = np.asarray(z, dtype=complex)
        return -lam * z ** (k + 1)

    return _build_map("example32", lam, inv, None, {"k": k}, u_closed)


def make_f_a(lam: float, a: float, order: int = DEFAULT_ORDER) -> AnalyticMap:
    """Counterexample family f_a = z / (1 - z(1 + lam ∫_z^1 (t+a)/(1+at) dt))."""
    if not 0.0 < lam < 1.0:
        raise HypothesisError(f"lambda must lie in (0,1), got {lam}")
    if not 0.0 < a < 1.0:
        raise HypothesisError(f"a must lie in (0,1), got {a}")
    omega = SchwarzCandidate.moebius_integrand(a, order - 2 if order >= 3 else order)
    v = v_integral(a)

    # z/f = 1 - (1 + lam v) z + lam z * ∫_0^z omega
    prim = omega.series.integrate0().truncate(order - 1)
    inv = (TruncatedSeries.from_coeffs([1.0, -(1.0 + lam * v)], order)
           + TruncatedSeries.from_coeffs(
               np.concatenate([[0.0], lam * prim.coeffs]), order))

    def evaluator(z, lam=lam, a=a, v=v):
        z = np.asarray(z, dtype=complex)
        integral_z_to_1 = v - (z / a + (a * a - 1.0) / (a * a) * np.log(1.0 + a * z))
        return z / (1.0 - z * (1.0 + lam * integral_z_to_1))

    def u_closed(z, lam=lam, a=a):
        z = np.asarray(z, dtype=complex)
        return -lam * z * z * (z + a) / (1.0 + a * z)

    return _build_map("f_a", lam, inv, evaluator, {"a": a}, u_closed)


def make_from_omega(lam: float, a2: complex, omega: SchwarzCandidate,
                    order: int = DEFAULT_ORDER) -> AnalyticMap:
    """General representation z/f = 1 - a2 z + lam z ∫_0^z omega(t) dt."""
    if not 0.0 < lam <= 1.0:
        raise HypothesisError(f"lambda must lie in (0,1], got {lam}")
    if omega.role != "omega":
        raise HypothesisError("make_from_omega needs a candidate with role 'omega'")
    oseries = omega.series
    if oseries is None:
        raise ValueError("omega must carry a series for the representation")
    prim = oseries.truncate(order - 2).integrate0()  # order-1
    inv = (TruncatedSeries.from_coeffs([1.0, -a2], order)
           + TruncatedSeries.from_coeffs(
               np.concatenate([[0.0], lam * prim.coeffs]), order))
    assert abs(inv[0] - 1.0) < 1e-15

    evaluator = None
    if omega.primitive is not None:
        def evaluator(z, lam=lam, a2=a2, prim_fn=omega.primitive):
            z = np.asarray(z, dtype=complex)
            # poles (denominator zeros) surface as inf/nan and are caught
            # by the callers' guards, not by a runtime warning here
            with np.errstate(divide="ignore", invalid="ignore"):
                return z / (1.0 - a2 * z + lam * z * prim_fn(z))

    u_closed = None
    if omega.evaluator is not None:
        def u_closed(z, lam=lam, om=omega.evaluator):
            z = np.asarray(z, dtype=complex)
            return -lam * z * z * om(z)

    label = omega.label or "omega"
    return _build_map("from_omega", lam, inv, evaluator,
                      {"a2": a2, "omega": label}, u_closed)


# ---------------------------------------------------------------------------
# Blaschke products
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlaschkeSpec:
    """Zero sequence and truncation length for a Blaschke product.

    kind 'B1': r_n = 1 - 2^(-4n), theta_n = 2^(-n)  (finite angular derivative
    everywhere); kind 'B2': r_n = 1 - 2^(-2n), theta_n = 2^(-n) (infinite
    angular derivative at 1); kind 'custom' uses an explicit zero list.
    """

    kind: str
    truncation: int
    custom_zeros: tuple = ()

    def __post_init__(self):
        if self.kind not in ("B1", "B2", "custom"):
            raise ValueError(f"unknown Blaschke kind {self.kind!r}")
        if self.truncation < 1:
            raise ValueError("truncation must be >= 1")
        if self.kind == "custom":
            zs = np.asarray(self.custom_zeros, dtype=complex)
            if zs.size == 0:
                raise ValueError("custom spec needs at least one zero")
            if np.any(np.abs(zs) >= 1.0):
                raise ValueError("all Blaschke zeros must satisfy |a_n| < 1")

    def zeros(self) -> np.ndarray:
        """Retained zeros a_n = r_n e^{i theta_n}, n = 1..truncation."""
        if self.kind == "custom":
            return np.asarray(self.custom_zeros, dtype=complex)[: self.truncation]
        n = np.arange(1, self.truncation + 1, dtype=float)
        theta = 2.0 ** (-n)
        if self.kind == "B1":
            r = 1.0 - 2.0 ** (-4.0 * n)
        else:
            r = 1.0 - 2.0 ** (-2.0 * n)
        return r * np.exp(1j * theta)

    def radial_parts(self) -> np.ndarray:
        return np.abs(self.zeros())

    def gaps(self) -> np.ndarray:
        """Exact 1 - r_n for the retained zeros (no cancellation for built-ins)."""
        if self.kind == "custom":
            return 1.0 - np.abs(np.asarray(self.custom_zeros,
                                           dtype=complex)[: self.truncation])
        n = np.arange(1, self.truncation + 1, dtype=float)
        return 2.0 ** (-(4.0 if self.kind == "B1" else 2.0) * n)

    def zero_angles(self) -> np.ndarray:
        if self.kind == "custom":
            return np.angle(np.asarray(self.custom_zeros,
                                       dtype=complex)[: self.truncation])
        return 2.0 ** (-np.arange(1, self.truncation + 1, dtype=float))

    def blaschke_sum(self) -> float:
        """sum (1 - r_n) over retained zeros (finite, monotone in truncation)."""
        return float(np.sum(1.0 - self.radial_parts()))

    def tail_bound(self) -> float:
        """Exact geometric tail sum_{n > truncation} (1 - r_n); 0 for custom."""
        n = self.truncation
        if self.kind == "B1":
            return 16.0 ** (-n) / 15.0
        if self.kind == "B2":
            return 4.0 ** (-n) / 3.0
        return 0.0

    @classmethod
    def b1(cls, truncation: int = 40) -> "BlaschkeSpec":
        return cls("B1", truncation)

    @classmethod
    def b2(cls, truncation: int = 50) -> "BlaschkeSpec":
        return cls("B2", truncation)


def blaschke_eval(spec: BlaschkeSpec, z):
    """Truncated product z * prod (|a_n|/a_n)(a_n - z)/(1 - conj(a_n) z)."""
    z = np.asarray(z, dtype=complex)
    out = z.astype(complex).copy() if z.ndim else np.asarray(z, dtype=complex).copy()
    for an in spec.zeros():
        out = out * (abs(an) / an) * (an - z) / (1.0 - np.conj(an) * z)
    if out.ndim == 0:
        return complex(out)
    return out
