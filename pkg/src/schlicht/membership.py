"""Class-membership functional, grid suprema and boundary probes.

The defining functional is U_f = (z/f)^2 f' - 1 = q - z q' - 1 with q = z/f.
Its Maclaurin series therefore has the closed coefficient rule
u_n = (1 - n) q_n for n >= 1, which is what :func:`u_series` uses; no
numerical differentiation is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import SingularPointError
from .maps import AnalyticMap, BlaschkeSpec, SchwarzCandidate, blaschke_eval
from .series import TruncatedSeries

__all__ = [
    "SamplingPlan", "MembershipReport", "JuliaProbe",
    "u_functional", "u_series", "sup_abs_u", "membership_verdict",
    "l_phi", "julia_quotient", "julia_quotient_blaschke", "blaschke_gsum",
    "dyadic_radii",
]

#: |z/f| below this is treated as a pole of f hit by the grid.
POLE_EPS = 1e-13


def dyadic_radii(count: int = 20) -> tuple:
    """r_j = 1 - 2^(-j), j = 1..count."""
    return tuple(1.0 - 2.0 ** (-j) for j in range(1, count + 1))


@dataclass(frozen=True)
class SamplingPlan:
    """Deterministic polar grid used by suprema, certificates and probes."""

    radii: tuple = field(default_factory=dyadic_radii)
    angles_per_circle: int = 4096
    tolerance: float = 1e-9

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.size == 0 or np.any(r <= 0.0) or np.any(r >= 1.0):
            raise ValueError("radii must lie strictly inside (0,1)")
        if np.any(np.diff(r) <= 0.0):
            raise ValueError("radii must be strictly increasing")
        if self.angles_per_circle < 64:
            raise ValueError("need at least 64 angles per circle")

    @property
    def r_max(self) -> float:
        return self.radii[-1]

    def angles(self) -> np.ndarray:
        return np.linspace(0.0, 2.0 * np.pi, self.angles_per_circle, endpoint=False)

    def circle(self, r: float) -> np.ndarray:
        return r * np.exp(1j * self.angles())

    def point_count(self) -> int:
        return len(self.radii) * self.angles_per_circle

    @classmethod
    def coarse(cls, radii_count: int = 10, angles: int = 512,
               tolerance: float = 1e-9) -> "SamplingPlan":
        return cls(radii=dyadic_radii(radii_count), angles_per_circle=angles,
                   tolerance=tolerance)


@dataclass(frozen=True)
class MembershipReport:
    """Grid supremum of |U_f| plus the verdict against a class level."""

    sup_estimate: float
    arg_max: complex
    per_circle_sup: tuple          # ((r, sup), ...)
    verdict: str                   # IN | OUT | UNDECIDED
    margin: float
    level: Optional[float] = None
    witness: Optional[complex] = None
    skipped_points: tuple = ()
    notes: tuple = ()

    def to_dict(self) -> dict:
        return {
            "sup_estimate": self.sup_estimate,
            "arg_max": [self.arg_max.real, self.arg_max.imag],
            "per_circle_sup": [[r, s] for r, s in self.per_circle_sup],
            "verdict": self.verdict,
            "margin": self.margin,
            "level": self.level,
            "witness": (None if self.witness is None
                        else [self.witness.real, self.witness.imag]),
            "skipped_points": [[w.real, w.imag] for w in self.skipped_points],
            "notes": list(self.notes),
        }


def u_functional(f: AnalyticMap, z):
    """U_f(z); closed form when the family carries one, else series Horner.

    U_f(0) = 0 by normalization.  Raises SingularPointError at poles of f
    (|z/f| < 1e-13).
    """
    zs = np.asarray(z, dtype=complex)
    q = f.inverse_eval(zs)
    bad = np.abs(q) < POLE_EPS
    if np.any(bad):
        pt = zs[bad][0] if zs.ndim else complex(zs)
        raise SingularPointError(f"U_f evaluated at a pole of {f.name}", point=pt)
    if f.u_closed is not None:
        out = f.u_closed(zs)
    else:
        out = _u_series_eval(f, zs)
    if np.ndim(z) == 0:
        return complex(out)
    return out


def u_series(f: AnalyticMap) -> TruncatedSeries:
    """Series of U_f = q - z q' - 1: coefficients (1-n) q_n, constant q_0 - 1."""
    q = f.inverse_series.coeffs
    n = np.arange(q.size, dtype=float)
    u = (1.0 - n) * q
    u[0] = q[0] - 1.0
    return TruncatedSeries(u)


def _u_series_eval(f: AnalyticMap, z):
    coeffs = u_series(f).trimmed_coeffs(tol=0.0)
    acc = np.full(np.shape(z), coeffs[-1], dtype=complex)
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


def _grid_scan(f: AnalyticMap, plan: SamplingPlan):
    """Per-circle suprema of |U_f| with pole guarding."""
    per_circle = []
    skipped = []
    best = -1.0
    best_z = 0.0 + 0.0j
    use_closed = f.u_closed is not None
    for r in plan.radii:
        z = plan.circle(r)
        q = f.inverse_eval(z)
        ok = np.abs(q) >= POLE_EPS
        if not np.all(ok):
            skipped.extend(z[~ok].tolist())
        vals = f.u_closed(z[ok]) if use_closed else _u_series_eval(f, z[ok])
        mod = np.abs(vals)
        if mod.size == 0:
            continue
        i = int(np.argmax(mod))
        per_circle.append((float(r), float(mod[i])))
        if mod[i] > best:
            best = float(mod[i])
            best_z = complex(z[ok][i])
    return per_circle, best, best_z, tuple(skipped)


def sup_abs_u(f: AnalyticMap, plan: SamplingPlan | None = None) -> MembershipReport:
    """Grid supremum of |U_f|; verdict stays UNDECIDED (no level given)."""
    plan = plan or SamplingPlan()
    per_circle, best, best_z, skipped = _grid_scan(f, plan)
    return MembershipReport(
        sup_estimate=best, arg_max=best_z, per_circle_sup=tuple(per_circle),
        verdict="UNDECIDED", margin=math.nan, skipped_points=skipped)


def _tail_estimate(f: AnalyticMap) -> float:
    """Geometric tail bound sum_{n>N} |u_n| from the last nonzero coefficients."""
    c = np.abs(u_series(f).coeffs)
    nz = np.nonzero(c > 0.0)[0]
    if nz.size == 0:
        return 0.0
    m = nz[-1]
    if m < f.order():
        return 0.0  # exactly polynomial at this truncation
    # ratio of the last few nonzero coefficients, extrapolated geometrically
    lo = max(m - 4, 1)
    ratios = [c[k] / c[k - 1] for k in range(lo, m + 1) if c[k - 1] > 0.0]
    if not ratios:
        return math.inf
    rho = max(ratios)
    if rho >= 0.999:
        return math.inf
    return float(c[m] * rho / (1.0 - rho))


def membership_verdict(f: AnalyticMap, lam: float,
                       plan: SamplingPlan | None = None) -> MembershipReport:
    """Decide |U_f| < lam on the disk at grid resolution.

    OUT needs a concrete grid witness with |U_f| >= lam.  IN is certified
    numerically: the per-circle suprema must extrapolate (power-law in r) to
    a limit <= lam, the grid sup must clear lam by the plan tolerance, and
    the coefficient-tail estimate must not push the sup back over lam.
    """
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"membership level must lie in (0,1], got {lam}")
    plan = plan or SamplingPlan()
    per_circle, best, best_z, skipped = _grid_scan(f, plan)
    notes = []

    if best >= lam:
        return MembershipReport(
            sup_estimate=best, arg_max=best_z, per_circle_sup=tuple(per_circle),
            verdict="OUT", margin=best - lam, level=lam, witness=best_z,
            skipped_points=skipped)

    # Power-law extrapolation sup(r) ~ C r^p from the last two circles.
    (r1, s1), (r2, s2) = per_circle[-2], per_circle[-1]
    extrapolated = s2
    if s1 > 0.0 and s2 > 0.0 and s2 >= s1:
        p = math.log(s2 / s1) / math.log(r2 / r1) if r2 != r1 else 0.0
        p = min(max(p, 0.0), 4.0 * f.order())
        extrapolated = s2 / (r2 ** p)
    tail = _tail_estimate(f)
    if math.isinf(tail):
        notes.append("coefficient tail not summable by geometric extrapolation")

    in_ok = (best < lam - plan.tolerance
             and extrapolated <= lam + plan.tolerance
             and not math.isinf(tail)
             and best + tail * r2 ** (f.order() + 1) < lam)
    verdict = "IN" if in_ok else "UNDECIDED"
    return MembershipReport(
        sup_estimate=best, arg_max=best_z, per_circle_sup=tuple(per_circle),
        verdict=verdict, margin=lam - best, level=lam,
        skipped_points=skipped, notes=tuple(notes))


def l_phi(phi: SchwarzCandidate, lam: float, z):
    """|-(1+lam)(phi - z phi') + lam phi (phi - 2 z phi')|.

    The boundary-limit functional from the Julia-quotient bound; reduces to
    lam |z|^2 for phi(z) = z.
    """
    zs = np.asarray(z, dtype=complex)
    p = phi(zs)
    dp = phi.derivative(zs)
    val = -(1.0 + lam) * (p - zs * dp) + lam * p * (p - 2.0 * zs * dp)
    out = np.abs(val)
    if np.ndim(z) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class JuliaProbe:
    """Radial Julia-quotient estimates (1-|phi(r zeta)|)/(1-r) with a verdict."""

    zeta: complex
    estimates: tuple                # ((r, value), ...)
    classification: str             # FINITE | DIVERGENT | UNDECIDED
    limit: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "zeta": [self.zeta.real, self.zeta.imag],
            "estimates": [[r, v] for r, v in self.estimates],
            "classification": self.classification,
            "limit": self.limit,
        }


def julia_quotient(phi: Callable, zeta: complex,
                   radii: Sequence[float] | None = None,
                   stabilization_window: int = 5,
                   stabilization_rtol: float = 1e-3,
                   divergence_ceiling: float = 1e6) -> JuliaProbe:
    """Angular-derivative probe: estimates (1-|phi(r zeta)|)/(1-r).

    FINITE when the last *stabilization_window* estimates agree to the
    relative tolerance; DIVERGENT when the sequence is still strictly growing
    at the largest radius (or blows past the ceiling); else UNDECIDED.
    """
    if abs(abs(zeta) - 1.0) > 1e-12:
        raise ValueError("zeta must be unimodular")
    rs = np.asarray(radii if radii is not None else dyadic_radii(20), dtype=float)
    vals = np.array([(1.0 - abs(phi(r * zeta))) / (1.0 - r) for r in rs])
    ests = tuple((float(r), float(v)) for r, v in zip(rs, vals))

    w = stabilization_window
    if vals.size >= w:
        window = vals[-w:]
        spread = np.max(window) - np.min(window)
        scale = max(abs(float(window[-1])), 1e-300)
        if spread / scale < stabilization_rtol:
            return JuliaProbe(zeta=complex(zeta), estimates=ests,
                              classification="FINITE", limit=float(vals[-1]))
        growing = bool(np.all(np.diff(window) > 0.0))
        if growing and (vals[-1] > divergence_ceiling or spread / scale >= stabilization_rtol):
            return JuliaProbe(zeta=complex(zeta), estimates=ests,
                              classification="DIVERGENT", limit=None)
    return JuliaProbe(zeta=complex(zeta), estimates=ests,
                      classification="UNDECIDED", limit=None)


def blaschke_gsum(spec: BlaschkeSpec, zeta: complex, terms: int | None = None) -> np.ndarray:
    """Partial sums of G(B, zeta) = sum (1-|a_n|)/|zeta - a_n|^2 (nondecreasing)."""
    if abs(abs(zeta) - 1.0) > 1e-12:
        raise ValueError("zeta must be unimodular")
    n_terms = terms if terms is not None else spec.truncation
    if n_terms < 1:
        raise ValueError("need at least one term")
    wide = BlaschkeSpec(spec.kind, max(n_terms, spec.truncation),
                        spec.custom_zeros)
    gaps = wide.gaps()[:n_terms]
    angles = wide.zero_angles()[:n_terms]
    # |zeta - a_n|^2 = (1-r_n)^2 + 4 r_n sin^2((theta_n - arg zeta)/2);
    # the direct form 1 - |a_n| cancels to zero once 1 - r_n < eps.
    dist2 = gaps ** 2 + 4.0 * (1.0 - gaps) * np.sin(
        0.5 * (angles - np.angle(complex(zeta)))) ** 2
    return np.cumsum(gaps / dist2)


def julia_quotient_blaschke(spec: BlaschkeSpec, zeta: complex,
                            radii: Sequence[float] | None = None,
                            **kwargs) -> JuliaProbe:
    """Julia probe of a truncated Blaschke product at a boundary point."""
    return julia_quotient(lambda z: blaschke_eval(spec, z), zeta, radii, **kwargs)
