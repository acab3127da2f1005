"""Planar harmonic shears F = H + conj(G) built from vanishing-a2 members.

H must come from the subclass with f''(0) = 0, so z/H = 1 + lam z ∫ omega
and H'(z) = (1 - lam z^2 omega(z)) / (1 + lam z ∫_0^z omega)^2.  The two
certificates check the close-to-convexity criteria: a dilatation bound of
(1-2lam-lam^2)/(1+lam)^2 for lam <= sqrt(2)-1, and an arcsin phase budget
arcsin|omega_F| + 3 arcsin(lam r^2) <= pi/2 for lam <= 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import HypothesisError
from .maps import AnalyticMap, SchwarzCandidate, a_bound, b_bound
from .membership import SamplingPlan
from .series import TruncatedSeries

__all__ = [
    "HarmonicMap", "HarmonicCertificate",
    "build_harmonic", "jacobian", "certify_T42", "certify_T43",
]


@dataclass(frozen=True)
class HarmonicMap:
    """F = H + conj(G) with dilatation omega_F = G'/H', omega_F(0) = 0."""

    H: AnalyticMap
    G_series: TruncatedSeries
    dilatation: SchwarzCandidate
    lam: float

    def h_prime(self, z):
        return self.H.derivative(z)

    def g_prime(self, z):
        return self.dilatation(z) * self.H.derivative(z)

    def __call__(self, z):
        return self.H(z) + np.conj(self.G_series.eval(z))


@dataclass(frozen=True)
class HarmonicCertificate:
    theorem: str                  # T42 | T43
    bound_used: float
    sup_dilatation: float
    grid_min_margin: float
    status: str                   # CERTIFIED | FAILED
    notes: tuple = ()

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "bound_used": self.bound_used,
            "sup_dilatation": self.sup_dilatation,
            "grid_min_margin": self.grid_min_margin,
            "status": self.status,
            "notes": list(self.notes),
        }


def _h_prime_series(H: AnalyticMap) -> TruncatedSeries:
    """Series of H' from H = z * (H/z): H' = s + z s'."""
    s = H.series
    zsp = TruncatedSeries(np.concatenate(
        [[0.0 + 0.0j], (np.arange(1, s.coeffs.size, dtype=complex) * s.coeffs[1:])]))
    return s + zsp


def build_harmonic(H: AnalyticMap, omega_f: SchwarzCandidate) -> HarmonicMap:
    """Integrate G' = omega_F * H' from 0 and assemble the harmonic map."""
    if abs(H.a2) > 1e-10:
        raise HypothesisError(
            f"H has a2 = {H.a2}: the construction needs f''(0) = 0")
    series = omega_f.series
    if series is None:
        raise ValueError("omega_F must carry a series")
    if abs(series[0]) > 1e-12 or abs(complex(omega_f(0.0 + 0.0j))) > 1e-12:
        raise HypothesisError("omega_F(0) must vanish")
    hp = _h_prime_series(H)
    g_series = series.truncate(hp.order).mul(hp).truncate(hp.order - 1).integrate0()
    return HarmonicMap(H=H, G_series=g_series, dilatation=omega_f, lam=H.lam)


def jacobian(F: HarmonicMap, z):
    """J_F = |H'|^2 - |G'|^2; positive iff sense-preserving at z."""
    hp = F.h_prime(z)
    gp = F.g_prime(z)
    out = np.abs(hp) ** 2 - np.abs(gp) ** 2
    if np.ndim(z) == 0:
        return float(out)
    return out


def _sup_dilatation(F: HarmonicMap, plan: SamplingPlan) -> float:
    best = 0.0
    for r in plan.radii:
        z = plan.circle(r)
        best = max(best, float(np.max(np.abs(F.dilatation(z)))))
    return best


def certify_T42(F: HarmonicMap, plan: SamplingPlan | None = None) -> HarmonicCertificate:
    """Close-to-convexity via the (1-2lam-lam^2)/(1+lam)^2 dilatation bound.

    Verifies, beyond the hypothesis bound: the pointwise comparison
    Re{zH'/H} > |omega_F zH'/H| on the grid, and the proof's radial floor
    M >= A(r, lam) circle by circle.  Starlikeness of H for lam <= sqrt(2)-1
    is assumed, not re-verified.
    """
    lam = F.lam
    if not 0.0 < lam <= math.sqrt(2.0) - 1.0 + 1e-15:
        raise HypothesisError(
            f"certify_T42 needs lambda in (0, sqrt(2)-1], got {lam}")
    plan = plan or SamplingPlan()
    tol = plan.tolerance
    bound = a_bound(1.0, lam)
    sup_w = _sup_dilatation(F, plan)
    notes = ["starlikeness of H assumed for lambda <= sqrt(2)-1"]

    if sup_w > bound + tol:
        notes.append("dilatation exceeds the admissible bound")
        return HarmonicCertificate("T42", bound, sup_w, math.nan, "FAILED",
                                   tuple(notes))

    min_margin = math.inf
    chain_ok = True
    for r in plan.radii:
        z = plan.circle(r)
        q = F.H.inverse_eval(z)                      # 1 + lam z ∫ omega
        dq = _poly_derivative_eval(F.H, z)
        ratio = (q - z * dq) / q                     # z H'/H = (1 - lam z^2 w_H)/q
        w = F.dilatation(z)
        margin = ratio.real - np.abs(w * ratio)
        min_margin = min(min_margin, float(margin.min()))
        # proof chain: M = Re{zH'/H}/|zH'/H| >= A(r, lam), circle by circle
        m_val = ratio.real / np.abs(ratio)
        if float(np.min(m_val - a_bound(r, lam))) < -1e-9:
            chain_ok = False
    ok = min_margin >= -tol and chain_ok
    if not chain_ok:
        notes.append("proof chain M >= A(r, lambda) violated on the grid")
    return HarmonicCertificate("T42", bound, sup_w, min_margin,
                               "CERTIFIED" if ok else "FAILED", tuple(notes))


def certify_T43(F: HarmonicMap, plan: SamplingPlan | None = None) -> HarmonicCertificate:
    """Close-to-convexity via the arcsin phase budget for lam <= 1/2."""
    lam = F.lam
    if not 0.0 < lam <= 0.5 + 1e-15:
        raise HypothesisError(
            f"certify_T43 needs lambda in (0, 1/2], got {lam}")
    plan = plan or SamplingPlan()
    tol = plan.tolerance
    bound = b_bound(1.0, lam)
    sup_w = _sup_dilatation(F, plan)
    notes = []

    if sup_w > bound + tol:
        notes.append("dilatation exceeds the admissible bound")
        return HarmonicCertificate("T43", bound, sup_w, math.nan, "FAILED",
                                   tuple(notes))

    min_margin = math.inf
    for r in plan.radii:
        z = plan.circle(r)
        w_mod = np.abs(F.dilatation(z))
        if np.any(w_mod > 1.0 + 1e-12):
            raise HypothesisError("dilatation modulus exceeds 1")
        clipped = np.clip(w_mod, 0.0, 1.0)
        if np.any(w_mod > 1.0):
            notes.append(f"arcsin argument clamped on circle r={r}")
        budget = np.pi / 2.0 - (np.arcsin(clipped)
                                + 3.0 * math.asin(min(lam * r * r, 1.0)))
        min_margin = min(min_margin, float(budget.min()))
    ok = min_margin >= -tol
    return HarmonicCertificate("T43", bound, sup_w, min_margin,
                               "CERTIFIED" if ok else "FAILED", tuple(notes))


def _poly_derivative_eval(H: AnalyticMap, z):
    c = H.inverse_series.trimmed_coeffs()
    if c.size <= 1:
        return np.zeros_like(np.asarray(z, dtype=complex))
    dc = np.arange(1, c.size, dtype=complex) * c[1:]
    acc = np.full(np.shape(z), dc[-1], dtype=complex)
    for cc in dc[-2::-1]:
        acc = acc * z + cc
    return acc
