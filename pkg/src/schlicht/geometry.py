"""Convexity-in-a-direction certificates, subordination recovery, curves.

The convexity test is the Royster-Ziegler criterion: phi maps the disk onto
a domain convex in direction gamma iff Re P >= 0 on the disk for some
(mu, nu), with

    P(z) = e^{i(mu-gamma)} (1 - 2 z e^{-i mu} cos nu + z^2 e^{-2 i mu}) phi'(z).

Subordination of z/f to (1-w)(1-lam w) is decided by recovering the Schwarz
function pointwise from the quadratic lam psi^2 - (1+lam) psi + (1 - z/f) = 0,
continuing the branch radially outward from psi(0) = 0.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BranchTrackingError, SingularPointError
from .maps import AnalyticMap
from .membership import SamplingPlan
from .series import TruncatedSeries

__all__ = [
    "ConvexityCertificate", "SubordinationVerdict",
    "rz_functional", "certify_direction", "direction_scan",
    "refutation_max_min", "boundary_re_checks", "schwarz_recover",
    "recovered_psi_on_circle", "boundary_curve", "winding_containment",
]

#: Search-grid resolution over (mu, nu); failure margins of the threefold
#: counterexample exceed 1e-3 at this density.
MU_COUNT = 128
NU_COUNT = 65

#: Discriminant moduli below this flag a branch point of the recovered psi.
BRANCH_EPS = 1e-10


def _worker_count() -> int:
    env = os.environ.get("SCHLICHT_THREADS")
    cpus = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(cpus, int(env)))
        except ValueError:
            return cpus
    return cpus


@dataclass(frozen=True)
class ConvexityCertificate:
    gamma: float
    mu: float
    nu: float
    min_re: float
    status: str                  # CERTIFIED | FAILED
    grid_points: int = 0

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma, "mu": self.mu, "nu": self.nu,
            "min_re": self.min_re, "status": self.status,
            "grid_points": self.grid_points,
        }


@dataclass(frozen=True)
class SubordinationVerdict:
    status: str                  # SUBORDINATE | NOT_SUBORDINATE | UNDECIDED
    witness_kind: Optional[str] = None   # modulus_excess | branch_point | ...
    witness_point: Optional[complex] = None
    witness_value: Optional[float] = None
    residual: Optional[float] = None
    schwarz_series: Optional[TruncatedSeries] = None
    notes: tuple = ()

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "witness_kind": self.witness_kind,
            "witness_point": (None if self.witness_point is None else
                              [self.witness_point.real, self.witness_point.imag]),
            "witness_value": self.witness_value,
            "residual": self.residual,
            "schwarz_coeffs": (None if self.schwarz_series is None else
                               [[c.real, c.imag]
                                for c in self.schwarz_series.coeffs[:17]]),
            "notes": list(self.notes),
        }


def _derivative_of(phi) -> Callable:
    if isinstance(phi, AnalyticMap):
        return phi.derivative
    if hasattr(phi, "derivative"):
        return phi.derivative
    if callable(phi):
        return phi
    raise TypeError("phi must be an AnalyticMap, carry .derivative, or be a "
                    "derivative evaluator itself")


def rz_functional(phi, mu: float, nu: float, gamma: float, z):
    """The Royster-Ziegler integrand P_{mu,nu,gamma,phi}(z)."""
    dphi = _derivative_of(phi)
    zs = np.asarray(z, dtype=complex)
    emu = np.exp(-1j * mu)
    pref = np.exp(1j * (mu - gamma))
    val = pref * (1.0 - 2.0 * zs * emu * math.cos(nu) + (zs * emu) ** 2) * dphi(zs)
    if np.ndim(z) == 0:
        return complex(val)
    return val


def _search_angles(mu_count: int = MU_COUNT, nu_count: int = NU_COUNT):
    mus = np.linspace(0.0, 2.0 * np.pi, mu_count, endpoint=False)
    nus = np.linspace(0.0, np.pi, nu_count)
    return mus, nus


def _grid_derivative_moments(phi, plan: SamplingPlan):
    """phi', z phi', z^2 phi' on the outermost circle of the plan.

    Re P is harmonic in z, so its infimum over the closed disk of radius
    max(plan.radii) is attained on that bounding circle; scanning the
    interior circles would only add redundant (never smaller) samples.
    """
    dphi = _derivative_of(phi)
    zs = plan.circle(max(plan.radii))
    d = dphi(zs)
    return zs, d, zs * d, zs * zs * d


def _min_re_table(phi, gammas: np.ndarray, plan: SamplingPlan,
                  mu_count: int, nu_count: int) -> np.ndarray:
    """min over the z-grid of Re P, indexed [gamma, mu, nu].

    For fixed mu the (mu,nu)-dependence is affine in cos(nu) and the gamma
    dependence is a pure phase, so the scan batches as dense numpy tensors;
    mu-chunks run on a small thread pool (numpy releases the GIL).
    """
    mus, nus = _search_angles(mu_count, nu_count)
    _, a0, a1, a2 = _grid_derivative_moments(phi, plan)
    cosnu = np.cos(nus)
    out = np.empty((gammas.size, mus.size, nus.size), dtype=float)

    def fill(mu_idx: int) -> None:
        mu = mus[mu_idx]
        emu = np.exp(-1j * mu)
        base = a0 + (emu * emu) * a2                       # (M,)
        tilt = emu * a1                                    # (M,)
        alphas = mu - gammas                               # (gamma,)
        ca, sa = np.cos(alphas), np.sin(alphas)
        # Re(e^{i alpha} (base - 2 cos(nu) tilt)) splits into two rank-2
        # products, leaving only the (gamma, nu, M) min to materialize.
        rbase = np.outer(ca, base.real) - np.outer(sa, base.imag)  # (g, M)
        rtilt = np.outer(ca, tilt.real) - np.outer(sa, tilt.imag)  # (g, M)
        re_part = (rbase[:, None, :]
                   - (2.0 * cosnu)[None, :, None] * rtilt[:, None, :])
        out[:, mu_idx, :] = re_part.min(axis=2)

    workers = _worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(fill, range(mus.size)))
    else:
        for i in range(mus.size):
            fill(i)
    return out


def certify_direction(phi, gamma: float, plan: SamplingPlan | None = None,
                      mu_count: int = MU_COUNT, nu_count: int = NU_COUNT,
                      tolerance: float = 1e-9) -> ConvexityCertificate:
    """Search (mu, nu) for a grid certificate Re P >= -tolerance.

    Returns the first certified pair in scan order (mu outer, nu inner), or
    FAILED with the best pair found.  A FAILED result means "no certificate
    at this resolution", not a proof of non-convexity.
    """
    plan = plan or SamplingPlan.coarse()
    certs = direction_scan(phi, [gamma], plan, mu_count, nu_count, tolerance)
    return certs[0]


def direction_scan(phi, gammas: Sequence[float],
                   plan: SamplingPlan | None = None,
                   mu_count: int = MU_COUNT, nu_count: int = NU_COUNT,
                   tolerance: float = 1e-9) -> list:
    """Vectorized certify_direction over many directions at once."""
    plan = plan or SamplingPlan.coarse()
    gam = np.asarray(list(gammas), dtype=float)
    table = _min_re_table(phi, gam, plan, mu_count, nu_count)
    mus, nus = _search_angles(mu_count, nu_count)
    dphi0 = complex(_derivative_of(phi)(np.asarray(0.0 + 0.0j)))
    npoints = plan.angles_per_circle

    certs = []
    for gi, gamma in enumerate(gam):
        grid = table[gi]
        found = None
        for mi in range(mus.size):
            for ni in range(nus.size):
                if grid[mi, ni] >= -tolerance:
                    p0 = (np.exp(1j * (mus[mi] - gamma)) * dphi0).real
                    if p0 > 0.0:
                        found = (mi, ni)
                        break
            if found:
                break
        if found:
            mi, ni = found
            certs.append(ConvexityCertificate(
                gamma=float(gamma), mu=float(mus[mi]), nu=float(nus[ni]),
                min_re=float(grid[mi, ni]), status="CERTIFIED",
                grid_points=npoints))
        else:
            mi, ni = np.unravel_index(int(np.argmax(grid)), grid.shape)
            certs.append(ConvexityCertificate(
                gamma=float(gamma), mu=float(mus[mi]), nu=float(nus[ni]),
                min_re=float(grid[mi, ni]), status="FAILED",
                grid_points=npoints))
    return certs


def refutation_max_min(phi, gammas: Sequence[float],
                       plan: SamplingPlan | None = None,
                       mu_count: int = MU_COUNT,
                       nu_count: int = NU_COUNT) -> float:
    """max over (gamma, mu, nu) of the grid min of Re P.

    A value < -1e-3 certifies, at resolution, that no searched pair comes
    close to a certificate for any requested direction.
    """
    plan = plan or SamplingPlan.coarse()
    gam = np.asarray(list(gammas), dtype=float)
    table = _min_re_table(phi, gam, plan, mu_count, nu_count)
    return float(table.max())


def boundary_re_checks(lam: float, theta_count: int = 4096,
                       x_count: int = 1024,
                       p_values: Sequence[float] = (0.5, 1.0)) -> dict:
    """Grid minima of the two boundary positivity expressions.

    First: Re N(e^{i t}) with its analytic floor (1-lam)^3.  Second: the
    degree-two-in-x factor (1-lam p)(1+4 lam p+lam^2 p^2+(1+lam p)^2 x
    - 2 lam p x^2) over x = Re(s^2) in [-1,1] for each requested p.
    """
    t = np.linspace(0.0, 2.0 * np.pi, theta_count, endpoint=False)
    re_n = (1.0 - lam ** 3 - 2.0 * lam * (1.0 - lam) * np.cos(t)
            - lam * (1.0 - lam) * np.cos(2.0 * t))
    x = np.linspace(-1.0, 1.0, x_count)
    factor_minima = {}
    for p in p_values:
        lp = lam * p
        expr = (1.0 - lp) * (1.0 + 4.0 * lp + lp * lp
                             + (1.0 + lp) ** 2 * x - 2.0 * lp * x * x)
        factor_minima[p] = float(expr.min())
    return {
        "re_n_min": float(re_n.min()),
        "re_n_floor": (1.0 - lam) ** 3,
        "factor_minima": factor_minima,
    }


# ---------------------------------------------------------------------------
# Subordination by Schwarz-function recovery
# ---------------------------------------------------------------------------

def _psi_series(f: AnalyticMap, lam: float) -> TruncatedSeries:
    """Series of psi from (1+lam) psi = (1 - q) + lam psi^2, order by order."""
    q = f.inverse_series
    n = q.order
    rhs0 = TruncatedSeries.one(n) - q          # 1 - q, vanishes at 0
    psi = TruncatedSeries.zero(n)
    for _ in range(n + 1):
        psi = (rhs0 + lam * psi.mul(psi)).scale(1.0 / (1.0 + lam))
    return psi


def schwarz_recover(f: AnalyticMap, lam: float,
                    plan: SamplingPlan | None = None,
                    angle_count: int = 4096,
                    radial_steps: int = 1024,
                    modulus_tol: float = 1e-9,
                    residual_tol: float = 1e-8) -> SubordinationVerdict:
    """Decide whether z/f is subordinate to (1-w)(1-lam w).

    Solves lam psi^2 - (1+lam) psi + (1 - z/f) = 0 along each radius with the
    branch continued from psi(0) = 0.  Witnesses: a discriminant zero inside
    the disk (branch point) or |psi| > 1 + 1e-9 at a tracked point (modulus
    excess, reported at the maximal excess, ties broken by scan order).
    """
    if not 0.0 < lam <= 1.0:
        raise ValueError(f"lambda must lie in (0,1], got {lam}")
    if plan is not None:
        angle_count = plan.angles_per_circle
    angles = np.linspace(0.0, 2.0 * np.pi, angle_count, endpoint=False)
    eia = np.exp(1j * angles)
    one_lam = 1.0 + lam

    psi_prev = np.zeros(angle_count, dtype=complex)
    branch_point = None
    excess_val = 0.0
    excess_point = None
    residual_max = 0.0
    psi_on_last = None
    notes = []

    for k in range(1, radial_steps):
        r = k / radial_steps
        z = r * eia
        q = f.inverse_eval(z)
        disc = one_lam * one_lam - 4.0 * lam * (1.0 - q)
        small = np.abs(disc) < BRANCH_EPS
        if branch_point is None and np.any(small):
            j = int(np.nonzero(small)[0][0])
            branch_point = complex(z[j])
        root = np.sqrt(disc)
        cand_a = (one_lam - root) / (2.0 * lam)
        cand_b = (one_lam + root) / (2.0 * lam)
        take_b = np.abs(cand_b - psi_prev) < np.abs(cand_a - psi_prev)
        psi = np.where(take_b, cand_b, cand_a)
        res = np.abs((1.0 - psi) * (1.0 - lam * psi) - q)
        residual_max = max(residual_max, float(res.max()))
        mod = np.abs(psi)
        over = mod > 1.0 + modulus_tol
        if np.any(over):
            j = int(np.argmax(np.where(over, mod, -np.inf)))
            if mod[j] - 1.0 > excess_val:
                excess_val = float(mod[j] - 1.0)
                excess_point = complex(z[j])
        psi_prev = psi
        psi_on_last = psi

    if not np.all(np.isfinite(psi_on_last)):
        raise BranchTrackingError("branch continuation produced non-finite values")

    ser = _psi_series(f, lam)

    if branch_point is not None:
        return SubordinationVerdict(
            status="NOT_SUBORDINATE", witness_kind="branch_point",
            witness_point=branch_point, residual=residual_max,
            schwarz_series=ser,
            notes=("discriminant modulus < 1e-10 inside the disk",))
    if excess_point is not None:
        return SubordinationVerdict(
            status="NOT_SUBORDINATE", witness_kind="modulus_excess",
            witness_point=excess_point, witness_value=1.0 + excess_val,
            residual=residual_max, schwarz_series=ser)
    if residual_max < residual_tol:
        return SubordinationVerdict(
            status="SUBORDINATE", residual=residual_max, schwarz_series=ser,
            witness_kind="schwarz_series")
    return SubordinationVerdict(
        status="UNDECIDED", residual=residual_max, schwarz_series=ser,
        notes=(f"composition residual {residual_max:.3e} above tolerance",))


def recovered_psi_on_circle(f: AnalyticMap, lam: float, r: float,
                            angle_count: int = 4096,
                            radial_steps: int = 1024) -> np.ndarray:
    """The branch-tracked psi sampled on |z| = r (r quantized to the march)."""
    angles = np.linspace(0.0, 2.0 * np.pi, angle_count, endpoint=False)
    eia = np.exp(1j * angles)
    one_lam = 1.0 + lam
    psi = np.zeros(angle_count, dtype=complex)
    k_stop = max(1, min(radial_steps - 1, round(r * radial_steps)))
    for k in range(1, k_stop + 1):
        z = (k / radial_steps) * eia
        q = f.inverse_eval(z)
        disc = one_lam * one_lam - 4.0 * lam * (1.0 - q)
        root = np.sqrt(disc)
        cand_a = (one_lam - root) / (2.0 * lam)
        cand_b = (one_lam + root) / (2.0 * lam)
        psi = np.where(np.abs(cand_b - psi) < np.abs(cand_a - psi), cand_b, cand_a)
    return psi


# ---------------------------------------------------------------------------
# Image curves and containment
# ---------------------------------------------------------------------------

def boundary_curve(f: AnalyticMap, r: float, n: int = 1024) -> np.ndarray:
    """f sampled on |z| = r: n points, cyclically closed (no repeated point)."""
    if not 0.0 < r < 1.0:
        raise ValueError("radius must lie in (0,1)")
    if n < 3:
        raise ValueError("need at least 3 samples")
    t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    z = r * np.exp(1j * t)
    q = f.inverse_eval(z)
    if np.any(np.abs(q) < 1e-13):
        bad = z[np.abs(q) < 1e-13][0]
        raise SingularPointError(f"pole of {f.name} on the sampled circle",
                                 point=complex(bad))
    return f(z)


def winding_containment(curve: np.ndarray, w: complex,
                        boundary_tol: float = 1e-9) -> str:
    """Winding-number containment test for a closed polyline.

    Returns INSIDE when the winding number is +-1, OUTSIDE when 0, and
    ON_BOUNDARY when w lies within boundary_tol of a segment.
    """
    pts = np.asarray(curve, dtype=complex)
    if pts.size >= 2 and abs(pts[0] - pts[-1]) < 1e-15:
        pts = pts[:-1]
    if pts.size < 3:
        raise ValueError("curve must contain at least 3 distinct points")

    a = pts - w
    b = np.roll(pts, -1) - w
    # distance from w to each closed segment
    seg = b - a
    seg_len2 = np.abs(seg) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.clip(np.where(seg_len2 > 0,
                             ((-a).real * seg.real + (-a).imag * seg.imag) / seg_len2,
                             0.0), 0.0, 1.0)
    nearest = a + t * seg
    if float(np.min(np.abs(nearest))) < boundary_tol:
        return "ON_BOUNDARY"

    cross = a.real * b.imag - a.imag * b.real
    dot = a.real * b.real + a.imag * b.imag
    total = float(np.sum(np.arctan2(cross, dot)))
    wind = round(total / (2.0 * np.pi))
    return "INSIDE" if wind != 0 else "OUTSIDE"
