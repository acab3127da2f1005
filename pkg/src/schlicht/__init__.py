"""schlicht: numerical probes for the disk class |(z/f)^2 f' - 1| < lambda.

Truncated power-series algebra, the concrete extremal/counterexample
families, grid membership verdicts, convexity-in-a-direction certificates,
subordination recovery, Blaschke boundary probes and harmonic shears.
"""

__version__ = "0.1.0"

from .series import TruncatedSeries, DEFAULT_ORDER
from .maps import (AnalyticMap, BlaschkeSpec, SchwarzCandidate,
                   make_f_theta, make_g_threefold, make_example32,
                   make_f_a, make_from_omega, blaschke_eval)
from .membership import (SamplingPlan, MembershipReport, u_functional,
                         u_series, sup_abs_u, membership_verdict)
from .geometry import (ConvexityCertificate, SubordinationVerdict,
                       rz_functional, certify_direction, schwarz_recover,
                       boundary_curve, winding_containment)
from .harmonic import (HarmonicMap, HarmonicCertificate, build_harmonic,
                       jacobian, certify_T42, certify_T43)

__all__ = [
    "__version__", "TruncatedSeries", "DEFAULT_ORDER",
    "AnalyticMap", "BlaschkeSpec", "SchwarzCandidate",
    "make_f_theta", "make_g_threefold", "make_example32", "make_f_a",
    "make_from_omega", "blaschke_eval",
    "SamplingPlan", "MembershipReport", "u_functional", "u_series",
    "sup_abs_u", "membership_verdict",
    "ConvexityCertificate", "SubordinationVerdict", "rz_functional",
    "certify_direction", "schwarz_recover", "boundary_curve",
    "winding_containment",
    "HarmonicMap", "HarmonicCertificate", "build_harmonic", "jacobian",
    "certify_T42", "certify_T43",
]
