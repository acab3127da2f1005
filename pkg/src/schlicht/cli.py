"""Command-line surface: one analysis per invocation, JSON report out.

Exit codes: 0 = analysis ran (verdicts, including negative ones, live in the
JSON payload); 2 = usage or descriptor parse error; 3 = numerical failure
(pole on a sampled circle, branch-tracking breakdown).
"""

from __future__ import annotations

import json
import math
import os
import re
import sys
import time

import click
import numpy as np

from . import __version__
from .errors import HypothesisError, SchlichtError
from .geometry import (boundary_curve, certify_direction, direction_scan,
                       schwarz_recover)
from .harmonic import build_harmonic, certify_T42, certify_T43, jacobian
from .maps import (BlaschkeSpec, SchwarzCandidate, delta, make_example32,
                   make_f_a, make_f_theta, make_from_omega, make_g_threefold,
                   v_integral, w_func)
from .membership import (SamplingPlan, blaschke_gsum, dyadic_radii,
                         julia_quotient_blaschke, membership_verdict,
                         sup_abs_u, u_series)
from .render import (curve_csv, curve_svg, scan_csv, write_curve_png,
                     write_scan_png, write_text_atomic)

SCHEMA_VERSION = 1

_MONOMIAL_RE = re.compile(
    r"^\s*(?P<coef>[-+]?\d*\.?\d+(?:[eE][-+]?\d+)?)?\s*\*?\s*"
    r"(?P<z>z)?(?:\^(?P<exp>\d+))?\s*$")
_MOEBIUS_TAG = "(z+a)/(1+az)"


def parse_omega(formula: str, a: float | None = None) -> SchwarzCandidate:
    """Parse the fixed omega grammar: monomials c*z^n and the Moebius tag."""
    if formula.replace(" ", "") == _MOEBIUS_TAG.replace(" ", ""):
        if a is None:
            raise click.UsageError(
                "omega tag '(z+a)/(1+az)' needs an 'a' parameter")
        return SchwarzCandidate.moebius_integrand(a)
    m = _MONOMIAL_RE.match(formula)
    if not m or (m.group("coef") is None and m.group("z") is None):
        raise click.UsageError(
            f"cannot parse omega formula {formula!r}: expected c*z^n or "
            f"'{_MOEBIUS_TAG}'")
    coef = float(m.group("coef")) if m.group("coef") is not None else 1.0
    if m.group("z") is None:
        n = 0
    else:
        n = int(m.group("exp")) if m.group("exp") is not None else 1
    return SchwarzCandidate.monomial(coef, n)


def resolve_family(spec: dict):
    """Build the AnalyticMap described by a function-spec record."""
    family = spec.get("family")
    if family is None:
        raise click.UsageError("function spec needs a 'family' field")
    lam = spec.get("lambda")

    def need(name):
        if spec.get(name) is None:
            raise click.UsageError(f"family {family!r} needs parameter '{name}'")
        return spec[name]

    try:
        if family == "f_theta":
            return make_f_theta(float(need("lambda")), float(need("theta")))
        if family == "g":
            return make_g_threefold()
        if family == "example32":
            return make_example32(float(need("lambda")), int(need("k")))
        if family == "f_a":
            return make_f_a(float(need("lambda")), float(need("a")))
        if family == "from_omega":
            omega = parse_omega(str(need("omega")), spec.get("a"))
            a2 = complex(spec.get("a2", 0.0))
            return make_from_omega(float(need("lambda")), a2, omega)
    except HypothesisError as exc:
        raise click.UsageError(str(exc))
    raise click.UsageError(f"unknown family {family!r}")


def make_plan(radii_count, angles, tolerance) -> SamplingPlan:
    kwargs = {}
    if radii_count is not None:
        kwargs["radii"] = dyadic_radii(radii_count)
    if angles is not None:
        kwargs["angles_per_circle"] = angles
    if tolerance is not None:
        kwargs["tolerance"] = tolerance
    return SamplingPlan(**kwargs)


def emit(command: str, result: dict, warnings: list,
         json_path: str | None, started: float) -> None:
    deterministic = os.environ.get("SCHLICHT_DETERMINISTIC", "") not in ("", "0")
    wall = 0 if deterministic else int((time.monotonic() - started) * 1000)
    envelope = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "wall_time_ms": wall,
        "result": result,
        "warnings": warnings,
    }
    text = json.dumps(envelope, indent=2) + "\n"
    if json_path:
        write_text_atomic(json_path, text)
    else:
        click.echo(text, nl=False)


def _spec_from_flags(spec_json, family, lam, theta, a, k, omega, a2) -> dict:
    if spec_json:
        try:
            spec = json.loads(spec_json)
        except json.JSONDecodeError as exc:
            raise click.UsageError(f"invalid --spec JSON: {exc}")
        if not isinstance(spec, dict):
            raise click.UsageError("--spec must be a JSON object")
        return spec
    spec = {"family": family, "lambda": lam, "theta": theta,
            "a": a, "k": k, "omega": omega, "a2": a2}
    return {key: val for key, val in spec.items() if val is not None}


def family_options(fn):
    for deco in (
        click.option("--spec", "spec_json", default=None,
                     help="Function descriptor as a JSON object."),
        click.option("--family", default=None,
                     type=click.Choice(["f_theta", "g", "example32", "f_a",
                                        "from_omega"])),
        click.option("--lambda", "lam", type=float, default=None),
        click.option("--theta", type=float, default=None),
        click.option("--a", type=float, default=None),
        click.option("--k", type=int, default=None),
        click.option("--omega", default=None,
                     help="omega formula: c*z^n or '(z+a)/(1+az)'."),
        click.option("--a2", type=float, default=None),
    ):
        fn = deco(fn)
    return fn


def plan_options(fn):
    for deco in (
        click.option("--radii-count", type=int, default=None),
        click.option("--angles", type=int, default=None),
        click.option("--tolerance", type=float, default=None),
    ):
        fn = deco(fn)
    return fn


@click.group()
@click.version_option(version=__version__)
def cli():
    """Numerical probes for the disk class defined by |(z/f)^2 f' - 1| < lambda."""


@cli.command()
@family_options
@plan_options
@click.option("--against", type=float, default=None,
              help="Class level to test; defaults to the family's lambda.")
@click.option("--json", "json_path", default=None, type=click.Path())
def membership(spec_json, family, lam, theta, a, k, omega, a2,
               radii_count, angles, tolerance, against, json_path):
    """Grid supremum of |U_f| and an IN/OUT/UNDECIDED verdict."""
    started = time.monotonic()
    spec = _spec_from_flags(spec_json, family, lam, theta, a, k, omega, a2)
    f = resolve_family(spec)
    plan = make_plan(radii_count, angles, tolerance)
    level = against if against is not None else spec.get("lambda", f.lam)
    if level is None:
        raise click.UsageError("no level: give --against or --lambda")
    report = membership_verdict(f, float(level), plan)
    emit("membership", {"function_spec": spec, **report.to_dict()},
         [], json_path, started)


@cli.command()
@family_options
@click.option("--order", "order_n", type=int, default=12,
              help="Highest coefficient index to report.")
@click.option("--json", "json_path", default=None, type=click.Path())
def coeffs(spec_json, family, lam, theta, a, k, omega, a2, order_n, json_path):
    """Taylor coefficients of f vs the geometric-sum bound."""
    started = time.monotonic()
    spec = _spec_from_flags(spec_json, family, lam, theta, a, k, omega, a2)
    f = resolve_family(spec)
    if order_n < 2 or order_n > f.order():
        raise click.UsageError(f"--order must lie in [2, {f.order()}]")
    rows = []
    lam_val = f.lam
    for n in range(2, order_n + 1):
        a_n = f.series[n - 1]
        bound = sum(lam_val ** j for j in range(n))
        rows.append({
            "n": n,
            "a_n": [a_n.real, a_n.imag],
            "abs_a_n": abs(a_n),
            "bound": bound,
            "within_bound": abs(a_n) <= bound + 1e-12,
        })
    u_coeffs = u_series(f).trimmed_coeffs(tol=1e-15)
    emit("coeffs", {
        "function_spec": spec,
        "a2": [f.a2.real, f.a2.imag],
        "coefficients": rows,
        "u_series_leading": [[c.real, c.imag] for c in u_coeffs[:13]],
    }, [], json_path, started)


def _scan_rows(lam_values, a_values):
    rows = []
    for lam in lam_values:
        bound = 1.0 + lam + lam * lam
        for a in a_values:
            v = v_integral(a)
            a3 = 1.0 + lam * (2.0 * v - a) + (lam * v) ** 2
            rows.append((lam, a, a3, bound, a3 - bound))
    return rows


@cli.command()
@click.option("--lambda", "lam", type=float, default=None)
@click.option("--a", type=float, default=None)
@click.option("--scan", is_flag=True, default=False)
@click.option("--lambda-min", type=float, default=0.280)
@click.option("--lambda-max", type=float, default=0.305)
@click.option("--lambda-step", type=float, default=0.0005)
@click.option("--csv", "csv_path", default=None, type=click.Path())
@click.option("--png", "png_path", default=None, type=click.Path())
@click.option("--json", "json_path", default=None, type=click.Path())
def counterexample(lam, a, scan, lambda_min, lambda_max, lambda_step,
                   csv_path, png_path, json_path):
    """Third-coefficient excess beyond 1+lambda+lambda^2, point or scan."""
    started = time.monotonic()
    if scan:
        lam_values = np.arange(lambda_min, lambda_max + 1e-12, lambda_step)
        a_values = np.array([0.3, 0.5, 0.7, 0.9, 0.99, 0.999, 0.9999, 0.99999])
        rows = _scan_rows(lam_values, a_values)
        if csv_path:
            write_text_atomic(csv_path, scan_csv(
                rows, ["lambda", "a", "a3", "bound", "excess"]))
        best = {}
        for lam_v, _a, _a3, _bound, excess in rows:
            best[lam_v] = max(best.get(lam_v, -math.inf), excess)
        positive = [lv for lv, ex in best.items() if ex > 0.0]
        negative = [lv for lv, ex in best.items() if ex <= 0.0 and
                    (not positive or lv > max(positive))]
        lo = max(positive) if positive else None
        hi = min(negative) if negative else None
        threshold = None if lo is None or hi is None else 0.5 * (lo + hi)
        if png_path:
            write_scan_png(png_path, np.array(sorted(best)),
                           np.array([best[lv] for lv in sorted(best)]), delta())
        emit("counterexample", {
            "mode": "scan",
            "lambda_grid": [float(x) for x in lam_values],
            "a_grid": [float(x) for x in a_values],
            "rows": len(rows),
            "threshold_bracket": [lo, hi],
            "threshold_estimate": threshold,
            "delta_reference": delta(),
        }, [], json_path, started)
        return

    if lam is None or a is None:
        raise click.UsageError("point mode needs --lambda and --a "
                               "(or use --scan)")
    from scipy.integrate import quad
    f = resolve_family({"family": "f_a", "lambda": lam, "a": a})
    a3_series = f.series[2]
    v_quad = quad(lambda t: (t + a) / (1.0 + a * t), 0.0, 1.0,
                  epsabs=1e-13, epsrel=1e-13)[0]
    a3_closed = 1.0 + lam * (2.0 * v_quad - a) + (lam * v_quad) ** 2
    bound = 1.0 + lam + lam * lam
    emit("counterexample", {
        "mode": "point",
        "lambda": lam,
        "a": a,
        "a3_series": [a3_series.real, a3_series.imag],
        "a3_closed": a3_closed,
        "bound": bound,
        "excess": a3_series.real - bound,
        "oracle_gap": abs(a3_series - a3_closed),
        "w": w_func(a),
        "v": v_integral(a),
        "delta_reference": delta(),
    }, [], json_path, started)


@cli.command()
@family_options
@plan_options
@click.option("--gamma", type=float, default=None,
              help="Single direction in [0, pi).")
@click.option("--scan-gammas", type=int, default=None,
              help="Scan this many directions over [0, pi).")
@click.option("--json", "json_path", default=None, type=click.Path())
def convexity(spec_json, family, lam, theta, a, k, omega, a2,
              radii_count, angles, tolerance, gamma, scan_gammas, json_path):
    """Royster-Ziegler certificate search for convexity in a direction."""
    started = time.monotonic()
    spec = _spec_from_flags(spec_json, family, lam, theta, a, k, omega, a2)
    f = resolve_family(spec)
    plan = (SamplingPlan.coarse() if radii_count is None and angles is None
            else make_plan(radii_count, angles, tolerance))
    if gamma is None and scan_gammas is None:
        raise click.UsageError("give --gamma or --scan-gammas")
    if gamma is not None:
        cert = certify_direction(f, gamma, plan)
        result = {"function_spec": spec, "certificates": [cert.to_dict()]}
    else:
        gammas = np.linspace(0.0, np.pi, scan_gammas, endpoint=False)
        certs = direction_scan(f, gammas, plan)
        result = {
            "function_spec": spec,
            "certificates": [c.to_dict() for c in certs],
            "certified_directions": [c.gamma for c in certs
                                     if c.status == "CERTIFIED"],
        }
    emit("convexity", result, [], json_path, started)


@cli.command()
@family_options
@click.option("--against", type=float, default=None,
              help="Subordination target parameter; defaults to family lambda.")
@click.option("--json", "json_path", default=None, type=click.Path())
def subordination(spec_json, family, lam, theta, a, k, omega, a2,
                  against, json_path):
    """Is z/f subordinate to (1-w)(1-lambda w)?  Schwarz-recovery verdict."""
    started = time.monotonic()
    spec = _spec_from_flags(spec_json, family, lam, theta, a, k, omega, a2)
    f = resolve_family(spec)
    level = against if against is not None else f.lam
    verdict = schwarz_recover(f, float(level))
    emit("subordination", {"function_spec": spec, **verdict.to_dict()},
         [], json_path, started)


@cli.command()
@click.option("--kind", type=click.Choice(["B1", "B2"]), required=True)
@click.option("--terms", type=int, default=None,
              help="Retained factors; defaults per kind (40 for B1, 50 for B2).")
@click.option("--zeta-angle", type=float, default=0.0)
@click.option("--json", "json_path", default=None, type=click.Path())
def blaschke(kind, terms, zeta_angle, json_path):
    """Boundary probes of the two dyadic-zero Blaschke products."""
    started = time.monotonic()
    spec = (BlaschkeSpec.b1(terms or 40) if kind == "B1"
            else BlaschkeSpec.b2(terms or 50))
    zeta = complex(np.exp(1j * zeta_angle))
    gsums = blaschke_gsum(spec, zeta)
    probe = julia_quotient_blaschke(spec, zeta)
    zeros = spec.zeros()
    emit("blaschke", {
        "kind": kind,
        "truncation": spec.truncation,
        "zeta": [zeta.real, zeta.imag],
        "gsum_partial": [float(x) for x in gsums],
        "gsum_final": float(gsums[-1]),
        "blaschke_sum": spec.blaschke_sum(),
        "tail_bound": spec.tail_bound(),
        "julia": probe.to_dict(),
        "one_minus_zero_moduli": [float(abs(1.0 - z)) for z in zeros],
    }, [], json_path, started)


@cli.command()
@click.option("--lambda", "lam", type=float, required=True)
@click.option("--omega", required=True,
              help="Representation density of H (monomial grammar).")
@click.option("--dilatation", required=True,
              help="Dilatation omega_F (monomial grammar, zero at 0).")
@click.option("--theorem", type=click.Choice(["T42", "T43", "both"]),
              default="both")
@plan_options
@click.option("--json", "json_path", default=None, type=click.Path())
def harmonic(lam, omega, dilatation, theorem, radii_count, angles,
             tolerance, json_path):
    """Build F = H + conj(G) and run the close-to-convexity certificates."""
    started = time.monotonic()
    om = parse_omega(omega)
    h_map = make_from_omega(lam, 0.0, om)
    dil = parse_omega(dilatation)
    if abs(complex(dil(0.0 + 0.0j))) > 1e-12:
        raise click.UsageError("dilatation must vanish at 0")
    try:
        f_harm = build_harmonic(h_map, dil)
    except HypothesisError as exc:
        raise click.UsageError(str(exc))
    plan = make_plan(radii_count, angles, tolerance)
    result = {"lambda": lam, "omega": omega, "dilatation": dilatation}
    warnings = []
    for name, runner in (("T42", certify_T42), ("T43", certify_T43)):
        if theorem not in (name, "both"):
            continue
        try:
            cert = runner(f_harm, plan)
            result[name] = cert.to_dict()
        except HypothesisError as exc:
            result[name] = {"status": "NOT_APPLICABLE", "reason": str(exc)}
            warnings.append(f"{name}: {exc}")
    jac_min = math.inf
    for r in plan.radii:
        z = plan.circle(r)
        jac_min = min(jac_min, float(np.min(jacobian(f_harm, z))))
    result["jacobian_grid_min"] = jac_min
    emit("harmonic", result, warnings, json_path, started)


@cli.command()
@family_options
@click.option("--radius", type=float, default=0.999)
@click.option("--samples", type=int, default=3072)
@click.option("--svg", "svg_path", default=None, type=click.Path())
@click.option("--csv", "csv_path", default=None, type=click.Path())
@click.option("--png", "png_path", default=None, type=click.Path())
@click.option("--json", "json_path", default=None, type=click.Path())
def render(spec_json, family, lam, theta, a, k, omega, a2,
           radius, samples, svg_path, csv_path, png_path, json_path):
    """Emit the image curve of |z| = r as SVG/CSV (and optional PNG)."""
    started = time.monotonic()
    spec = _spec_from_flags(spec_json, family, lam, theta, a, k, omega, a2)
    f = resolve_family(spec)
    if not 0.0 < radius < 1.0:
        raise click.UsageError("--radius must lie in (0,1)")
    points = boundary_curve(f, radius, samples)
    t = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
    if csv_path:
        write_text_atomic(csv_path, curve_csv(t, points))
    if svg_path:
        write_text_atomic(svg_path, curve_svg(points))
    if png_path:
        write_curve_png(png_path, points, title=f.name)
    emit("render", {
        "function_spec": spec,
        "radius": radius,
        "samples": samples,
        "outputs": {"svg": svg_path, "csv": csv_path, "png": png_path},
        "bbox": [float(points.real.min()), float(points.real.max()),
                 float(points.imag.min()), float(points.imag.max())],
    }, [], json_path, started)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 2
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return 130
    except SchlichtError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
