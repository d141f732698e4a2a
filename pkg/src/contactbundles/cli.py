"""Command-line front end: deterministic JSON reports on stdout.

Exit codes: 0 success, 1 validation failure (structured "error" object in
the JSON), 2 usage / argument-domain error.  Floats are printed with 12
significant digits and rationals as "p/q" (plain integer when q = 1), so
reports are byte-identical across runs.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import __version__, classify, hyperbolic, multicurve
from . import formcalc as fc

USAGE_ERROR = 2
VALIDATION_ERROR = 1


class UsageDomainError(ValueError):
    """Argument values outside the command's domain."""


def _fmt_fraction(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _round12(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, Fraction):
        return _fmt_fraction(obj)
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _emit(command: str, inputs: dict, outputs: dict, error: dict = None) -> int:
    report = {
        "command": command,
        "inputs": _round12(inputs),
        "outputs": _round12(outputs),
        "version": __version__,
        "deterministic": True,
    }
    if error:
        report["error"] = error
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0 if not error else VALIDATION_ERROR


def _parse_area(text: str) -> float:
    """Accept a float or a multiple of pi such as '4pi', '0.5pi', 'pi/2'."""
    s = text.strip().lower()
    try:
        if s.endswith("pi"):
            head = s[:-2].strip()
            return (float(head) if head else 1.0) * math.pi
        if "pi/" in s:
            num, _, den = s.partition("pi/")
            return (float(num) if num else 1.0) * math.pi / float(den)
        return float(s)
    except ValueError:
        raise UsageDomainError(f"cannot parse area {text!r}")


# ---------------------------------------------------------------------------
# subcommands

def cmd_classify(args) -> int:
    chiS, euler = args.chi_s, args.euler
    if chiS % 2 or chiS > 2:
        raise UsageDomainError("--chi-s must be an even integer <= 2")
    te = classify.transverse_exists(chiS, euler)
    out = {
        "transverse_exists": te,
        "flat_exists": classify.flat_exists(chiS, euler),
        "confoliation_ok": classify.confoliation_bound(chiS, euler),
        "tangent_degree": classify.tangent_exists(chiS, euler),
        "enrollment_spectrum": None,
        "conjugacy_classes": None,
        "vot_bound": classify.virtually_overtwisted_bound(chiS, euler),
        "boundary_slope": None,
        "whitney_class": None,
    }
    tangent_n = None
    if euler != 0 and (-chiS) % euler == 0 and (-chiS) // euler > 0:
        tangent_n = (-chiS) // euler
    if te:
        if chiS == 2:
            e = classify.sphere_enrollment(euler)
            out["enrollment_spectrum"] = [int(-e)]
            out["conjugacy_classes"] = 1
        else:
            spec = classify.transverse_enrollment_spectrum(chiS, euler)
            if spec.all_n:
                out["enrollment_spectrum"] = "all n >= 1"
                out["conjugacy_classes"] = None  # conjugation moves the fibration on the 3-torus
            else:
                out["enrollment_spectrum"] = spec.sorted_values()
                out["conjugacy_classes"] = (
                    classify.count_tangent_conjugacy_classes(tangent_n)
                    if tangent_n else 1)
    n_slope = tangent_n or 1
    (cls_vec, mu) = classify.boundary_slope(n_slope, euler, chiS)
    out["boundary_slope"] = {"n": n_slope, "class": list(cls_vec), "mu": Fraction(mu)}
    d = out["tangent_degree"]
    if d:
        e = classify.legendrian_fibration_enrollment(d)
        out["whitney_class"] = list(classify.whitney_singular_class(e, chiS))
    return _emit("classify", {"chi_s": chiS, "euler": euler}, out)


def cmd_holonomy(args) -> int:
    area = _parse_area(args.area)
    try:
        est = hyperbolic.holonomy_translation_number(args.genus, area, args.iters)
    except hyperbolic.AreaOutOfRange as e:
        raise UsageDomainError(str(e))
    radius = hyperbolic.radius_for_area(args.genus, area)
    poly = hyperbolic.build_symmetric_polygon(args.genus, radius)
    comm = hyperbolic.commutator_product(hyperbolic.side_pairings(poly))
    target = area / (2.0 * math.pi)
    out = {
        "genus": args.genus,
        "area": area,
        "circumradius": radius,
        "commutator_trace": comm.trace(),
        "commutator_class": comm.classification(1e-9),
        "rho": float(est.value),
        "abs_rho": abs(float(est.value)),
        "target_abs_rho": target,
        "residual": abs(abs(float(est.value)) - target),
        "error_bound": est.error_bound,
        "iterations": est.iterations,
    }
    return _emit("holonomy", {"genus": args.genus, "area": args.area, "iters": args.iters}, out)


def cmd_polygon(args) -> int:
    area = _parse_area(args.area)
    try:
        radius = hyperbolic.radius_for_area(args.genus, area)
    except hyperbolic.AreaOutOfRange as e:
        raise UsageDomainError(str(e))
    poly = hyperbolic.build_symmetric_polygon(args.genus, radius)
    pairings = hyperbolic.side_pairings(poly)
    g = args.genus
    residuals = []
    for i in range(1, g + 1):
        po, pe = pairings[2 * (i - 1)], pairings[2 * (i - 1) + 1]
        residuals += [
            hyperbolic.hdistance(po.apply(poly.vertex(4 * i - 1)), poly.vertex(4 * i - 2)),
            hyperbolic.hdistance(po.apply(poly.vertex(4 * i)), poly.vertex(4 * i - 3)),
            hyperbolic.hdistance(pe.apply(poly.vertex(4 * i - 2)), poly.vertex(4 * i + 1)),
            hyperbolic.hdistance(pe.apply(poly.vertex(4 * i - 1)), poly.vertex(4 * i)),
        ]
    comm = hyperbolic.commutator_product(pairings)
    expected = 2.0 * abs(math.cos(((4 * g - 2) * math.pi - area) / 2.0))
    out = {
        "genus": g,
        "requested_area": area,
        "circumradius": radius,
        "computed_area": hyperbolic.polygon_area(poly),
        "side_length": poly.side_lengths()[0],
        "pairing_residual_max": max(residuals),
        "commutator_trace": comm.trace(),
        "expected_abs_trace": expected,
    }
    return _emit("polygon", {"genus": g, "area": args.area}, out)


def cmd_forms(args) -> int:
    if args.library:
        entries = {}
        for key, entry in fc.model_library().items():
            rec = {
                "description": entry.description,
                "chart": list(entry.form.chart.names),
                "form": entry.form.text(),
                "expected_sign": entry.expected_sign,
                "enrollment": Fraction(entry.enrollment) if entry.enrollment is not None else None,
            }
            if entry.expected_sign is not None:
                rep = fc.contact_sign(entry.form, grid=args.grid)
                rec["sign"] = rep.sign
                rec["min_abs"] = rep.min_abs
                rec["samples"] = rep.samples
            entries[key] = rec
        return _emit("forms", {"library": True, "grid": args.grid}, {"library": entries})
    if not args.form_file:
        raise UsageDomainError("provide --form-file or --library")
    with open(args.form_file, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        form = fc.parse_form_file(text)
        rep = fc.contact_sign(form, grid=args.grid)
    except (fc.FormSyntaxError, ValueError) as e:
        return _emit("forms", {"form_file": args.form_file, "grid": args.grid}, {},
                     error={"type": type(e).__name__, "message": str(e)})
    out = {
        "chart": list(form.chart.names),
        "form": form.text(),
        "sign": rep.sign,
        "min_abs": rep.min_abs,
        "samples": rep.samples,
        "witnesses": [list(w) for w in rep.witnesses],
    }
    return _emit("forms", {"form_file": args.form_file, "grid": args.grid}, out)


def cmd_multicurve(args) -> int:
    with open(args.file, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        dec = multicurve.parse_decomposition(text)
    except multicurve.InvalidDecomposition as e:
        return _emit("multicurve", {"file": args.file}, {},
                     error={"type": "InvalidDecomposition", "message": str(e)})
    ok, diags = multicurve.validate(dec)
    out = {"valid": ok, "diagnostics": diags}
    if ok:
        out["essential"] = multicurve.is_essential(dec)
        out["universal_tightness"] = multicurve.universal_tightness(dec, args.euler).value
        out["convex_neighborhood_tight"] = multicurve.convex_neighborhood_tight(dec)
        out["euler"] = args.euler
    if args.compare:
        with open(args.compare, "r", encoding="utf-8") as fh:
            text2 = fh.read()
        try:
            dec2 = multicurve.parse_decomposition(text2)
            out["isotopy_equal"] = multicurve.isotopy_equal(dec, dec2)
        except multicurve.InvalidDecomposition as e:
            return _emit("multicurve", {"file": args.file, "compare": args.compare}, out,
                         error={"type": "InvalidDecomposition", "message": str(e)})
    inputs = {"file": args.file}
    if args.compare:
        inputs["compare"] = args.compare
    if not ok:
        return _emit("multicurve", inputs, out,
                     error={"type": "InvalidDecomposition", "message": "; ".join(diags)})
    return _emit("multicurve", inputs, out)


def cmd_covers(args) -> int:
    try:
        orbits = classify.cohomology_orbit_count(args.genus, args.n)
    except classify.ScaleExceeded as e:
        raise UsageDomainError(str(e))
    tau = classify.count_tangent_conjugacy_classes(args.n)
    out = {
        "genus": args.genus,
        "n": args.n,
        "orbit_count": orbits,
        "divisor_count": tau,
        "agree": orbits == tau,
    }
    return _emit("covers", {"genus": args.genus, "n": args.n}, out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="contactbundles",
                                 description="circle-bundle contact structure computations")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="existence / counting / bound formulas")
    p.add_argument("--chi-s", type=int, required=True)
    p.add_argument("--euler", type=int, required=True)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("holonomy", help="translation number of the polygon holonomy relator")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--area", type=str, required=True, help="float or multiple of pi, e.g. 4pi")
    p.add_argument("--iters", type=int, default=100000)
    p.set_defaults(fn=cmd_holonomy)

    p = sub.add_parser("polygon", help="symmetric polygon data and pairing residuals")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--area", type=str, required=True)
    p.set_defaults(fn=cmd_polygon)

    p = sub.add_parser("forms", help="contact sign of a 1-form file or the model library")
    p.add_argument("--form-file", type=str)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--library", action="store_true")
    p.set_defaults(fn=cmd_forms)

    p = sub.add_parser("multicurve", help="validate / compare multicurve decompositions")
    p.add_argument("--file", type=str, required=True)
    p.add_argument("--compare", type=str)
    p.add_argument("--euler", type=int, default=0)
    p.set_defaults(fn=cmd_multicurve)

    p = sub.add_parser("covers", help="cohomology orbit count vs divisor count")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=cmd_covers)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except UsageDomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return VALIDATION_ERROR
    except ValueError as e:
        # remaining ValueErrors come from argument domains (genus, iters, ...)
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
