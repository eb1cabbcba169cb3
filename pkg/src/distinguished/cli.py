"""Command-line front end.

    distinguished distinguish --ext unram:p=3 --chars "c=0,phase=1/2;c=4,phase=1/2;c=0"
    distinguished counterexample --n 3 --ext unram:p=3
    distinguished gamma --ext unram:p=3 --mu c=1
    distinguished orbits --n 2 --q 3 --full-enum --random-checks 100 --seed 7
    distinguished cells --n 4

Exit status: 0 all checks pass, 1 a mathematical check failed, 2 usage error.
"""

import argparse
import json
import sys
from math import factorial

import numpy

from . import __version__, cosets, weyl
from .characters import (
    format_characters,
    parse_character,
    parse_characters,
    restrict_to_F,
    sigma_dual,
)
from .distinction import (
    BRUTE_FORCE_MAX_N,
    PrincipalSeriesDatum,
    ReducibleDatumError,
    brute_force_distinguished,
    central_character_trivial_on_F,
    eta_extension,
    is_distinguished,
    is_eta_distinguished,
    jacquet_counterexample_search,
    literal_pattern_check,
    sigma_selfdual,
    validate_certificate,
)
from .extension import parse_extension
from .gamma import TOLERANCE, UnsupportedExtensionError, gl2_distinction_by_gamma, standard_psi

TAME_MODEL = "tame model: characters trivial on 1-units, exact (phase, magnitude) at the uniformizer"
FINITE_MODEL = "finite-field model: F_{q^2}/F_q with sigma = Frobenius"
GAMMA_CONVENTION = ("eps(s,chi,psi) = chi(varpi) q_K^-s G(chi^-1, psibar) for tamely ramified chi, "
                    "1 for unramified chi; chosen so gamma(s,chi,psi) gamma(1-s,chi^-1,psi^-1) = 1")


class UsageError(Exception):
    pass


class Report:
    def __init__(self, command, inputs, model, seed=None):
        self.data = {
            "command": command,
            "version": __version__,
            "model": model,
            "inputs": inputs,
            "seed": seed,
            "results": {},
            "checks": [],
        }

    @property
    def results(self):
        return self.data["results"]

    def check(self, name, ok, detail=""):
        self.data["checks"].append({"name": name, "pass": bool(ok), "detail": detail})

    @property
    def ok(self):
        return all(c["pass"] for c in self.data["checks"])

    def finish(self):
        self.data["status"] = "ok" if self.ok else "anomaly"
        return self.data


def complex_record(z):
    return {"re": float(z.real), "im": float(z.imag)}


# -- commands ----------------------------------------------------------------


def cmd_distinguish(ext_spec, chars_spec=None, mu_spec=None):
    ext = parse_extension(ext_spec)
    if (chars_spec is None) == (mu_spec is None):
        raise UsageError("give exactly one of --chars or --mu")
    if mu_spec is not None:
        mu = parse_character(mu_spec, ext)
        chars = (mu, sigma_dual(mu))
    else:
        chars = parse_characters(chars_spec, ext)
    datum = PrincipalSeriesDatum(chars)
    rep = Report("distinguish", {"ext": ext.describe(), "chars": format_characters(chars)}, TAME_MODEL)
    try:
        verdict = is_distinguished(datum)
    except ReducibleDatumError as e:
        raise UsageError(str(e)) from None
    eta_mu = eta_extension(ext)
    eta_verdict = is_eta_distinguished(datum, eta_mu)
    selfdual = sigma_selfdual(datum)
    central = central_character_trivial_on_F(datum)
    rep.results.update({
        "distinguished": verdict.distinguished,
        "eta_distinguished": eta_verdict.distinguished,
        "sigma_selfdual": selfdual,
        "central_trivial": central,
        "certificate": verdict.certificate,
        "r": verdict.r,
        "literal_order_r": literal_pattern_check(datum),
        "eta_twist": str(eta_mu),
        "eta_certificate": eta_verdict.certificate,
        "restrictions_to_F": [str(restrict_to_F(chi)) for chi in chars],
    })
    rep.check("certificate re-validates", validate_certificate(datum, verdict))
    if datum.n <= BRUTE_FORCE_MAX_N:
        bf = brute_force_distinguished(datum)
        rep.check("brute-force partition oracle agrees", bf.distinguished == verdict.distinguished)
    rep.check("distinguished implies sigma-selfdual", selfdual or not verdict.distinguished)
    return rep


def cmd_counterexample(n, ext_spec, budget):
    ext = parse_extension(ext_spec)
    if n < 3:
        raise UsageError("n=%d: conjecture holds trivially out of range here (counter-examples need n >= 3)" % n)
    if budget < 1:
        raise UsageError("budget must be positive")
    rep = Report("counterexample", {"n": n, "ext": ext.describe(), "budget": budget}, TAME_MODEL)
    search = jacquet_counterexample_search(n, ext, budget)
    items = []
    for item in search.items:
        items.append({
            "chars": format_characters(item.datum.chars),
            "sigma_selfdual": item.sigma_selfdual,
            "central_trivial": item.central_trivial,
            "distinguished": item.distinguished,
            "eta_distinguished": item.eta_distinguished,
        })
    rep.results.update({"candidates_examined": search.examined, "found": len(items),
                        "items": items, "diagnostic": search.diagnostic})
    rep.check("at least one counter-example", bool(items), search.diagnostic)
    rep.check("every item verified", all(x.verified for x in search.items))
    return rep


def reverify_counterexamples(report):
    """Re-parse the items of a counterexample report and re-run all four checks."""
    ext = parse_extension(report["inputs"]["ext"])
    out = []
    for item in report["results"]["items"]:
        datum = PrincipalSeriesDatum(parse_characters(item["chars"], ext))
        out.append(sigma_selfdual(datum) and central_character_trivial_on_F(datum)
                   and not is_distinguished(datum).distinguished
                   and not is_eta_distinguished(datum).distinguished)
    return out


def cmd_gamma(ext_spec, mu_spec):
    ext = parse_extension(ext_spec)
    try:
        psi = standard_psi(ext)
    except UnsupportedExtensionError as e:
        raise UsageError(str(e)) from None
    mu = parse_character(mu_spec, ext)
    rep = Report("gamma", {"ext": ext.describe(), "mu": str(mu)}, TAME_MODEL)
    sweep = gl2_distinction_by_gamma(mu, psi)
    rows = []
    for row in sweep.rows:
        rec = {"chi": str(row.chi), "c": row.chi.c, "phase": str(row.chi.phase)}
        if row.excluded:
            rec["excluded"] = row.excluded
        else:
            rec["product"] = complex_record(row.product)
            rec["deviation"] = row.deviation
        rows.append(rec)
    rep.results.update({
        "convention": GAMMA_CONVENTION,
        "psi_beta": psi.beta,
        "mu_sigma_dual": str(sigma_dual(mu)),
        "sweep_size": sweep.sweep_size,
        "tolerance": TOLERANCE,
        "rows": rows,
        "all_products_one": sweep.all_products_one,
        "worst_deviation": sweep.worst_deviation,
        "witnesses": [str(chi) for chi in sweep.witnesses],
        "distinguished_by_criterion": sweep.distinguished,
    })
    rep.check("products equal 1 within tolerance", sweep.all_products_one,
              "worst deviation %r, tolerance %r" % (sweep.worst_deviation, TOLERANCE))
    rep.check("gamma verdict agrees with distinction criterion", sweep.agrees)
    return rep


def cmd_orbits(n, q, full_enum=False, random_checks=0, seed=0):
    if n < 1:
        raise UsageError("n must be >= 1")
    try:
        model = cosets.model(q)
    except ValueError as e:
        raise UsageError("q=%d: %s" % (q, e)) from None
    if full_enum and n > cosets.MAX_ENUM_N:
        raise UsageError("--full-enum limited to n <= %d" % cosets.MAX_ENUM_N)
    inputs = {"n": n, "q": q, "full_enum": full_enum, "random_checks": random_checks}
    rep = Report("orbits", inputs, FINITE_MODEL, seed=seed if random_checks else None)
    formula = cosets.expected_S_size(n, q)
    invs = weyl.involutions(n)
    rep.results.update({"delta": model.delta, "S_formula": formula, "involutions": len(invs)})

    table = None
    if full_enum:
        try:
            table = cosets.orbit_decomposition(n, q)
        except cosets.BudgetExceeded as e:
            raise UsageError(str(e)) from None
        rep.results.update({
            "S_enumerated": table.S_size,
            "orbit_count": len(table.orbits),
            "orbits": [{"representative": list(o.representative), "size": o.size} for o in table.orbits],
        })
        rep.check("|S| enumerated equals formula", table.S_size == formula,
                  "%d vs %d" % (table.S_size, formula))
        rep.check("orbit sizes sum to |S|", sum(o.size for o in table.orbits) == formula)
        rep.check("one orbit per involution", len(table.orbits) == len(invs))

    hit, want = cosets.representative_coverage(n, q, table)
    rep.results["U_r_w_coverage"] = {"covered": len(hit & want), "orbits": len(want)}
    rep.check("U_r^w representatives meet every orbit", hit >= want)

    if random_checks:
        rng = numpy.random.default_rng(seed)
        ok = 0
        cells = {}
        for _ in range(random_checks):
            s = cosets.s_map(cosets.random_invertible(rng, n, q), q)
            try:
                red = cosets.reduce_to_involution(s, q)
            except AssertionError:
                continue
            key = "".join(map(str, red.w))
            cells[key] = cells.get(key, 0) + 1
            if table is None or table.orbit_of(s) == red.w:
                ok += 1
        rep.results["reduction"] = {"trials": random_checks, "successes": ok,
                                    "by_involution": dict(sorted(cells.items()))}
        rep.check("reduction s = y w y^-sigma succeeds", ok == random_checks,
                  "%d/%d" % (ok, random_checks))
    return rep


def cmd_cells(n):
    try:
        order = weyl.cell_order(n)
    except ValueError as e:
        raise UsageError(str(e)) from None
    rep = Report("cells", {"n": n}, "Bruhat order on S_n (subword criterion)")
    bad = weyl.closure_violations(order)
    rep.results.update({
        "cells": len(order),
        "order": ["%s:%d" % ("".join(map(str, w)), weyl.length(w)) for w in order] if n <= 4 else None,
        "lengths": [weyl.length(w) for w in order],
        "closure_violations": len(bad),
    })
    rep.check("cell count is n!", len(order) == factorial(n))
    rep.check("length order is downward closed", not bad, "%d violations" % len(bad))
    return rep


# -- output ------------------------------------------------------------------


def render(data, fmt):
    if fmt == "records":
        return json.dumps(data, indent=2) + "\n"
    lines = []
    _plain(data, 0, lines)
    return "\n".join(lines) + "\n"


def _scalar(x):
    if isinstance(x, bool) or x is None:
        return json.dumps(x)
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, dict) and set(x) == {"re", "im"}:
        return "%r%+rj" % (x["re"], x["im"])
    return str(x)


def _plain(obj, depth, lines):
    pad = "  " * depth
    if isinstance(obj, dict):
        for key, val in obj.items():
            if isinstance(val, (dict, list)) and val and not (isinstance(val, dict) and set(val) == {"re", "im"}):
                lines.append("%s%s:" % (pad, key))
                _plain(val, depth + 1, lines)
            else:
                lines.append("%s%s: %s" % (pad, key, _scalar(val)))
    elif isinstance(obj, list):
        for item in obj:
            if isinstance(item, dict):
                lines.append("%s- %s" % (pad, "  ".join("%s=%s" % (k, _scalar(v)) for k, v in item.items())))
            else:
                lines.append("%s- %s" % (pad, _scalar(item)))
    else:
        lines.append(pad + _scalar(obj))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("plain", "records"), default="plain")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    parser = argparse.ArgumentParser(prog="distinguished", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distinguish", parents=[common], help="decide distinction of pi(chi)")
    p.add_argument("--ext", required=True)
    p.add_argument("--chars", help="c=<int>[,phase=a/b][,mag=a/b] separated by ';'")
    p.add_argument("--mu", help="use the pair (mu, mu^{-sigma})")

    p = sub.add_parser("counterexample", parents=[common], help="search Jacquet counter-examples")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ext", required=True)
    p.add_argument("--budget", type=int, default=16)

    p = sub.add_parser("gamma", parents=[common], help="GL(2) gamma-factor sweep for pi(mu, mu^{-sigma})")
    p.add_argument("--ext", required=True)
    p.add_argument("--mu", required=True)

    p = sub.add_parser("orbits", parents=[common], help="Borel orbits on S over F_{q^2}/F_q")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--full-enum", action="store_true")
    p.add_argument("--random-checks", type=int, default=0)

    p = sub.add_parser("cells", parents=[common], help="Bruhat cell order")
    p.add_argument("--n", type=int, required=True)
    return parser


def run(args):
    if args.command == "distinguish":
        return cmd_distinguish(args.ext, args.chars, args.mu)
    if args.command == "counterexample":
        return cmd_counterexample(args.n, args.ext, args.budget)
    if args.command == "gamma":
        return cmd_gamma(args.ext, args.mu)
    if args.command == "orbits":
        return cmd_orbits(args.n, args.q, args.full_enum, args.random_checks, args.seed)
    if args.command == "cells":
        return cmd_cells(args.n)
    raise UsageError("unknown command %r" % args.command)


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    try:
        rep = run(args)
    except (UsageError, ValueError) as e:
        stderr.write("error: %s\n" % e)
        return 2
    stdout.write(render(rep.finish(), args.format))
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
