"""Command line front end: parse map documents, dispatch analyses, emit reports.

Subcommands: analyze, linearize, newton, eisenstein, orbit, probe, vanishing.
Input documents are UTF-8 JSON; reports are JSON (default) or plain text,
deterministic for fixed inputs and flags up to the timing field.  Exit
codes: 0 on success, 2 on a mathematical obstruction (resonance,
irrational eigenvalue, torsion, ...), 1 on a usage or document error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from typing import Any, Sequence

from . import ratlinalg
from .dynamics import (
    AnalyticMap,
    DiophantineParams,
    choose_prime,
    enumerate_resonances,
    jacobian_at_origin,
    rational_eigenvalues,
    relation_lattice,
    symplectic_scaling_check,
)
from .eisenstein import (
    AlgebraicSeriesSpec,
    XPolynomial,
    coefficients_up_to,
    denominator_support,
)
from .errors import DocumentError, PadicDynError
from .linearize import (
    linearize_newton,
    linearize_order_by_order,
    normalize_fixed_locus,
)
from .orbit import (
    Neighbourhood,
    VanishingSumInstance,
    closure_dimension_estimate,
    iterate_in_neighbourhood,
    relation_probe,
    vanishing_exponents,
)
from .series import MultiSeries, SeriesTuple

SCHEMA_VERSION = "1"
DEFAULT_PRECISION = 32
DEFAULT_TRUNCATION = 8

USAGE_EXIT = 1
OBSTRUCTION_EXIT = 2


def _rational(value: Any, path: str) -> Fraction:
    if isinstance(value, bool):
        raise DocumentError(path, "expected a rational number")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DocumentError(path, f"not a rational: {value!r}") from exc
    raise DocumentError(path, f"expected int or 'n/d' string, got {type(value).__name__}")


def _encode_rational(x: Fraction):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _encode_series(phi: MultiSeries) -> list[dict]:
    return phi.to_records()


def _encode_tuple(tup: SeriesTuple) -> list[list[dict]]:
    return tup.to_records()


def _encode_matrix(m) -> list[list]:
    return [[_encode_rational(x) for x in row] for row in m]


class MapDocument:
    """A parsed map description with documented defaults filled in."""

    def __init__(
        self,
        analytic_map: AnalyticMap,
        variables: list[str],
        prime: int | None,
        precision: int,
        symplectic_form: list[list[Fraction]] | None,
    ) -> None:
        self.map = analytic_map
        self.variables = variables
        self.prime = prime
        self.precision = precision
        self.symplectic_form = symplectic_form


def parse_map_document(data: Any, truncation: int | None = None) -> MapDocument:
    if not isinstance(data, dict):
        raise DocumentError("$", "document must be a JSON object")
    if "dimension" not in data:
        raise DocumentError("dimension", "missing")
    n = data["dimension"]
    if not isinstance(n, int) or n < 1:
        raise DocumentError("dimension", "must be a positive integer")
    variables = data.get("variables", [f"x{i + 1}" for i in range(n)])
    if not isinstance(variables, list) or len(variables) != n:
        raise DocumentError("variables", f"expected {n} names")
    r = data.get("fixed_locus_dim", 0)
    if not isinstance(r, int) or not 0 <= r <= n:
        raise DocumentError("fixed_locus_dim", f"must be an integer in [0, {n}]")
    trunc = truncation if truncation is not None else data.get("truncation_degree", DEFAULT_TRUNCATION)
    if not isinstance(trunc, int) or trunc < 1:
        raise DocumentError("truncation_degree", "must be a positive integer")
    components = data.get("components")
    if not isinstance(components, list) or len(components) != n:
        raise DocumentError("components", f"expected {n} component term lists")
    series = []
    for i, terms in enumerate(components):
        if not isinstance(terms, list):
            raise DocumentError(f"components[{i}]", "expected a list of term records")
        parsed = []
        for t, record in enumerate(terms):
            where = f"components[{i}][{t}]"
            if not isinstance(record, dict):
                raise DocumentError(where, "expected a term record")
            exps = record.get("exponents")
            if not isinstance(exps, list) or len(exps) != n or any(
                not isinstance(e, int) or e < 0 for e in exps
            ):
                raise DocumentError(f"{where}.exponents", f"expected {n} non-negative integers")
            num = record.get("numerator")
            if not isinstance(num, int):
                raise DocumentError(f"{where}.numerator", "expected an integer")
            den = record.get("denominator", 1)
            if not isinstance(den, int) or den == 0:
                raise DocumentError(f"{where}.denominator", "expected a nonzero integer")
            parsed.append((tuple(exps), Fraction(num, den)))
        series.append(MultiSeries(n, trunc, parsed))
    prime = data.get("prime")
    if prime is not None and (not isinstance(prime, int) or prime < 3):
        raise DocumentError("prime", "expected an odd prime")
    precision = data.get("precision", DEFAULT_PRECISION)
    if not isinstance(precision, int) or precision < 1:
        raise DocumentError("precision", "expected a positive integer")
    form = None
    if "symplectic_form" in data:
        raw = data["symplectic_form"]
        if not isinstance(raw, list) or len(raw) != n or any(
            not isinstance(row, list) or len(row) != n for row in raw
        ):
            raise DocumentError("symplectic_form", f"expected an {n}x{n} matrix")
        form = [
            [_rational(x, f"symplectic_form[{i}][{j}]") for j, x in enumerate(row)]
            for i, row in enumerate(raw)
        ]
    try:
        amap = AnalyticMap(SeriesTuple(series), fixed_locus_dim=r)
    except PadicDynError as exc:
        raise DocumentError("components", str(exc)) from exc
    return MapDocument(amap, list(variables), prime, precision, form)


def _load_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise DocumentError(path, f"cannot read: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from exc


def _parse_point(text: str, n: int) -> list[Fraction]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise DocumentError("--start", f"expected {n} comma-separated rationals")
    return [_rational(p, "--start") for p in parts]


def cmd_analyze(args) -> dict:
    doc = parse_map_document(_load_json(args.document))
    f = doc.map
    depth = args.degree if args.degree is not None else f.trunc
    jac = jacobian_at_origin(f)
    eigen = rational_eigenvalues(jac)
    lams = list(eigen.eigenvalues)
    resonances = enumerate_resonances(lams, f.fixed_locus_dim, depth) if all(
        lams[i] == 1 for i in range(f.fixed_locus_dim)
    ) else None
    lattice = relation_lattice(lams)
    prime = args.prime or doc.prime or choose_prime(f, lams)
    report = {
        "dimension": f.n,
        "fixed_locus_dim": f.fixed_locus_dim,
        "jacobian": _encode_matrix(jac),
        "eigenvalues": [_encode_rational(x) for x in lams],
        "semisimple": eigen.semisimple,
        "resonances": None
        if resonances is None
        else [
            {"monomial": list(res.monomial), "component": res.component}
            for res in resonances
        ],
        "resonance_degree": depth,
        "relation_lattice": {
            "basis": [list(v) for v in lattice.basis],
            "rank": lattice.rank,
            "torsion_free": lattice.torsion_free,
        },
        "default_prime": prime,
    }
    if doc.symplectic_form is not None:
        sigma = doc.symplectic_form
        mu = None
        m = ratlinalg.as_matrix(jac)
        lhs = ratlinalg.mat_mul(ratlinalg.mat_mul(ratlinalg.transpose(m), ratlinalg.as_matrix(sigma)), m)
        for i in range(f.n):
            for j in range(f.n):
                if sigma[i][j]:
                    mu = lhs[i][j] / sigma[i][j]
                    break
            if mu is not None:
                break
        check = symplectic_scaling_check(jac, sigma, mu)
        report["symplectic"] = {
            "scaling": _encode_rational(mu),
            "holds": check.holds,
            "pairs": None
            if check.pairs is None
            else [[_encode_rational(a), _encode_rational(b)] for a, b in check.pairs],
        }
    return report


def _conjugacy_report(result, change: SeriesTuple | None) -> dict:
    report = {
        "h": _encode_tuple(result.h),
        "h_inverse": _encode_tuple(result.h_inverse),
        "verified_degree": result.verified_degree,
        "residual_zero": result.residual.is_zero(),
        "denominator_primes": sorted(result.denominator_primes),
        "eigenvalues": [_encode_rational(x) for x in result.eigenvalues],
    }
    if change is not None:
        report["normalizing_change"] = _encode_tuple(change)
    return report


def _prepare_linearizable(doc: MapDocument, degree: int):
    f = doc.map
    if f.trunc < degree:
        f = AnalyticMap(
            SeriesTuple([c.as_polynomial(degree) for c in f.components]),
            f.fixed_locus_dim,
            f.base_point,
        )
    normalized, change = normalize_fixed_locus(f)
    identity = SeriesTuple.identity(f.n, f.trunc)
    return normalized, (None if change == identity else change)


def cmd_linearize(args) -> dict:
    doc = parse_map_document(_load_json(args.document))
    degree = args.degree if args.degree is not None else DEFAULT_TRUNCATION
    f, change = _prepare_linearizable(doc, degree)
    result = linearize_order_by_order(f, degree)
    return _conjugacy_report(result, change)


def cmd_newton(args) -> dict:
    doc = parse_map_document(_load_json(args.document))
    degree = args.degree if args.degree is not None else DEFAULT_TRUNCATION
    f, change = _prepare_linearizable(doc, degree)
    params = DiophantineParams(_rational(args.c_const, "--c-const"), _rational(args.beta, "--beta"))
    prime = args.prime or doc.prime
    result, trace = linearize_newton(f, degree, params, prime=prime)
    report = _conjugacy_report(result, change)
    report["newton_trace"] = {
        "prime": trace.prime,
        "rescale": _encode_rational(trace.rescale),
        "radii": [_encode_rational(r) for r in trace.radii],
        "iterations": [
            {
                "index": it.index,
                "window": list(it.window),
                "delta_order": it.delta_order,
                "delta_norm": None
                if it.delta_norm is None
                else _encode_rational(it.delta_norm.value),
                "rho": _encode_rational(it.rho),
                "bound_satisfied": None if it.bound is None else it.bound.passes,
                "minimal_c1": None
                if it.bound is None
                else {
                    "coefficient": _encode_rational(it.bound.minimal_c1.coeff),
                    "base": _encode_rational(it.bound.minimal_c1.base),
                    "exponent": _encode_rational(it.bound.minimal_c1.exponent),
                },
            }
            for it in trace.iterations
        ],
    }
    return report


def cmd_eisenstein(args) -> dict:
    data = _load_json(args.document)
    if not isinstance(data, dict):
        raise DocumentError("$", "document must be a JSON object")
    nvars = data.get("num_vars")
    if not isinstance(nvars, int) or nvars < 1:
        raise DocumentError("num_vars", "expected a positive integer")
    raw_terms = data.get("relation")
    if not isinstance(raw_terms, list) or not raw_terms:
        raise DocumentError("relation", "expected a nonempty list of term records")
    terms = []
    for t, record in enumerate(raw_terms):
        where = f"relation[{t}]"
        if not isinstance(record, dict):
            raise DocumentError(where, "expected a term record")
        exps = record.get("exponents")
        if not isinstance(exps, list) or len(exps) != nvars:
            raise DocumentError(f"{where}.exponents", f"expected {nvars} integers")
        xpow = record.get("x_power", 0)
        if not isinstance(xpow, int) or xpow < 0:
            raise DocumentError(f"{where}.x_power", "expected a non-negative integer")
        num = record.get("numerator")
        den = record.get("denominator", 1)
        if not isinstance(num, int) or not isinstance(den, int) or den == 0:
            raise DocumentError(where, "expected integer numerator and nonzero denominator")
        terms.append((tuple(exps), xpow, Fraction(num, den)))
    relation = XPolynomial.from_terms(nvars, terms)
    seed_records = data.get("seed", [])
    seed_degree = data.get("seed_degree", 0)
    if not isinstance(seed_degree, int) or seed_degree < 0:
        raise DocumentError("seed_degree", "expected a non-negative integer")
    seed = MultiSeries.from_records(seed_records, nvars, seed_degree)
    depth = args.degree if args.degree is not None else DEFAULT_TRUNCATION
    spec = AlgebraicSeriesSpec.build(relation, seed)
    phi = coefficients_up_to(spec, depth)
    support = denominator_support(phi)
    return {
        "vanishing_order": spec.vanishing_order,
        "pivot_monomial": list(spec.pivot_monomial),
        "coefficients": _encode_series(phi),
        "degree": depth,
        "denominator_primes": sorted(support.primes),
        "squarefree_product": support.squarefree_product,
    }


def cmd_orbit(args) -> dict:
    doc = parse_map_document(_load_json(args.document))
    f = doc.map
    prime = args.prime or doc.prime or choose_prime(f)
    precision = args.precision or doc.precision
    start = _parse_point(args.start, f.n)
    nbhd = Neighbourhood(prime=prime, level=args.level, dim=f.n)
    result = iterate_in_neighbourhood(f, start, args.steps, nbhd, precision=precision)
    return {
        "prime": prime,
        "level": args.level,
        "precision": precision,
        "steps": args.steps,
        "points": [[x.digit_string() for x in pt] for pt in result.points],
        "stays_in_neighbourhood": result.stays_in_neighbourhood,
        "constant_mod_level": result.constant_mod_level,
        "unit_jacobian": result.unit_jacobian,
        "isometry_pairs_checked": result.isometry_pairs_checked,
        "isometry_pairs_skipped": result.isometry_pairs_skipped,
    }


def cmd_probe(args) -> dict:
    doc = parse_map_document(_load_json(args.document))
    f = doc.map
    start = _parse_point(args.start, f.n)
    degree = args.degree if args.degree is not None else 2
    m = f.components.linear_matrix()
    linear_diagonal = ratlinalg.is_diagonal(m) and all(
        comp.degree() is not None and comp.degree() <= 1 for comp in f.components
    )
    if linear_diagonal:
        lams = [m[i][i] for i in range(f.n)]
        est = closure_dimension_estimate(lams, start, args.points, degree)
        return {
            "mode": "diagonal",
            "eigenvalues": [_encode_rational(x) for x in lams],
            "lower_bound": est.lower_bound,
            "estimated_dimension": est.estimated_dimension,
            "consistent": est.consistent,
            "transform": [list(col) for col in est.transform],
            "multipliers": [_encode_rational(x) for x in est.multipliers],
            "kernel_dimension": len(est.probe.kernel),
            "kernel": [[_encode_rational(c) for c in vec] for vec in est.probe.kernel],
            "monomials": [list(mn) for mn in est.probe.monomials],
        }
    points = []
    current = tuple(start)
    for _ in range(args.points):
        points.append(current)
        current = f.components.eval(current)
    probe = relation_probe(points, degree)
    return {
        "mode": "orbit",
        "points_used": len(points),
        "degree": degree,
        "kernel_dimension": len(probe.kernel),
        "kernel": [[_encode_rational(c) for c in vec] for vec in probe.kernel],
        "monomials": [list(mn) for mn in probe.monomials],
        "sufficient_points": probe.sufficient_points,
    }


def cmd_vanishing(args) -> dict:
    data = _load_json(args.document)
    if not isinstance(data, dict):
        raise DocumentError("$", "document must be a JSON object")
    raw_a = data.get("coefficients")
    raw_b = data.get("units")
    if not isinstance(raw_a, list) or not isinstance(raw_b, list):
        raise DocumentError("coefficients/units", "expected lists of rationals")
    a = [_rational(x, f"coefficients[{i}]") for i, x in enumerate(raw_a)]
    b = [_rational(x, f"units[{i}]") for i, x in enumerate(raw_b)]
    prime = args.prime or data.get("prime")
    if not isinstance(prime, int):
        raise DocumentError("prime", "expected an integer prime")
    precision = args.precision or data.get("precision", DEFAULT_PRECISION)
    inst = VanishingSumInstance(a, b, prime, precision)
    report = vanishing_exponents(inst, args.smax)
    cert = report.certificate
    return {
        "prime": prime,
        "precision": precision,
        "smax": args.smax,
        "solutions": sorted(report.solutions),
        "certificate": {
            "stabilizing_exponent": cert.stabilizing_exponent,
            "log_digits": list(cert.log_digits),
            "logs_pairwise_distinct": cert.logs_pairwise_distinct,
            "leading_indices": list(cert.leading_indices),
            "separating_polynomial": {
                "coefficients": list(cert.separating.coefficients),
                "level": cert.separating.level,
                "target_index": cert.separating.target_index,
                "target_abs": _encode_rational(cert.separating.target_abs),
                "verified": cert.separating.verified,
            },
        },
    }


_COMMANDS = {
    "analyze": cmd_analyze,
    "linearize": cmd_linearize,
    "newton": cmd_newton,
    "eisenstein": cmd_eisenstein,
    "orbit": cmd_orbit,
    "probe": cmd_probe,
    "vanishing": cmd_vanishing,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="padicdyn",
        description="Exact p-adic analysis of polynomial self-maps near fixed points",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, with_degree=True):
        p.add_argument("document", help="path to the JSON input document")
        p.add_argument("--prime", type=int, default=None, help="odd working prime")
        p.add_argument("--precision", type=int, default=None, help="p-adic digits")
        if with_degree:
            p.add_argument("--degree", type=int, default=None, help="working degree")
        p.add_argument("--out", default=None, help="write the report to this path")
        p.add_argument(
            "--format", choices=("json", "text"), default="json", help="report format"
        )

    common(sub.add_parser("analyze", help="eigenvalues, resonances, relations"))
    common(sub.add_parser("linearize", help="order-by-order conjugacy"))
    newton = sub.add_parser("newton", help="Newton conjugacy with norm trace")
    common(newton)
    newton.add_argument("--c-const", default="1", help="diophantine constant C")
    newton.add_argument("--beta", default="0", help="diophantine exponent beta")
    common(sub.add_parser("eisenstein", help="algebraic series coefficients"))
    orbit = sub.add_parser("orbit", help="iterate inside an invariant neighbourhood")
    common(orbit, with_degree=False)
    orbit.add_argument("--start", required=True, help="comma-separated rational point")
    orbit.add_argument("--steps", type=int, default=10)
    orbit.add_argument("--level", type=int, default=1, help="neighbourhood level s")
    probe = sub.add_parser("probe", help="orbit relation kernel and closure bound")
    common(probe)
    probe.add_argument("--start", required=True, help="comma-separated rational point")
    probe.add_argument("--points", type=int, default=50)
    vanishing = sub.add_parser("vanishing", help="vanishing exponents of a unit power sum")
    common(vanishing, with_degree=False)
    vanishing.add_argument("--smax", type=int, default=200, help="exponent horizon")
    return parser


def _render_text(payload: dict) -> str:
    out: list[str] = []

    def walk(value, indent: str, label: str):
        if isinstance(value, dict):
            out.append(f"{indent}{label}:")
            for key in sorted(value):
                walk(value[key], indent + "  ", key)
        elif isinstance(value, list):
            out.append(f"{indent}{label}: " + json.dumps(value, sort_keys=True))
        else:
            out.append(f"{indent}{label}: {value}")

    for key in sorted(payload):
        walk(payload[key], "", key)
    return "\n".join(out) + "\n"


def run(argv: Sequence[str] | None = None) -> int:
    """Parse arguments, dispatch, and write the report; returns the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; that slot is reserved for
        # mathematical obstructions here
        return 0 if exc.code in (0, None) else USAGE_EXIT
    started = time.perf_counter()
    try:
        report = _COMMANDS[args.command](args)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": args.command,
            "arguments": {
                key: value
                for key, value in sorted(vars(args).items())
                if key not in ("command", "out", "format") and value is not None
            },
            "report": report,
        }
        exit_code = 0
    except DocumentError as exc:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": args.command,
            "error": {"kind": "document", "location": exc.path, "message": str(exc)},
        }
        exit_code = USAGE_EXIT
    except PadicDynError as exc:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": args.command,
            "error": {"kind": type(exc).__name__, "message": str(exc)},
        }
        exit_code = OBSTRUCTION_EXIT
    payload["timing_ms"] = round((time.perf_counter() - started) * 1000.0, 3)
    if getattr(args, "format", "json") == "text":
        rendered = _render_text(payload)
    else:
        rendered = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(rendered)
    else:
        sys.stdout.write(rendered)
    return exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
