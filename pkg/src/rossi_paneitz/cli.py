"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 identity-suite failure,
3 reproduction failure.

    rossi-paneitz verify
    rossi-paneitz paneitz --t 1/2 --kmax 10
    rossi-paneitz sphere --max-degree 8
    rossi-paneitz kohn --t 1/2 --max-degree 8
    rossi-paneitz basis dump --p 2 --q 1
"""

from __future__ import annotations

import csv
import io
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

import click

from . import crops, spectral
from .algebra import format_polynomial, parse_polynomial
from .harmonics import harmonic_basis

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IDENTITY = 2
EXIT_REPRODUCTION = 3

_RATIONAL_RE = re.compile(r"^[-+]?\d+(?:/\d+)?$")


def rational_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_t_values(text: str, allow_float: bool = False) -> list:
    values = []
    for item in str(text).split(","):
        item = item.strip()
        if not item:
            continue
        if _RATIONAL_RE.match(item):
            t = Fraction(item)
        elif allow_float:
            try:
                t = Fraction(float(item))
            except ValueError:
                raise click.BadParameter(f"cannot parse t value {item!r}") from None
        else:
            raise click.BadParameter(
                f"t must be an exact rational like 1/2, got {item!r} (use --float-t for decimals)"
            )
        if not abs(t) < 1:
            raise click.BadParameter(
                f"t = {item} is not strictly pseudoconvex: need 1 - t^2 > 0"
            )
        values.append(t)
    if not values:
        raise click.BadParameter("no t values given")
    return values


# config keys that differ from the click parameter names
_CONFIG_ALIASES = {"t": "t_text", "format": "fmt"}


def load_config(path: str) -> dict:
    """Flat ``key = value`` file; '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.BadParameter(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        out[_CONFIG_ALIASES.get(key, key)] = value
    return out


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def to_json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _matrix_dump(pair) -> dict:
    def fmt(m):
        return [[str(x) for x in row] for row in m]

    return {"A": fmt(pair.A), "G": fmt(pair.G)}


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Flat key = value file supplying option defaults.")
@click.pass_context
def cli(ctx, config_path):
    """Exact spectral computations on the CR 3-sphere and the Rossi spheres."""
    if config_path:
        values = load_config(config_path)
        ctx.default_map = {
            name: dict(values) for name in ("verify", "paneitz", "sphere", "kohn")
        }
        ctx.default_map["basis"] = {"dump": dict(values)}


_format_option = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
_out_option = click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output file (default stdout).")


@cli.command()
@click.option("--t", "t_text", default="0,1/2,-1/3", show_default=True)
@click.option("--samples", type=click.IntRange(min=1), default=20, show_default=True)
@click.option("--max-sample-degree", type=click.IntRange(min=0), default=6, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--inject-fault", is_flag=True, hidden=True, help="Corrupt the connection form (test only).")
@_format_option
@_out_option
def verify(t_text, samples, max_sample_degree, seed, inject_fault, fmt, out):
    """Run the exact identity suite; exit 2 if any identity fails."""
    ts = parse_t_values(t_text)
    records = []
    for t in ts:
        geom = crops.connection_data(t)
        if inject_fault:
            geom = geom.corrupted()
        records.extend(crops.verify_structure_equations(geom, samples, max_sample_degree, seed))
    reeb = crops.reeb_checks()
    passed = crops.structure_ok(records) and all(reeb.values())
    if fmt == "json":
        text = to_json({"command": "verify", "passed": passed, "reeb": reeb, "records": records})
    else:
        text = to_csv(
            ["identity", "t", "seed", "samples", "passed", "witness"],
            [[r["identity"], r["t"], r["seed"], r["samples"], r["passed"], r["witness"] or ""] for r in records],
        )
    emit(text, out)
    return EXIT_OK if passed else EXIT_IDENTITY


def _seed_choice(text: str):
    if text == "default" or text.startswith("random:"):
        if text.startswith("random:") and not text[len("random:"):].lstrip("-").isdigit():
            raise click.BadParameter(f"bad random seed in {text!r}")
        return text
    if text.startswith("file:"):
        path = Path(text[len("file:"):])
        if not path.is_file():
            raise click.BadParameter(f"seed file {path} not found")
        polys = [parse_polynomial(line) for line in path.read_text().splitlines()
                 if line.strip() and not line.startswith("#")]
        return ("file", tuple(polys))
    raise click.BadParameter(f"unknown seed choice {text!r}")


def _seed_for_k(choice, k):
    if isinstance(choice, tuple):
        for poly in choice[1]:
            if poly.bidegrees() == {(2 * k - 1, 0)}:
                return poly
        raise click.BadParameter(f"seed file has no polynomial of bidegree ({2 * k - 1},0)")
    return choice


@cli.command("paneitz")
@click.option("--t", "t_text", default="1/2", show_default=True)
@click.option("--kmax", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--precision", type=click.IntRange(min=64), default=128, show_default=True)
@click.option("--seed-choice", default="default", show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--float-t", is_flag=True, help="Accept decimal t; output is labelled numeric-only.")
@_format_option
@_out_option
def paneitz_cmd(t_text, kmax, precision, seed_choice, jobs, float_t, fmt, out):
    """Sweep det and negative eigenvalues of (1 - t^2)^2 P(t) on V_k."""
    ts = parse_t_values(t_text, allow_float=float_t)
    if any(t == 0 for t in ts):
        raise click.BadParameter("t = 0 is the standard sphere, not a Rossi sphere; use `sphere`")
    choice = _seed_choice(seed_choice)
    if isinstance(choice, tuple):
        choice = {k: _seed_for_k(choice, k) for k in range(1, kmax + 1)}
    rows = spectral.negative_spectrum_sweep(ts, kmax, precision, choice, jobs=jobs, exact=not float_t)
    mode = "numeric-only" if float_t else "exact"
    failures = [r for r in rows if not r.reproduced]
    records = []
    for r in rows:
        rec = {
            "k": r.k,
            "t": rational_str(r.t),
            "det_sign": r.det_sign,
            "eigenvalues": r.eigenvalues,
            "negative_count": r.negative_count,
            "kernel_dim": r.kernel_dim,
            "exact_det": rational_str(r.exact_det) if r.exact_det is not None else None,
        }
        if not r.reproduced:
            rec["matrices"] = _matrix_dump(r.pair)
        records.append(rec)
    if fmt == "json":
        text = to_json({"command": "paneitz", "mode": mode, "precision": precision,
                        "reproduced": not failures, "records": records})
    else:
        text = to_csv(
            ["k", "t", "det_sign", "negative_count", "kernel_dim", "exact_det", "min_eigenvalue", "eigenvalues", "mode"],
            [[r["k"], r["t"], r["det_sign"], r["negative_count"], r["kernel_dim"], r["exact_det"],
              repr(r["eigenvalues"][0]), ";".join(repr(v) for v in r["eigenvalues"]), mode] for r in records],
        )
    emit(text, out)
    if failures:
        for r in failures:
            click.echo(f"claim not reproduced for k={r.k}, t={rational_str(r.t)}: "
                       f"det_sign={r.det_sign}, negative_count={r.negative_count}", err=True)
            click.echo(json.dumps(_matrix_dump(r.pair)), err=True)
        return EXIT_REPRODUCTION
    return EXIT_OK


@cli.command()
@click.option("--max-degree", type=click.IntRange(min=0), default=8, show_default=True)
@_format_option
@_out_option
def sphere(max_degree, fmt, out):
    """Check P(0) >= 0, its kernel, and the Kohn eigenvalue law at t = 0."""
    rep = spectral.sphere_report(max_degree)
    min_pos = rep["min_positive_kohn"]
    half_scal = rep["scal"] / 2
    bound_equality = min_pos is None or Fraction(min_pos) == half_scal
    ok = (rep["kohn_ok"] and rep["paneitz_ok"] and rep["nonnegative"]
          and rep["kernel_is_pluriharmonic"] and bound_equality)
    if fmt == "json":
        text = to_json({
            "command": "sphere",
            "max_degree": max_degree,
            "passed": ok,
            "paneitz_law_exact": rep["paneitz_ok"],
            "kohn_law_exact": rep["kohn_ok"],
            "nonnegative": rep["nonnegative"],
            "kernel": [f"H({p},{q})" for p, q in rep["kernel"]],
            "min_positive_kohn": min_pos,
            "scal_over_2": rational_str(half_scal),
            "rows": rep["rows"],
        })
    else:
        text = to_csv(["p", "q", "paneitz", "kohn", "paneitz_ok", "kohn_ok"],
                      [[r["p"], r["q"], r["paneitz"], r["kohn"], r["paneitz_ok"], r["kohn_ok"]] for r in rep["rows"]])
    emit(text, out)
    return EXIT_OK if ok else EXIT_REPRODUCTION


@cli.command()
@click.option("--t", "t_text", default="1/2", show_default=True)
@click.option("--max-degree", type=click.IntRange(min=1), default=8, show_default=True)
@click.option("--cutoffs", default=None, help="Comma-separated cutoffs (default: even N up to max degree).")
@click.option("--precision", type=click.IntRange(min=64), default=128, show_default=True)
@_format_option
@_out_option
def kohn(t_text, max_degree, cutoffs, precision, fmt, out):
    """Smallest positive Kohn eigenvalue over growing degree cutoffs."""
    ts = parse_t_values(t_text)
    if any(t == 0 for t in ts):
        raise click.BadParameter(
            "t = 0: the standard sphere has closed range, no accumulation trend expected"
        )
    if cutoffs:
        try:
            cuts = sorted({int(c) for c in cutoffs.split(",") if c.strip()})
        except ValueError:
            raise click.BadParameter(f"bad cutoffs {cutoffs!r}") from None
        if not cuts or cuts[0] < 1 or cuts[-1] > max_degree:
            raise click.BadParameter(f"cutoffs must lie in 1..{max_degree}")
    else:
        cuts = list(range(2, max_degree + 1, 2)) or [1]
    results = []
    ok = True
    for t in ts:
        seq = spectral.kohn_min_positive(t, max_degree, cuts, precision)
        values = [v for _, v in seq]
        decreasing = all(b < a for a, b in zip(values, values[1:]))
        ok &= decreasing
        results.append({"t": rational_str(t), "decreasing": decreasing,
                        "sequence": [{"cutoff": n, "min_positive": v} for n, v in seq]})
    if fmt == "json":
        text = to_json({"command": "kohn", "precision": precision, "passed": ok, "results": results})
    else:
        text = to_csv(["t", "cutoff", "min_positive"],
                      [[r["t"], s["cutoff"], repr(s["min_positive"])] for r in results for s in r["sequence"]])
    emit(text, out)
    return EXIT_OK if ok else EXIT_REPRODUCTION


@cli.group()
def basis():
    """Harmonic basis utilities."""


@basis.command("dump")
@click.option("--p", type=click.IntRange(min=0), default=None)
@click.option("--q", type=click.IntRange(min=0), default=None)
@click.option("--max-degree", type=click.IntRange(min=0), default=None,
              help="Dump every H(p,q) with p + q <= this.")
@_out_option
def basis_dump(p, q, max_degree, out):
    """Print bases of H(p,q) in the polynomial text format."""
    if max_degree is not None:
        pairs = [(a, n - a) for n in range(max_degree + 1) for a in range(n, -1, -1)]
    elif p is not None and q is not None:
        pairs = [(p, q)]
    else:
        raise click.BadParameter("give --p and --q, or --max-degree")
    lines = []
    for a, b in pairs:
        space = harmonic_basis(a, b)
        lines.append(f"# H({a},{b}) dim={space.dim}")
        lines.extend(format_polynomial(f) for f in space.basis)
    emit("\n".join(lines) + "\n", out)
    return EXIT_OK


def main(argv=None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="rossi-paneitz", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_CONFIG
    except click.ClickException as exc:
        exc.show()
        return EXIT_CONFIG
    except (crops.GeometryError, spectral.SeedError) as exc:
        click.echo(f"Error: {exc}", err=True)
        return EXIT_CONFIG
    except crops.ConsistencyError as exc:
        click.echo(f"Error: {exc}", err=True)
        return EXIT_IDENTITY
    except spectral.InvarianceError as exc:
        click.echo(f"Error: {exc}", err=True)
        return EXIT_REPRODUCTION
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
