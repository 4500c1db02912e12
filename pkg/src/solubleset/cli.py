"""Command-line interface.

Subcommands build certificates (catalog, blockset, amplify, trapezium,
product), verify them (exit 0 verified / 1 failed / 2 bad input), and render
figures with a CSV summary (report).  All randomness is seeded; the same
invocation with the same seed writes byte-identical certificate files.
"""

from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import click

from . import __version__
from .errors import SchemaError, SolubleSetError


class RationalParam(click.ParamType):
    name = "rational"

    def convert(self, value, param, ctx):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a rational (use p/q or an integer)", param, ctx)


class PointParam(click.ParamType):
    name = "point"

    def convert(self, value, param, ctx):
        try:
            x, y = value.split(",")
            return (float(x), float(y))
        except ValueError:
            self.fail(f"{value!r} is not an x,y pair", param, ctx)


RATIONAL = RationalParam()
POINT = PointParam()


def _write_certificate(cert, out: str | None):
    from .certificate import emit_json

    data = emit_json(cert)
    if out is None:
        sys.stdout.buffer.write(data)
    else:
        Path(out).write_bytes(data)
        click.echo(f"wrote {out}", err=True)


def _self_verify(cert):
    from .verify import verify_certificate

    report = verify_certificate(cert)
    click.echo(report.summary(), err=True)
    if not report.passed:
        raise SystemExit(1)


@click.group()
@click.version_option(__version__)
def main():
    """Build and verify certificates that point sets embed into sets with a
    transitive soluble group action."""


@main.command()
@click.option("--shape", required=True,
              type=click.Choice(["simplex", "cube", "orthoplex", "kgon",
                                 "icosahedron", "cell24"]))
@click.option("--d", type=int, default=None, help="dimension for simplex/cube/orthoplex")
@click.option("--k", type=int, default=None, help="gon order for kgon")
@click.option("--verify", "check", is_flag=True, help="re-verify before writing")
@click.option("--out", type=click.Path(), default=None)
def catalog(shape, d, k, check, out):
    """Vertex set of a regular polytope with its soluble transitive action."""
    from .catalog import catalog_build, catalog_certificate

    cert = catalog_certificate(catalog_build(shape, d=d, k=k))
    if check:
        _self_verify(cert)
    _write_certificate(cert, out)


@main.command()
@click.option("--alpha", type=RATIONAL, required=True)
@click.option("--beta", type=RATIONAL, required=True)
@click.option("--gamma", type=RATIONAL, required=True)
@click.option("--delta", type=RATIONAL, default=None)
@click.option("--i", "mult_i", type=int, required=True)
@click.option("--j", "mult_j", type=int, required=True)
@click.option("--p", type=int, default=None,
              help="override the prime (must exceed i+j+2)")
@click.option("--out", type=click.Path(), default=None)
def blockset(alpha, beta, gamma, delta, mult_i, mult_j, p, out):
    """Permutations of (alpha x i, beta x j, gamma[, delta]) inside a
    signed-permutation soluble set."""
    from .blockset import family_certificate

    family = "abcd" if delta is not None else "abc"
    cert = family_certificate(family, alpha, beta, gamma=gamma, delta=delta,
                              i=mult_i, j=mult_j, p=p)
    _write_certificate(cert, out)


@main.command()
@click.option("--input", "source", type=click.Choice(["dodecahedron", "hexagon"]),
              default="dodecahedron")
@click.option("--q", type=int, required=True, help="prime, at least the coset count")
@click.option("--mode", type=click.Choice(["sample", "full"]), default="sample")
@click.option("--n", type=int, default=10_000, help="sample count for sampled mode")
@click.option("--seed", type=int, default=0)
@click.option("--out", type=click.Path(), default=None)
def amplify(source, q, mode, n, seed, out):
    """Two-orbit amplification certificate (implicit containing set)."""
    from .amplify import two_orbit_amplify
    from .catalog import TWO_ORBIT_INPUTS

    cert = two_orbit_amplify(TWO_ORBIT_INPUTS[source](), q, mode=mode, n=n, seed=seed)
    _write_certificate(cert, out)


@main.command()
@click.option("--a", type=POINT, required=True)
@click.option("--b", type=POINT, required=True)
@click.option("--c", type=POINT, required=True)
@click.option("--d", type=POINT, required=True)
@click.option("--tol", type=float, default=1e-9)
@click.option("--route", type=click.Choice(["auto", "arc"]), default="auto",
              help="auto sends rectangles through the segment product")
@click.option("--out", type=click.Path(), default=None)
def trapezium(a, b, c, d, tol, route, out):
    """Isosceles trapezium inside a (possibly doubled) gon pair."""
    from .trapezium import build_trapezium_certificate, validate_trapezium

    cert = build_trapezium_certificate(validate_trapezium(a, b, c, d, tol=tol),
                                       route=route)
    _write_certificate(cert, out)


@main.command()
@click.argument("first", type=click.Path(exists=True))
@click.argument("second", type=click.Path(exists=True))
@click.option("--out", type=click.Path(), default=None)
def product(first, second, out):
    """Direct product of two verified certificates."""
    from .certificate import parse_json, product_certificate

    c1 = parse_json(Path(first).read_bytes())
    c2 = parse_json(Path(second).read_bytes())
    _write_certificate(product_certificate(c1, c2), out)


@main.command()
@click.argument("file", type=click.Path(exists=True))
@click.option("--escalate", type=click.Choice(["full"]), default=None,
              help="force the exhaustive sweep on implicit targets")
def verify(file, escalate):
    """Independently re-verify a certificate; exit 0 only if every clause passes."""
    from .certificate import parse_json
    from .verify import verify_certificate

    cert = parse_json(Path(file).read_bytes())
    report = verify_certificate(cert, escalate=escalate)
    click.echo(report.summary())
    raise SystemExit(0 if report.passed else 1)


@main.command()
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--outdir", type=click.Path(), default="report")
@click.option("--verify/--no-verify", "check", default=True,
              help="include verification results in the summary")
def report(files, outdir, check):
    """Render one figure per certificate plus summary.csv."""
    from .certificate import parse_json
    from .report import write_report
    from .verify import verify_certificate

    named = []
    reports = []
    for f in files:
        cert = parse_json(Path(f).read_bytes())
        named.append((Path(f).stem, cert))
        reports.append(verify_certificate(cert) if check else None)
    written = write_report(named, outdir, reports)
    for path in written:
        click.echo(f"wrote {path}", err=True)
    if check and any(r is not None and not r.passed for r in reports):
        raise SystemExit(1)


def entrypoint(argv=None):
    try:
        main.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:  # --help, --version
        return exc.exit_code
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return 2
    except click.ClickException as exc:
        exc.show()
        return 2
    except SystemExit as exc:
        return int(exc.code or 0)
    except (SolubleSetError, SchemaError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(entrypoint())
