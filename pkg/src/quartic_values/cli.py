"""Command-line front end.

Exit codes: 0 verdict produced and self-verified, 2 parse or usage error,
3 unsupported input (degree 0 or above 4), 4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .classify import analyze
from .exact import ParseError, normalize, parse_poly
from .oracle import density_table, enumerate_values, naive_values, verify_certificate
from .report import UNBOUNDED, InternalInconsistency, UnsupportedInput, canonical_json

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3
EXIT_INTERNAL = 4

SELF_CHECK_BOX = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits with 2 as well; keep our own message format
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quartic-values", description="Value sets of integer polynomials of degree at most four.")
    sub = p.add_subparsers(dest="command", required=True)

    def poly_args(sp):
        sp.add_argument("polynomial", nargs="?", help="polynomial in x and y, e.g. '(x^2-2*y^2)^2 + x'")
        sp.add_argument("--file", help="read the polynomial from this file instead")
        sp.add_argument("--json", dest="json_out", help="write the JSON result to this path")
        sp.add_argument("-v", "--verbose", action="store_true", help="print the full JSON result")

    a = sub.add_parser("analyze", help="route the polynomial to a verdict with a certificate")
    poly_args(a)
    w = sub.add_parser("witness", help="descent witness for polynomials unbounded below")
    poly_args(w)
    w.add_argument("--below", default="-1000000", help="target value (default -1000000)")
    o = sub.add_parser("oracle", help="distinct values in a box")
    poly_args(o)
    o.add_argument("--box", type=int, required=True)
    o.add_argument("--range", dest="limit", type=int, required=True)
    o.add_argument("--plot", help="also write a PNG plot of the attained values to this path")
    d = sub.add_parser("density", help="value counts at several N with a fitted class")
    poly_args(d)
    d.add_argument("--N", dest="Ns", required=True, help="comma-separated list of N")
    d.add_argument("--plot", help="also write a PNG plot of the counts to this path")
    v = sub.add_parser("verify", help="re-check a saved report")
    v.add_argument("file")
    return p


def _read_poly(args) -> tuple[str, object]:
    if args.file:
        text = Path(args.file).read_text().strip()
    elif args.polynomial:
        text = args.polynomial
    else:
        raise UsageError("a polynomial or --file is required")
    return text, parse_poly(text)


def _supported(F) -> None:
    if F.degree < 1 or F.degree > 4:
        raise UnsupportedInput(f"degree {F.degree} is outside the supported range 1..4")


def _emit(args, payload: dict) -> None:
    text = canonical_json(payload)
    if args.json_out:
        Path(args.json_out).write_text(text)
    if getattr(args, "verbose", False):
        sys.stdout.write(text)


def _cmd_analyze(args, target=None) -> int:
    text, F = _read_poly(args)
    report = analyze(text, target) if target is not None else analyze(text)
    data = report.to_json()
    print(f"polynomial: {data['input']['canonical']}")
    print(f"verdict:    {report.verdict.label}")
    print("path:       " + " > ".join(s.node for s in report.trace))
    if report.verdict.tag == UNBOUNDED:
        pts = report.certificate["points"]
        print(f"witness:    {report.certificate['family']}, {len(pts)} points")
        for x, y, val in pts[-3:]:
            print(f"  F({x}, {y}) = {val}")
    _emit(args, data)
    return EXIT_OK


def _cmd_witness(args) -> int:
    try:
        target = Fraction(args.below)
    except ValueError:
        raise UsageError(f"--below expects a rational number, got {args.below!r}")
    return _cmd_analyze(args, target)


def _cmd_oracle(args) -> int:
    if args.box < 1 or args.limit < 1:
        raise UsageError("--box and --range must be positive")
    _, F = _read_poly(args)
    _supported(F)
    G, _ = normalize(F)
    table = enumerate_values(G, args.box, args.limit)
    # cross-check the fast enumeration against the plain double loop on a small box
    small = min(args.box, SELF_CHECK_BOX)
    if set(enumerate_values(G, small, args.limit).values) != naive_values(G, small, args.limit):
        raise InternalInconsistency("fast enumeration disagrees with the double loop")
    data = table.to_json()
    data["note"] = "values of the normalized polynomial"
    print(f"box {table.box}, range {table.limit}: {len(table.values)} distinct values, "
          f"{table.count_positive()} in [1, {table.limit}], exhaustive={table.exhaustive}")
    if args.plot:
        _plot_values(table, args.plot)
    _emit(args, data)
    return EXIT_OK


def _parse_Ns(raw: str) -> list[int]:
    parts = [s for s in raw.replace(" ", "").split(",") if s]
    if not parts:
        raise UsageError("--N needs at least one value")
    try:
        Ns = [int(s) for s in parts]
    except ValueError:
        raise UsageError(f"--N expects integers, got {raw!r}")
    if any(n < 1 for n in Ns):
        raise UsageError("--N values must be positive")
    return Ns


def _cmd_density(args) -> int:
    Ns = _parse_Ns(args.Ns)
    text, F = _read_poly(args)
    report = analyze(text)
    predicted = report.verdict.density_class
    G, _ = normalize(F)
    fit = density_table(G, Ns, predicted)
    sys.stdout.write(fit.csv())
    print(f"class: {fit.fitted}")
    if args.plot:
        _plot_density(fit, args.plot)
    _emit(args, {"verdict": report.verdict.to_json(), "density": fit.to_json()})
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        data = json.loads(Path(args.file).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read report: {exc}")
    res = verify_certificate(data)
    if res.ok:
        print("certificate verified")
        return EXIT_OK
    for r in res.reasons:
        print(f"failed: {r}", file=sys.stderr)
    return EXIT_INTERNAL


# ---------------------------------------------------------------------------
# Optional plots


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _plot_values(table, path: str) -> None:
    plt = _pyplot()
    vals = sorted(v for v in table.values if 1 <= v <= table.limit)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.step(vals, range(1, len(vals) + 1), where="post")
    ax.set_xlabel("n")
    ax.set_ylabel("attained values in [1, n]")
    ax.set_title(f"box {table.box}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_density(fit, path: str) -> None:
    plt = _pyplot()
    Ns = [r[0] for r in fit.rows]
    counts = [r[1] for r in fit.rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(Ns, counts, "o-", label="count")
    ax.set_xlabel("N")
    ax.set_ylabel("attained values in [1, N]")
    ax.set_title(f"fitted class: {fit.fitted}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


COMMANDS = {
    "analyze": _cmd_analyze,
    "witness": _cmd_witness,
    "oracle": _cmd_oracle,
    "density": _cmd_density,
    "verify": _cmd_verify,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedInput as exc:
        print(f"unsupported input: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
