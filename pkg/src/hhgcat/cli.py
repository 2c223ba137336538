"""Command-line front end: ``hhgcat figure ...``, ``hhgcat replay ...`` and ``hhgcat check``."""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .check import report, timed_check
from .errors import DegenerateMeasurementError, DimensionError, ZeroStateError
from .figures import FIGURES, FigureParams, build
from .output import sha256, write_bundle
from .wigner import Window

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_DEGENERATE = 0, 1, 2, 3

COMPLEX_KEYS = ("alpha", "delta_alpha", "delta_alpha2", "gamma")
REAL_KEYS = ("theta", "phi", "step", "squeeze")
PARAM_KEYS = COMPLEX_KEYS + REAL_KEYS + ("truncation", "window")


class UsageError(Exception):
    pass


def parse_number(text: str) -> complex:
    """Decimal reals (``-0.9``, ``1e-3``) and complex literals (``1+0.5j``)."""
    t = str(text).strip().replace(" ", "")
    if not t:
        raise UsageError("empty number")
    try:
        z = complex(t)
    except ValueError:
        raise UsageError(f"malformed number {text!r}") from None
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise UsageError(f"non-finite number {text!r}")
    return z


def parse_real(text: str) -> float:
    z = parse_number(text)
    if z.imag != 0:
        raise UsageError(f"expected a real number, got {text!r}")
    return z.real


def parse_int(text: str) -> int:
    x = parse_real(text)
    if x != int(x):
        raise UsageError(f"expected an integer, got {text!r}")
    return int(x)


def parse_window(text: str) -> Window:
    """``L`` for ``[-L, L]^2`` or ``xmin,xmax,pmin,pmax``."""
    parts = [p for p in str(text).split(",")]
    if len(parts) == 1:
        L = parse_real(parts[0])
        vals = [-L, L, -L, L]
    elif len(parts) == 4:
        vals = [parse_real(p) for p in parts]
    else:
        raise UsageError(f"window needs 1 or 4 comma-separated numbers, got {text!r}")
    try:
        return Window(*vals)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _simplify(z: complex):
    return z.real if z.imag == 0 else z


def parse_value(key: str, text: str):
    if key in COMPLEX_KEYS:
        return _simplify(parse_number(text))
    if key in REAL_KEYS:
        return parse_real(text)
    if key == "truncation":
        return parse_int(text)
    if key == "window":
        return parse_window(text)
    raise UsageError(f"unknown parameter {key!r}")


def read_config(path: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment; dashes and underscores are interchangeable."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in PARAM_KEYS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        out[key] = value
    return out


def resolve_params(args: argparse.Namespace) -> FigureParams:
    raw = read_config(args.config) if args.config else {}
    for key in PARAM_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            raw[key] = flag
    values = {k: parse_value(k, v) for k, v in raw.items()}
    if "truncation" in values and not 1 <= values["truncation"] <= 200:
        raise UsageError("truncation must lie in 1..200")
    if "step" in values and not values["step"] > 0:
        raise UsageError("step must be positive")
    if "theta" in values and not 0 < values["theta"] <= math.pi / 2:
        raise UsageError("theta must lie in (0, pi/2]")
    return FigureParams(**values)


def params_from_manifest(doc: dict) -> FigureParams:
    values = {}
    for k, v in doc.get("params", {}).items():
        if v is None:
            continue
        if k == "window":
            v = Window(*v)
        elif k in COMPLEX_KEYS and isinstance(v, list):
            v = _simplify(complex(*v))
        values[k] = v
    return FigureParams(**values)


def manifest_for(figure: str, params: FigureParams) -> dict:
    return {"command": f"figure {figure}", "figure": figure, "params": params.as_dict(), "version": __version__}


def run_figure(figure: str, params: FigureParams, out_dir: Path) -> dict:
    """Compute all datasets of ``figure`` first, then write them and the manifest."""
    files = build(figure, params)
    return write_bundle(out_dir, files, manifest_for(figure, params))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hhgcat", description="Optical cat states conditioned on high-harmonic generation.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="emit the datasets behind one figure")
    fig.add_argument("figure", choices=FIGURES)
    fig.add_argument("--out", required=True, help="output directory")
    fig.add_argument("--config", help="key=value file; flags take precedence")
    fig.add_argument("--alpha", help="drive amplitude (cat centre for fig7/fig8)")
    fig.add_argument("--delta-alpha", dest="delta_alpha", help="HHG shift")
    fig.add_argument("--delta-alpha2", dest="delta_alpha2", help="second-medium shift (fig6)")
    fig.add_argument("--theta", help="mixing angle in radians (fig7/fig8)")
    fig.add_argument("--phi", help="extra arm delay phase (fig3/fig4)")
    fig.add_argument("--gamma", help="amplification displacement (fig6)")
    fig.add_argument("--truncation", help="Fock truncation (fig1)")
    fig.add_argument("--window", help="L or xmin,xmax,pmin,pmax")
    fig.add_argument("--step", help="grid step")
    fig.add_argument("--squeeze", help="squeezing parameter (fig1)")

    rep = sub.add_parser("replay", help="rerun a manifest and compare checksums")
    rep.add_argument("manifest")
    rep.add_argument("--out", help="output directory (default: next to the manifest)")

    chk = sub.add_parser("check", help="run the coherent-vs-Fock invariant suite")
    chk.add_argument("--regime", choices=("standard", "extended"), default="standard")
    return ap


def _cmd_figure(args) -> int:
    params = resolve_params(args)
    manifest = run_figure(args.figure, params, Path(args.out))
    print(f"wrote {len(manifest['files'])} files to {args.out}")
    return EXIT_OK


def _cmd_replay(args) -> int:
    path = Path(args.manifest)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
        figure = doc["figure"]
        params = params_from_manifest(doc)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"unreadable manifest {path}: {exc}") from None
    if figure not in FIGURES:
        raise UsageError(f"unknown figure {figure!r} in manifest")
    files = build(figure, params)
    expected = {f["path"]: f["sha256"] for f in doc.get("files", [])}
    got = {name: sha256(text.encode("utf-8")) for name, text in files.items()}
    out = Path(args.out) if args.out else path.parent
    write_bundle(out, files, manifest_for(figure, params))
    bad = sorted(n for n in expected.keys() | got.keys() if expected.get(n) != got.get(n))
    for n in bad:
        print(f"MISMATCH {n}")
    print(f"replayed {figure}: {len(got) - len(bad)}/{len(got)} files identical")
    return EXIT_CHECK if bad else EXIT_OK


def _cmd_check(args) -> int:
    results, elapsed = timed_check(args.regime)
    print(report(results, elapsed))
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"figure": _cmd_figure, "replay": _cmd_replay, "check": _cmd_check}[args.command]
    try:
        return handler(args)
    except UsageError as exc:
        print(f"hhgcat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ZeroStateError, DegenerateMeasurementError) as exc:
        print(f"hhgcat: degenerate pipeline: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ValueError, DimensionError) as exc:
        print(f"hhgcat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
