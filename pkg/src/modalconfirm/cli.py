"""Command-line entry point.

Every subcommand writes JSON (with a ``manifest`` key) or CSV (whose first
line is ``# `` followed by the manifest JSON) to stdout.  Errors go to stderr
as one line ``error: <usage|parse|domain>: <reason>``; usage and parse
errors exit 2, domain errors exit 1.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, TextIO

from . import __version__
from .confidence import (
    IncompatibleModelError,
    WaldNormal,
    bits,
    evidence_from_json,
    rule_from_json,
)
from .hypothesis_space import AmbientMismatchError, RegionFormatError, region_from_json
from .kripke import FormulaSyntaxError, check, check_pep, frame_from_json, parse_formula
from .power import (
    ClosedForm,
    MonteCarlo,
    UnsupportedRuleError,
    d_value,
    d_value_conventions,
    power_curve,
    theta_grid,
)
from .rigged import rigged_level, topological_coverage
from .severity import (
    LOSSES,
    TheorySpec,
    constant_predictor,
    linear_predictor,
    test_adequacy,
)
from .verdict import run_test

SEED_ENV = "MODALCONFIRM_SEED"

# options holding JSON, per subcommand; decoded before dispatch
_JSON_OPTS = {
    "test": ("rule", "evidence", "null"),
    "power": ("rule", "null"),
    "dvalue": ("rule", "null"),
    "kripke": ("frame",),
    "rig": ("base", "payload"),
    "topo-coverage": ("rule",),
    "adequacy": ("params",),
}
# options whose values may start with "-"
_DASHED_VALUE_OPTS = ("--theta-grid", "--grid")


class InputError(ValueError):
    """Malformed input: bad JSON, unreadable file, bad grid spec."""


# -- argument helpers -------------------------------------------------------------

def _grid(text: str) -> list[float]:
    try:
        if ":" in text:
            a, b, k = text.split(":")
            return theta_grid(float(a), float(b), int(k))
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a:b:k or a comma-separated list, got {text!r}") from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def _load_json(value: Any, flag: str) -> Any:
    """Decode an option given as inline JSON or as a path to a JSON file."""
    if not isinstance(value, str):
        return value  # already decoded (manifest replay)
    text = value
    if not value.lstrip().startswith(("{", "[", '"')):
        try:
            text = Path(value).read_text()
        except OSError as exc:
            raise InputError(f"--{flag}: cannot read {value!r}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"--{flag}: invalid JSON at line {exc.lineno} column {exc.colno} "
                         f"(char {exc.pos}): {exc.msg}") from None


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} is not an integer: {raw!r}") from None


def _normalize_mc(ns: argparse.Namespace) -> None:
    mc = getattr(ns, "mc", None)
    if mc is None:
        return
    if len(mc) > 2:
        raise InputError("--mc takes REPS [SEED]")
    try:
        reps = int(mc[0])
        seed = int(mc[1]) if len(mc) == 2 else _default_seed()
    except ValueError:
        raise InputError(f"--mc expects integers, got {mc}") from None
    if reps < 1:
        raise InputError(f"--mc REPS must be positive, got {reps}")
    ns.mc = [reps, seed]


def _method(ns: argparse.Namespace) -> ClosedForm | MonteCarlo:
    if ns.mc is None:
        return ClosedForm()
    return MonteCarlo(ns.mc[0], ns.mc[1], ns.workers)


# -- output ------------------------------------------------------------------------

def _manifest(ns: argparse.Namespace) -> dict:
    config = {k: v for k, v in vars(ns).items() if k not in ("func", "command")}
    mc = config.get("mc")
    return {"subcommand": ns.command, "config": config,
            "seed": mc[1] if mc else None, "tool_version": __version__}


def _emit_json(ns: argparse.Namespace, payload: dict, out: TextIO) -> None:
    doc = dict(payload, manifest=_manifest(ns))
    out.write(json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n")


def _fmt(v: Any) -> str:
    return format(v, ".17g") if isinstance(v, float) else str(v)


def _emit_csv(ns: argparse.Namespace, header: Sequence[str], rows: Sequence[Sequence[Any]],
              out: TextIO) -> None:
    out.write("# " + json.dumps(_manifest(ns), sort_keys=True, separators=(",", ":")) + "\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])


# -- subcommands ---------------------------------------------------------------------

def cmd_test(ns: argparse.Namespace, out: TextIO) -> None:
    rule = rule_from_json(ns.rule)
    h0 = region_from_json(ns.null)
    e = evidence_from_json(ns.evidence, rule)
    _emit_json(ns, {"verdict": run_test(rule, e, h0).to_json()}, out)


def cmd_power(ns: argparse.Namespace, out: TextIO) -> None:
    rule = rule_from_json(ns.rule)
    h0 = region_from_json(ns.null)
    pts = power_curve(h0, rule, ns.theta_grid, ns.n, _method(ns))
    header = ["theta", "n", "beta", "delta0", "delta1", "delta", "indecisive", "method"]
    _emit_csv(ns, header, [[p.as_row()[k] for k in header] for p in pts], out)


def cmd_dvalue(ns: argparse.Namespace, out: TextIO) -> None:
    rule = rule_from_json(ns.rule)
    h0 = region_from_json(ns.null)
    if ns.conventions:
        if not isinstance(rule, WaldNormal):
            raise UnsupportedRuleError("--conventions needs a wald_normal rule")
        alpha = rule.alpha if ns.alpha is None else ns.alpha
        reps = d_value_conventions(h0, alpha, ns.theta_grid, ns.n, rule.sigma, _method(ns))
        _emit_json(ns, {"conventions": {k: r.to_json() for k, r in reps.items()}}, out)
        return
    rep = d_value(h0, rule, ns.theta_grid, ns.n, _method(ns), ns.alpha)
    _emit_json(ns, rep.to_json(), out)


def cmd_kripke(ns: argparse.Namespace, out: TextIO) -> None:
    frame, hyps = frame_from_json(ns.frame)
    phi = parse_formula(ns.formula, hyps)
    doc = check(frame, phi, ns.limit, ns.max_len).to_json()
    doc["formula"] = str(phi)
    if ns.pep_radius is not None:
        bad = check_pep(frame, ns.pep_radius, ns.max_len)
        doc["pep"] = {"radius": ns.pep_radius, "max_prefix_len": ns.max_len,
                      "counterexamples": len(bad), "certified": not bad}
    _emit_json(ns, doc, out)


def cmd_rig(ns: argparse.Namespace, out: TextIO) -> None:
    base = rule_from_json(ns.base)
    payload = region_from_json(ns.payload)
    if set(ns.trigger) - {"0", "1"} or not ns.trigger:
        raise InputError(f"--trigger must be a nonempty bit string, got {ns.trigger!r}")
    demo = rigged_level(base, bits(ns.trigger), payload, ns.grid)
    _emit_json(ns, demo.to_json(), out)


def cmd_topo(ns: argparse.Namespace, out: TextIO) -> None:
    rule = rule_from_json(ns.rule)
    kw: dict[str, Any] = {"n": ns.n}
    if ns.mc is not None:
        kw.update(reps=ns.mc[0], seed=ns.mc[1])
    pts = topological_coverage(rule, ns.grid, ns.horizon, **kw)
    rows = [[p.theta, p.coverage, p.topo_coverage] for p in pts]
    _emit_csv(ns, ["theta", "coverage", "topo_coverage"], rows, out)


_PREDICTORS: dict[str, Callable[..., Callable[[float], float]]] = {
    "constant": constant_predictor,
    "linear": linear_predictor,
}


def _read_trials(path: str, predictor: str | None) -> tuple[list[float], list[float], bool]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"--data: cannot read {path!r}: {exc.strerror}") from None
    reader = csv.DictReader(io.StringIO(text))
    cols = set(reader.fieldnames or ())
    has_pred = "predicted" in cols
    need = {"input", "actual"} if predictor else {"predicted", "actual"}
    if not need <= cols:
        raise InputError(f"--data: missing columns {sorted(need - cols)}")
    if predictor is None and not has_pred:
        raise InputError("--data has no 'predicted' column; pass --predictor")
    xs, ys = [], []
    for lineno, row in enumerate(reader, start=2):
        try:
            xs.append(float(row["input"] if predictor else row["predicted"]))
            ys.append(float(row["actual"]))
        except (TypeError, ValueError):
            raise InputError(f"--data line {lineno}: non-numeric value") from None
    return xs, ys, predictor is None


def cmd_adequacy(ns: argparse.Namespace, out: TextIO) -> None:
    xs, ys, precomputed = _read_trials(ns.data, ns.predictor)
    if precomputed:
        # the "input" is the stored prediction, so the predictor is the identity
        f = linear_predictor(1.0, 0.0)
    else:
        params = ns.params or {}
        if not isinstance(params, dict):
            raise InputError("--params must be a JSON object")
        try:
            f = _PREDICTORS[ns.predictor](**params)
        except TypeError as exc:
            raise InputError(f"--params: {exc}") from None
    spec = TheorySpec(f, ns.margin, ns.alpha, ns.loss)
    _emit_json(ns, test_adequacy(spec, xs, ys).to_json(), out)


def cmd_replay(ns: argparse.Namespace, out: TextIO) -> None:
    text = Path(ns.manifest).read_text() if ns.manifest != "-" else sys.stdin.read()
    first = text.lstrip()
    if first.startswith("#"):
        first = first[1:].splitlines()[0]
    try:
        doc = json.loads(first)
    except json.JSONDecodeError as exc:
        raise InputError(f"--manifest: invalid JSON at line {exc.lineno} column {exc.colno} "
                         f"(char {exc.pos}): {exc.msg}") from None
    man = doc.get("manifest", doc)
    sub = man.get("subcommand")
    if sub not in _HANDLERS:
        raise InputError(f"--manifest: unknown subcommand {sub!r}")
    inner = argparse.Namespace(command=sub, **man["config"])
    _HANDLERS[sub](inner, out)


_HANDLERS: dict[str, Callable[[argparse.Namespace, TextIO], None]] = {
    "test": cmd_test,
    "power": cmd_power,
    "dvalue": cmd_dvalue,
    "kripke": cmd_kripke,
    "rig": cmd_rig,
    "topo-coverage": cmd_topo,
    "adequacy": cmd_adequacy,
}


# -- parser ---------------------------------------------------------------------------

def _add_mc(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mc", nargs="+", metavar="REPS [SEED]",
                   help=f"Monte Carlo with REPS replicates; SEED defaults to ${SEED_ENV} or 0")
    p.add_argument("--workers", type=_positive_int, default=1,
                   help="parallel workers; results do not depend on this")


def build_parser() -> argparse.ArgumentParser:
    json_help = "inline JSON or path to a JSON file"
    parser = argparse.ArgumentParser(
        prog="modalconfirm",
        description="Trivalent hypothesis tests read off from confidence regions.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("test", help="classify one piece of evidence",
                       description="Build the confidence region for the evidence and report "
                                   "confirm_null, confirm_alt, indecisive or refuted_all.")
    p.add_argument("--rule", required=True, help=f"confidence rule, {json_help}")
    p.add_argument("--evidence", required=True,
                   help=f"observations, {json_help}; bit strings allowed for Bernoulli data")
    p.add_argument("--null", required=True, help=f"null hypothesis region, {json_help}")

    p = sub.add_parser("power", help="decisive power over a parameter grid (CSV)",
                       description="Per grid point: classical power beta, the partial "
                                   "decisive powers delta0 (confirm_alt) and delta1 "
                                   "(confirm_null), their sum delta and indecisiveness 1-delta. "
                                   "Closed form for wald_normal on the real line, otherwise --mc.")
    p.add_argument("--null", required=True, help=f"null hypothesis region, {json_help}")
    p.add_argument("--rule", required=True, help=f"confidence rule, {json_help}")
    p.add_argument("--theta-grid", required=True, type=_grid, help="a:b:k or comma list")
    p.add_argument("--n", required=True, type=_positive_int, help="sample size")
    _add_mc(p)

    p = sub.add_parser("dvalue", help="worst wrong-side decisive error over a grid (JSON)",
                       description="Largest probability, over the grid, of confirming the side "
                                   "that does not contain the true parameter.")
    p.add_argument("--null", required=True, help=f"null hypothesis region, {json_help}")
    p.add_argument("--rule", required=True, help=f"confidence rule, {json_help}")
    p.add_argument("--theta-grid", required=True, type=_grid, help="a:b:k or comma list")
    p.add_argument("--n", required=True, type=_positive_int, help="sample size")
    p.add_argument("--alpha", type=float, default=None,
                   help="nominal level to compare against (default: the rule's)")
    p.add_argument("--conventions", action="store_true",
                   help="report both the 1-2alpha and the 1-alpha interval conventions")
    _add_mc(p)

    p = sub.add_parser("kripke", help="model-check a modal formula on a finite frame (JSON)",
                       description="Worlds are (theta, evidence) pairs.  boxC/diamondC range "
                                   "over parameters in the confidence region, boxE/diamondE "
                                   "over extensions of the evidence.  Formula syntax: "
                                   "(diamondE (diamondC (atom H))), with and/or/not.")
    p.add_argument("--frame", required=True,
                   help=f"grid, alphabet, horizon, rule and named hypotheses, {json_help}")
    p.add_argument("--formula", required=True, help="s-expression over hypothesis names")
    p.add_argument("--limit", type=int, default=10, help="maximum counterexamples listed")
    p.add_argument("--max-len", type=int, default=None,
                   help="only count worlds with evidence of at most this length")
    p.add_argument("--pep-radius", type=_positive_int, default=None,
                   help="also check the precise extension property at this cell radius")

    p = sub.add_parser("rig", help="rig a binomial confidence rule on one outcome (JSON)",
                       description="Replace the region on one full-length outcome string by an "
                                   "arbitrary payload and report the union-bound level and "
                                   "exact coverage by enumeration.")
    p.add_argument("--base", required=True, help=f"base rule, {json_help}")
    p.add_argument("--trigger", required=True, help="outcome string such as 1011000")
    p.add_argument("--payload", required=True, help=f"region returned on the trigger, {json_help}")
    p.add_argument("--grid", type=_grid, default=_grid("0:1:101"), help="a:b:k or comma list")

    p = sub.add_parser("topo-coverage", help="coverage with nonempty interior (CSV)",
                       description="Per grid point, P(theta in c(E)) and P(theta in c(E) and "
                                   "c(E) has nonempty interior).  Exact for Bernoulli rules, "
                                   "Monte Carlo for normal rules.")
    p.add_argument("--rule", required=True, help=f"confidence rule, {json_help}")
    p.add_argument("--grid", required=True, type=_grid, help="a:b:k or comma list")
    p.add_argument("--horizon", type=_positive_int, default=None,
                   help="sequence length for Bernoulli rules")
    p.add_argument("--n", type=_positive_int, default=None, help="sample size for normal rules")
    p.add_argument("--mc", nargs="+", metavar="REPS [SEED]",
                   help=f"replicates for normal rules; SEED defaults to ${SEED_ENV} or 0")

    p = sub.add_parser("adequacy", help="severe test of a predictive theory (JSON)",
                       description="Equivalence test that the mean loss of the predictions "
                                   "lies within the margin.  The data CSV has columns "
                                   "predicted,actual or input,actual with --predictor.")
    p.add_argument("--data", required=True, help="CSV file")
    p.add_argument("--margin", required=True, type=float, help="adequacy margin M > 0")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--loss", choices=sorted(LOSSES), default="absolute")
    p.add_argument("--predictor", choices=sorted(_PREDICTORS), default=None)
    p.add_argument("--params", default=None,
                   help='predictor parameters, e.g. {"slope": 2, "intercept": 1}')

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest",
                       description="Accepts a JSON output, a CSV output or a bare manifest.")
    p.add_argument("--manifest", required=True, help="file path or - for stdin")
    return parser


def _join_dashed_values(argv: list[str]) -> list[str]:
    # "--theta-grid -1:1:41" would otherwise be read as an unknown option
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _DASHED_VALUE_OPTS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _fail(kind: str, msg: str) -> None:
    print(f"error: {kind}: {' '.join(str(msg).split())}", file=sys.stderr)


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    argv = _join_dashed_values(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage and reason
        return int(exc.code or 0)
    try:
        for flag in _JSON_OPTS.get(ns.command, ()):
            val = getattr(ns, flag)
            if val is not None:
                setattr(ns, flag, _load_json(val, flag))
        _normalize_mc(ns)
        if ns.command == "adequacy":
            ns.data_sha256 = hashlib.sha256(Path(ns.data).read_bytes()).hexdigest() \
                if Path(ns.data).is_file() else None
        handler = cmd_replay if ns.command == "replay" else _HANDLERS[ns.command]
        buf = io.StringIO()
        handler(ns, buf)
    except (InputError, RegionFormatError, FormulaSyntaxError) as exc:
        _fail("parse", str(exc))
        return 2
    except (AmbientMismatchError, IncompatibleModelError, UnsupportedRuleError,
            ValueError, OSError) as exc:
        _fail("domain", f"{type(exc).__name__}: {exc}")
        return 1
    out.write(buf.getvalue())
    return 0


if __name__ == "__main__":
    sys.exit(main())
