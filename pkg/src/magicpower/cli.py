"""``magicpower`` command line: run, replay and list experiments.

Precedence for every setting is: command-line flag, then the JSON config
file, then the experiment's default.  Exit codes: 0 success, 1 replay
mismatch, 2 configuration error, 3 resource-guard rejection.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import secrets
import sys
from pathlib import Path
from typing import Any, Sequence

from .config import ResourceError
from .experiments import BOOKKEEPING, EXPERIMENTS, ConfigError, Row, run_experiment

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_CONFIG = 2
EXIT_RESOURCE = 3

FORMATS = ("csv", "json")


def cell(value: Any) -> str:
    """Canonical text of a value; reals use ``repr`` so they round-trip exactly."""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(rows: list[Row], fmt: str, stream) -> None:
    if fmt == "json":
        json.dump(rows, stream, indent=1, allow_nan=True)
        stream.write("\n")
        return
    if not rows:
        return
    writer = csv.DictWriter(stream, fieldnames=list(rows[0]), lineterminator="\r\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: cell(v) for k, v in row.items()})


def read_rows(path: Path) -> list[dict[str, str]]:
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith("["):
        return [{k: cell(v) for k, v in row.items()} for row in json.loads(text)]
    return list(csv.DictReader(io.StringIO(text, newline="")))


def _detect_format(path: Path | None, explicit: str | None, configured: str | None) -> str:
    fmt = explicit or configured
    if fmt is None and path is not None and path.suffix.lower() == ".json":
        fmt = "json"
    fmt = (fmt or "csv").lower()
    if fmt not in FORMATS:
        raise ConfigError(f"unknown format {fmt!r}; expected csv or json")
    return fmt


def load_config(path: Path) -> dict[str, Any]:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "experiment" not in doc:
        raise ConfigError("config must be a JSON object with an 'experiment' key")
    allowed = {"experiment", "parameters", "seed", "output_path", "format"}
    extra = sorted(set(doc) - allowed)
    if extra:
        raise ConfigError(f"unknown config key(s): {', '.join(extra)}")
    params = doc.get("parameters", {})
    if not isinstance(params, dict):
        raise ConfigError("'parameters' must be an object")
    return doc


def _seed(value: Any) -> int:
    if value is None:
        return secrets.randbits(63)
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise ConfigError(f"seed must be a non-negative integer, got {value!r}")
    return value


def cmd_run(args: argparse.Namespace) -> int:
    doc = load_config(Path(args.config))
    params = dict(doc.get("parameters", {}))
    # a seed inside the parameter map is accepted as well
    seed = _seed(args.seed if args.seed is not None else doc.get("seed", params.pop("seed", None)))
    params.pop("seed", None)
    out = args.out or doc.get("output_path")
    out_path = Path(out) if out else None
    fmt = _detect_format(out_path, args.format, doc.get("format"))
    rows = run_experiment(str(doc["experiment"]), params, seed)
    if out_path is None:
        write_rows(rows, fmt, sys.stdout)
    else:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            write_rows(rows, fmt, fh)
        print(f"wrote {len(rows)} rows to {out_path} (seed {seed})", file=sys.stderr)
    return EXIT_OK


def compare_rows(recorded: list[dict[str, str]], fresh: list[Row]) -> str | None:
    """First difference between two result tables, ignoring wall time."""
    if len(recorded) != len(fresh):
        return f"row count differs: file has {len(recorded)}, replay produced {len(fresh)}"
    for i, (old, new) in enumerate(zip(recorded, fresh)):
        keys = [k for k in new if k != "wall_time_ms"]
        if set(old) - {"wall_time_ms"} != set(keys):
            return f"row {i}: column sets differ"
        for k in keys:
            if old[k] != cell(new[k]):
                return f"row {i}: column {k!r} recorded {old[k]} but replay gives {cell(new[k])}"
    return None


def cmd_replay(args: argparse.Namespace) -> int:
    path = Path(args.file)
    try:
        recorded = read_rows(path)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except (json.JSONDecodeError, csv.Error) as exc:
        raise ConfigError(f"{path} is not a result file: {exc}") from None
    if not recorded or "config" not in recorded[0]:
        raise ConfigError(f"{path} has no recorded config column")
    doc = json.loads(recorded[0]["config"])
    try:
        seed = int(doc["seed"])
    except (KeyError, TypeError, ValueError):
        raise ConfigError("recorded config has no valid seed") from None
    fresh = run_experiment(doc["experiment"], doc["parameters"], seed)
    problem = compare_rows(recorded, fresh)
    if problem:
        print(f"MISMATCH {problem}")
        return EXIT_MISMATCH
    print(f"OK {len(fresh)} rows reproduced ({doc['experiment']}, seed {seed})")
    return EXIT_OK


def cmd_list(args: argparse.Namespace) -> int:
    for name, exp in EXPERIMENTS.items():
        print(f"{name}: {exp.summary}")
        if exp.max_qubits is not None:
            print(f"  limit: {exp.size_key} <= {exp.max_qubits}")
        for key, p in exp.params.items():
            print(f"  {key} ({p.kind}, default {json.dumps(p.default)}): {p.help}")
    print(f"output columns always include: {', '.join(('estimate', 'std_error', 'n_samples') + BOOKKEEPING)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="magicpower", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an experiment from a JSON config")
    run.add_argument("--config", required=True, help="JSON config path")
    run.add_argument("--seed", type=int, help="master seed (overrides the config)")
    run.add_argument("--out", help="output path (default: stdout)")
    run.add_argument("--format", choices=FORMATS, help="output format (default: from extension, else csv)")
    run.set_defaults(func=cmd_run)
    replay = sub.add_parser("replay", help="re-run a result file and compare")
    replay.add_argument("file")
    replay.set_defaults(func=cmd_replay)
    lst = sub.add_parser("list", help="list experiments and their parameters")
    lst.set_defaults(func=cmd_list)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
