"""Command-line entry point.

Commands:
  compile   annotation file -> sampled curve file (JSON or CSV)
  grid      inspect a corner-pose grid (show | corners)
  pick      k-nearest reference samples from a pleasure/arousal CSV
  serve     HTTP API for the interactive preview UI

Exit codes: 0 success, 1 user/data error, 2 internal error.
Diagnostics go to stderr as "severity: file:line:col: message";
--json-diagnostics switches them to a single JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .emotion import MappingMode, PleasureArousal, corner_targets, pa_to_pose
from .errors import Diagnostic, OutOfRange, SignfaceError, diagnostic_from_error
from .grid import CornerPoseGrid, grid_load
from .layering import LayerPolicy, policy_load
from .notation import PoseLexicon, lexicon_load
from .numfmt import fmt6
from .picker import (
    DEFAULT_K,
    corner_reference_sets,
    corner_sets_to_json,
    knn_pick,
    load_dataset,
    picks_to_json,
    reference_summary,
)
from .pipeline import compile_annotation
from .units import ActivationVector


def _bundled(name: str) -> bytes:
    return resources.files("signface.data").joinpath(name).read_bytes()


def load_default_grid() -> CornerPoseGrid:
    return grid_load(_bundled("default_grid.json"))


def load_default_lexicon() -> PoseLexicon:
    return lexicon_load(_bundled("default_lexicon.json"))


class _Reporter:
    """Collects diagnostics and emits them in text or JSON form."""

    def __init__(self, file: str | None, json_mode: bool, stream=None):
        self.file = file
        self.json_mode = json_mode
        self.stream = stream if stream is not None else sys.stderr
        self.collected: list[Diagnostic] = []

    def emit(self, diag: Diagnostic) -> None:
        if diag.file is None and self.file is not None:
            diag = Diagnostic(diag.severity, diag.message, diag.kind,
                              self.file, diag.line, diag.col)
        self.collected.append(diag)
        if not self.json_mode:
            print(diag.format(), file=self.stream)

    def error(self, exc: SignfaceError) -> None:
        self.emit(diagnostic_from_error(exc, self.file))

    def flush(self) -> None:
        if self.json_mode:
            doc = {"diagnostics": [
                {"severity": d.severity, "kind": d.kind, "message": d.message,
                 "file": d.file, "line": d.line, "col": d.col}
                for d in self.collected
            ]}
            print(json.dumps(doc, indent=2), file=self.stream)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="signface",
        description="Compile annotation timelines into facial activation curves.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_compile = sub.add_parser("compile", help="compile an annotation file to a curve")
    p_compile.add_argument("input", help="annotation file")
    p_compile.add_argument("--grid", help="corner-pose grid JSON (default: bundled)")
    p_compile.add_argument("--lexicon", help="pose lexicon JSON (default: bundled)")
    p_compile.add_argument("--policy", help="layer policy JSON (default: built-in)")
    p_compile.add_argument("--fps", type=float,
                           help="sampling rate; overrides the file's fps hint")
    p_compile.add_argument("--mode", choices=("discrete", "continuous"),
                           default="continuous", help="emotion mapping mode")
    p_compile.add_argument("-o", "--output",
                           help="output path (default: input with .curve.<fmt>); '-' for stdout")
    p_compile.add_argument("--format", choices=("json", "csv"), default="json")
    p_compile.add_argument("--lenient", action="store_true",
                           help="clamp out-of-range p/a with a warning instead of failing")
    p_compile.add_argument("--json-diagnostics", action="store_true")

    p_grid = sub.add_parser("grid", help="inspect a corner-pose grid")
    p_grid.add_argument("subcommand", choices=("show", "corners"))
    p_grid.add_argument("grid_path", nargs="?", help="grid JSON (default: bundled)")

    p_pick = sub.add_parser("pick", help="nearest reference samples by pleasure/arousal")
    p_pick.add_argument("dataset", help="CSV with columns id,pleasure,arousal")
    p_pick.add_argument("-k", type=int, default=DEFAULT_K)
    group = p_pick.add_mutually_exclusive_group(required=True)
    group.add_argument("--target", help="target point as 'p,a'")
    group.add_argument("--corners", action="store_true",
                       help="reference sets for all nine corner targets")
    p_pick.add_argument("-o", "--output", help="write JSON here instead of stdout")

    p_serve = sub.add_parser("serve", help="serve the HTTP API")
    p_serve.add_argument("--port", type=int, default=8765)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--grid", help="corner-pose grid JSON (default: bundled)")
    p_serve.add_argument("--lexicon", help="pose lexicon JSON (default: bundled)")
    p_serve.add_argument("--policy", help="layer policy JSON (default: built-in)")
    p_serve.add_argument("--static", help="directory of UI files to serve at /")
    return parser


def _read_file(path: str, reporter: _Reporter) -> bytes | None:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        reporter.emit(Diagnostic("error", f"cannot read {path}: {exc.strerror}",
                                 kind="IOError", file=path))
        return None


def _load_inputs(args, reporter: _Reporter):
    """Grid, lexicon and policy from flags or bundled defaults; None on error."""
    if args.grid:
        raw = _read_file(args.grid, reporter)
        if raw is None:
            return None
        grid = grid_load(raw)
    else:
        grid = load_default_grid()
    if args.lexicon:
        raw = _read_file(args.lexicon, reporter)
        if raw is None:
            return None
        lexicon = lexicon_load(raw)
    else:
        lexicon = load_default_lexicon()
    if getattr(args, "policy", None):
        raw = _read_file(args.policy, reporter)
        if raw is None:
            return None
        policy = policy_load(raw)
    else:
        policy = LayerPolicy.default()
    return grid, lexicon, policy


def cmd_compile(args) -> int:
    reporter = _Reporter(args.input, args.json_diagnostics)
    try:
        raw = _read_file(args.input, reporter)
        if raw is None:
            return 1
        loaded = _load_inputs(args, reporter)
        if loaded is None:
            return 1
        grid, lexicon, policy = loaded
        body = compile_annotation(
            raw.decode("utf-8"),
            grid=grid,
            lexicon=lexicon,
            policy=policy,
            fps_override=args.fps,
            mode=MappingMode.parse(args.mode),
            fmt=args.format,
            strict=not args.lenient,
            on_warning=reporter.emit,
        )
    except SignfaceError as exc:
        reporter.error(exc)
        return 1
    finally:
        reporter.flush()

    if args.output == "-":
        sys.stdout.buffer.write(body)
        return 0
    out_path = Path(args.output) if args.output else Path(args.input).with_suffix(
        f".curve.{args.format}")
    out_path.write_bytes(body)
    return 0


def cmd_grid(args) -> int:
    reporter = _Reporter(args.grid_path, json_mode=False)
    if args.subcommand == "corners":
        for target in corner_targets():
            print(f"({target.p:g}, {target.a:g})")
        return 0
    try:
        if args.grid_path:
            raw = _read_file(args.grid_path, reporter)
            if raw is None:
                return 1
            grid = grid_load(raw)
        else:
            grid = load_default_grid()
    except SignfaceError as exc:
        reporter.error(exc)
        return 1
    print(f"grid '{grid.name}' version {grid.version}")
    for target in corner_targets():
        pose = pa_to_pose(target, grid, MappingMode.DISCRETE)
        nonzero = pose.nonzero()
        cell = ", ".join(f"{name}={fmt6(v)}" for name, v in nonzero.items())
        print(f"({target.p:g}, {target.a:g}): {cell if nonzero else 'neutral'}")
    return 0


def cmd_pick(args) -> int:
    reporter = _Reporter(args.dataset, json_mode=False)
    try:
        raw = _read_file(args.dataset, reporter)
        if raw is None:
            return 1
        dataset = load_dataset(raw, source=args.dataset)
        if args.corners:
            sets = corner_reference_sets(dataset, args.k)
            text = corner_sets_to_json(sets)
            total, unique = reference_summary(sets)
            if total != unique:
                reporter.emit(Diagnostic(
                    "note", f"{total} references, {unique} unique "
                    "(samples may repeat across corners)", file=args.dataset))
        else:
            p_text, _, a_text = args.target.partition(",")
            try:
                target = PleasureArousal(float(p_text), float(a_text))
            except ValueError:
                reporter.emit(Diagnostic(
                    "error", f"--target must be 'p,a', got '{args.target}'",
                    kind="RangeError"))
                return 1
            except OutOfRange as exc:
                reporter.error(exc)
                return 1
            text = picks_to_json(knn_pick(dataset, target, args.k))
    except SignfaceError as exc:
        reporter.error(exc)
        return 1
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_serve(args) -> int:
    from .server import ServeContext, make_server

    reporter = _Reporter(None, json_mode=False)
    try:
        loaded = _load_inputs(args, reporter)
        if loaded is None:
            return 1
        grid, lexicon, policy = loaded
        static_dir = Path(args.static).resolve() if args.static else None
        if static_dir is not None and not static_dir.is_dir():
            reporter.emit(Diagnostic("error", f"--static {args.static} is not a directory",
                                     kind="IOError"))
            return 1
        ctx = ServeContext(grid=grid, lexicon=lexicon, policy=policy, static_dir=static_dir)
        server = make_server(ctx, args.port, args.host)
    except SignfaceError as exc:
        reporter.error(exc)
        return 1
    except OSError as exc:
        reporter.emit(Diagnostic("error", f"cannot bind port {args.port}: {exc.strerror}",
                                 kind="IOError"))
        return 1
    host, port = server.server_address[:2]
    print(f"listening on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


_COMMANDS = {
    "compile": cmd_compile,
    "grid": cmd_grid,
    "pick": cmd_pick,
    "serve": cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except SignfaceError as exc:
        print(diagnostic_from_error(exc).format(), file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 1
    except Exception as exc:  # noqa: BLE001 - the exit-code contract needs a catch-all
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
