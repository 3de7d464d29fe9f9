"""Stateless HTTP API over the compile pipeline.

Endpoints:
  GET  /health                         -> {"ok": true}
  GET  /grid                           -> canonical grid JSON
  GET  /pose?p=&a=&mode=               -> {"units": [...], "values": [...]}
  POST /compile?fps=&mode=&format=     -> curve JSON/CSV (body: annotation text)

Every request reads only immutable shared state, so identical requests
return identical bodies. Errors are JSON: {"error": {"kind", "message",
"line", "col"}}. With a static directory configured, anything else is
served from it (the preview UI).
"""

from __future__ import annotations

import json
import posixpath
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlsplit

from .emotion import MappingMode, PleasureArousal, pa_to_pose
from .errors import SignfaceError
from .grid import CornerPoseGrid, grid_save
from .layering import LayerPolicy
from .notation import PoseLexicon
from .numfmt import fmt6
from .pipeline import compile_annotation
from .units import UNIT_NAMES


class BadRequest(SignfaceError):
    kind = "BadRequest"


@dataclass(frozen=True)
class ServeContext:
    grid: CornerPoseGrid
    lexicon: PoseLexicon | None
    policy: LayerPolicy
    static_dir: Path | None = None

    @property
    def grid_bytes(self) -> bytes:
        return grid_save(self.grid)


def make_server(ctx: ServeContext, port: int, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    server = ThreadingHTTPServer((host, port), _Handler)
    server.ctx = ctx
    return server


class _Handler(BaseHTTPRequestHandler):
    server_version = "signface"
    protocol_version = "HTTP/1.1"

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass

    @property
    def ctx(self) -> ServeContext:
        return self.server.ctx

    def do_OPTIONS(self):
        self.send_response(204)
        self._cors()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        url = urlsplit(self.path)
        query = parse_qs(url.query)
        try:
            if url.path == "/health":
                self._reply(200, b'{"ok": true}\n', "application/json")
            elif url.path == "/grid":
                self._reply(200, self.ctx.grid_bytes, "application/json")
            elif url.path == "/pose":
                self._reply(200, self._pose_body(query), "application/json")
            elif self.ctx.static_dir is not None:
                self._serve_static(url.path)
            else:
                self._error(404, BadRequest(f"no such endpoint: {url.path}"))
        except SignfaceError as exc:
            self._error(400, exc)
        except Exception as exc:  # pragma: no cover - defensive
            self._error(500, BadRequest(f"internal error: {exc}"))

    def do_POST(self):
        url = urlsplit(self.path)
        query = parse_qs(url.query)
        try:
            if url.path != "/compile":
                self._error(404, BadRequest(f"no such endpoint: {url.path}"))
                return
            length = int(self.headers.get("Content-Length", "0"))
            try:
                text = self.rfile.read(length).decode("utf-8")
            except UnicodeDecodeError:
                raise BadRequest("request body must be UTF-8 annotation text") from None
            fps = _float_param(query, "fps")
            if fps is not None and fps <= 0:
                raise BadRequest(f"fps must be > 0, got {fps}")
            mode = MappingMode.parse(_str_param(query, "mode", "continuous"))
            fmt = _str_param(query, "format", "json").lower()
            if fmt not in ("json", "csv"):
                raise BadRequest(f"unknown format '{fmt}' (expected json or csv)")
            strict = _str_param(query, "strict", "1") not in ("0", "false", "no")
            body = compile_annotation(
                text,
                grid=self.ctx.grid,
                lexicon=self.ctx.lexicon,
                policy=self.ctx.policy,
                fps_override=fps,
                mode=mode,
                fmt=fmt,
                strict=strict,
            )
            ctype = "application/json" if fmt == "json" else "text/csv"
            self._reply(200, body, ctype)
        except SignfaceError as exc:
            self._error(400, exc)
        except Exception as exc:  # pragma: no cover - defensive
            self._error(500, BadRequest(f"internal error: {exc}"))

    # -- endpoint bodies --

    def _pose_body(self, query) -> bytes:
        p = _float_param(query, "p")
        a = _float_param(query, "a")
        if p is None or a is None:
            raise BadRequest("parameters p and a are required")
        mode = MappingMode.parse(_str_param(query, "mode", "continuous"))
        pose = pa_to_pose(PleasureArousal(p, a), self.ctx.grid, mode)
        units = ", ".join(f'"{name}"' for name in UNIT_NAMES)
        values = ", ".join(fmt6(v) for v in pose.values)
        return f'{{"units": [{units}], "values": [{values}]}}\n'.encode("utf-8")

    def _serve_static(self, path: str) -> None:
        clean = posixpath.normpath(path.lstrip("/")) if path != "/" else "index.html"
        if clean.startswith(("..", "/")):
            self._error(404, BadRequest("not found"))
            return
        target = self.ctx.static_dir / clean
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._error(404, BadRequest(f"no such file: /{clean}"))
            return
        ctypes = {
            ".html": "text/html", ".js": "application/javascript",
            ".css": "text/css", ".json": "application/json", ".svg": "image/svg+xml",
        }
        ctype = ctypes.get(target.suffix, "application/octet-stream")
        self._reply(200, target.read_bytes(), ctype)

    # -- plumbing --

    def _cors(self):
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def _reply(self, status: int, body: bytes, ctype: str):
        self.send_response(status)
        self._cors()
        self.send_header("Content-Type", f"{ctype}; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _error(self, status: int, exc: SignfaceError):
        body = (json.dumps({"error": exc.as_dict()}) + "\n").encode("utf-8")
        self._reply(status, body, "application/json")


def _str_param(query, name: str, default: str) -> str:
    values = query.get(name)
    return values[-1] if values else default


def _float_param(query, name: str) -> float | None:
    values = query.get(name)
    if not values:
        return None
    try:
        return float(values[-1])
    except ValueError:
        raise BadRequest(f"parameter {name} must be a number, got '{values[-1]}'") from None
