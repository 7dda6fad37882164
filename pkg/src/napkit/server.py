"""Read-only HTTP API over an export directory.

Endpoints (all GET):

    /api/models
    /api/models/{model}/layers
    /api/models/{model}/samples
    /api/models/{model}/layers/{layer}/naps?label=&prediction=&mispredicted=
    /api/naps/{model}/{layer}/{cluster_label}
    /api/samples/{sample_id}/trace?model={model}
    /assets/{image_ref}
    /...                         optional static UI files (--ui directory)

The store is loaded once at startup and never mutated, so identical requests
return identical bytes and concurrent reads are safe. JSON bodies use the
same canonical encoding as the export files. Unknown routes return 404,
malformed queries 400.
"""

from __future__ import annotations

import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, unquote, urlsplit

from napkit.errors import IoError, LookupError, NapkitError, ParamError
from napkit.export import ExportStore, canonical_json, load_export, nap_record, nap_set_record
from napkit.metadata import metadata_record
from napkit.naps import filter_naps, trace_sample

_CONTENT_TYPES = {
    ".png": "image/png",
    ".jpg": "image/jpeg",
    ".jpeg": "image/jpeg",
    ".gif": "image/gif",
    ".svg": "image/svg+xml",
    ".json": "application/json; charset=utf-8",
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".map": "application/json; charset=utf-8",
    ".ico": "image/x-icon",
}

_NAPS_QUERY_KEYS = {"label", "prediction", "mispredicted"}


class _HttpError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "1"):
        return True
    if lowered in ("false", "0"):
        return False
    raise _HttpError(400, f"expected true or false, got {raw!r}")


def _single_values(query: str, allowed: set[str] | None) -> dict[str, str]:
    parsed = parse_qs(query, keep_blank_values=True)
    out = {}
    for key, values in parsed.items():
        if allowed is not None and key not in allowed:
            raise _HttpError(400, f"unknown query parameter {key!r}")
        if len(values) > 1:
            raise _HttpError(400, f"query parameter {key!r} given more than once")
        if values[0] != "":
            out[key] = values[0]
    return out


class _Handler(BaseHTTPRequestHandler):
    server_version = "napkit"
    store: ExportStore  # set on the server class
    ui_dir: Path | None

    def log_message(self, format, *args):  # noqa: A002 - base class signature
        pass  # stay quiet; the CLI announces the address once

    def do_GET(self):  # noqa: N802 - base class naming
        try:
            split = urlsplit(self.path)
            parts = [unquote(p) for p in split.path.split("/") if p != ""]
            if parts and parts[0] == "api":
                body = self._route_api(parts[1:], split.query)
                self._send(200, canonical_json(body).encode("utf-8"),
                           "application/json; charset=utf-8")
            elif parts and parts[0] == "assets":
                self._send_file(self.store.root / "assets", parts[1:])
            elif self.ui_dir is not None:
                self._send_file(self.ui_dir, parts or ["index.html"])
            else:
                raise _HttpError(404, f"no such route: {split.path}")
        except _HttpError as exc:
            self._send_error(exc.status, str(exc))
        except LookupError as exc:
            self._send_error(404, str(exc))
        except ParamError as exc:
            self._send_error(400, str(exc))
        except NapkitError as exc:
            self._send_error(500, str(exc))

    def _route_api(self, parts: list[str], query: str):
        store = self.store
        if parts == ["models"]:
            manifest = store.manifest
            return [
                {
                    "model_id": store.model_id,
                    "created_at": manifest.get("created_at"),
                    "input_fingerprint": manifest.get("input_fingerprint"),
                    "n_layers": len(store.layer_ids),
                }
            ]
        if len(parts) == 3 and parts[0] == "models" and parts[2] == "layers":
            self._model(parts[1])
            return self.store.manifest["layers"]
        if len(parts) == 3 and parts[0] == "models" and parts[2] == "samples":
            self._model(parts[1])
            return {
                "model_id": parts[1],
                "samples": [metadata_record(record) for record in store.metadata],
            }
        if len(parts) == 5 and parts[0] == "models" and parts[2] == "layers" and parts[4] == "naps":
            self._model(parts[1])
            nap_set = self._layer(parts[3])
            filters = _single_values(query, _NAPS_QUERY_KEYS)
            mispredicted = (
                _parse_bool(filters["mispredicted"]) if "mispredicted" in filters else None
            )
            filtered = filter_naps(
                nap_set,
                label=filters.get("label"),
                prediction=filters.get("prediction"),
                mispredicted=mispredicted,
            )
            return nap_set_record(filtered)
        if len(parts) == 4 and parts[0] == "naps":
            model_id, layer_id, label = parts[1], parts[2], parts[3]
            self._model(model_id)
            nap_set = self._layer(layer_id)
            return nap_record(nap_set.nap_by_id(f"{model_id}/{layer_id}/{label}"))
        if len(parts) == 3 and parts[0] == "samples" and parts[2] == "trace":
            try:
                sample_id = int(parts[1])
            except ValueError:
                raise _HttpError(400, f"sample id must be an integer, got {parts[1]!r}") from None
            params = _single_values(query, {"model"})
            model_id = params.get("model", self.store.model_id)
            self._model(model_id)
            trace = trace_sample(sample_id, store.ordered_nap_sets())
            return {
                "sample_id": sample_id,
                "model_id": model_id,
                "trace": [{"layer_id": layer, "nap_id": nap} for layer, nap in trace],
            }
        raise _HttpError(404, f"no such route: /api/{'/'.join(parts)}")

    def _model(self, model_id: str) -> None:
        if model_id != self.store.model_id:
            raise _HttpError(404, f"no such model: {model_id!r}")

    def _layer(self, layer_id: str):
        nap_set = self.store.nap_sets.get(layer_id)
        if nap_set is None:
            raise _HttpError(404, f"no such layer: {layer_id!r}")
        return nap_set

    def _send_file(self, root: Path, parts: list[str]) -> None:
        if not parts or not root.is_dir():
            raise _HttpError(404, "not found")
        root = root.resolve()
        target = root.joinpath(*parts).resolve()
        if not target.is_relative_to(root):
            raise _HttpError(404, "not found")
        if not target.is_file():
            raise _HttpError(404, f"no such file: {'/'.join(parts)}")
        content_type = _CONTENT_TYPES.get(target.suffix.lower(), "application/octet-stream")
        self._send(200, target.read_bytes(), content_type)

    def _send(self, status: int, body: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Cache-Control", "no-store")
        self.end_headers()
        self.wfile.write(body)

    def _send_error(self, status: int, message: str) -> None:
        body = canonical_json({"error": message, "status": status}).encode("utf-8")
        self._send(status, body, "application/json; charset=utf-8")


def make_server(
    export_dir: str | Path,
    port: int,
    host: str = "127.0.0.1",
    ui_dir: str | Path | None = None,
) -> ThreadingHTTPServer:
    """Build (and bind) the HTTP server; port 0 picks a free port."""
    store = load_export(export_dir)
    if ui_dir is not None and not Path(ui_dir).is_dir():
        raise ParamError(f"UI directory {ui_dir} does not exist")
    handler = type(
        "BoundHandler",
        (_Handler,),
        {"store": store, "ui_dir": Path(ui_dir) if ui_dir is not None else None},
    )
    try:
        return ThreadingHTTPServer((host, port), handler)
    except OSError as exc:
        raise IoError(f"cannot bind {host}:{port}: {exc}") from exc


def serve_background(
    export_dir: str | Path, port: int = 0, host: str = "127.0.0.1",
    ui_dir: str | Path | None = None,
) -> tuple[ThreadingHTTPServer, str]:
    """Start serving on a daemon thread; returns (server, base_url)."""
    server = make_server(export_dir, port, host, ui_dir)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    bound_host, bound_port = server.server_address[:2]
    return server, f"http://{bound_host}:{bound_port}"
