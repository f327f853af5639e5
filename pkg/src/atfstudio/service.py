"""Local JSON-over-HTTP service driving the explorer UI.

Endpoints (all under localhost):

* POST /session                      {"preset": name, "params": {...}} or {"diagram": {...}}
* GET  /session/{id}/tree
* GET  /session/{id}/node/{n}
* POST /session/{id}/node/{n}/move   {"kind": "trade"|"slide"|"cut-change"|"mutate"|"prepare", ...}
* GET  /session/{id}/node/{n}/render.svg?levels=v1,v2&crease=1
* GET  /session/{id}/node/{n}/germ?x=&y=&k=
* GET  /session/{id}/node/{n}/energy?x=&y=

Corner merges and invalid moves surface as HTTP 409 with a structured
body; malformed requests as 400; unknown ids as 404.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from .diagram import (
    Diagram,
    OUTWARD,
    corner_type,
    diagram_from_dict,
    diagram_to_dict,
    preset,
    validate,
    vertex_kind,
)
from .energy import PLGerm, energy_field, germ_normal_form, germ_of_fibre
from .errors import (
    AtfError,
    BadParams,
    CornerMerge,
    IndexOutOfRange,
    MoveError,
    NotACorner,
    NotIsolated,
    OutOfRegion,
)
from .rat import rat, rat_str
from .render import RenderSpec, render_svg
from .session import SessionStore


def _corner_types_payload(dg: Diagram):
    out = []
    for i in range(len(dg.corners)):
        try:
            from .walker import _typed

            out.append(_typed(dg, i).to_dict())
        except AtfError as exc:
            out.append({"error": type(exc).__name__, "detail": str(exc)})
    return out


def _vertex_kinds_payload(dg: Diagram):
    if dg.kind != "compact":
        return []
    out = []
    for i in range(len(dg.vertices)):
        kind, hosted = vertex_kind(dg, i)
        out.append({"kind": kind, "corners": hosted or []})
    return out


def node_payload(dg: Diagram) -> dict:
    return {
        "diagram": diagram_to_dict(dg),
        "corner_types": _corner_types_payload(dg),
        "vertex_kinds": _vertex_kinds_payload(dg),
        "validation": [v.to_dict() for v in validate(dg)],
        "digest": dg.digest(),
    }


def germ_payload(dg: Diagram, x: Fraction, y: Fraction, k: int | None) -> dict:
    if dg.kind != "bdpq":
        raise BadParams("germ queries need the half-plane model")
    params = dg.bdpq
    p, q, d = params.p, params.q, params.d
    on_ray = p * y == q * x and x > 0
    if on_ray:
        if k is None:
            k = sum(1 for t in params.nodes if t * p < x)
        if not (0 <= k <= d):
            raise BadParams(f"k must lie in [0, {d}]")
        germ = germ_of_fibre(p, q, k, x)
    else:
        from .affine import qvec

        value = energy_field(dg, qvec(x, y))
        if value.status != "exact":
            raise OutOfRegion("no exact energy at this point")
        crease = p * y - q * x
        if params.cut_side == OUTWARD or crease < 0:
            grad = qvec(1, 0)
        else:
            grad = qvec(d * p * q + 1, -d * p * p)
        germ = PLGerm(value.value, (grad,))
    return {
        "germ": germ.to_dict(),
        "class": germ_normal_form(germ).to_dict(),
        "on_ray": on_ray,
    }


class ApiHandler(BaseHTTPRequestHandler):
    store: SessionStore = None  # set by make_server
    protocol_version = "HTTP/1.1"

    def log_message(self, fmt, *args):  # tests stay quiet
        pass

    # -- plumbing ---------------------------------------------------------

    def _send(self, code: int, body: bytes, ctype: str):
        self.send_response(code)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _json(self, code: int, payload):
        self._send(code, json.dumps(payload, sort_keys=True).encode(), "application/json")

    def _error(self, code: int, exc_or_msg):
        if isinstance(exc_or_msg, Exception):
            payload = {"error": type(exc_or_msg).__name__, "detail": str(exc_or_msg)}
        else:
            payload = {"error": str(exc_or_msg)}
        self._json(code, payload)

    def _body(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b"{}"
        return json.loads(raw.decode() or "{}")

    # -- routes -----------------------------------------------------------

    def do_POST(self):
        url = urlparse(self.path)
        try:
            if url.path == "/session":
                return self._create_session()
            m = re.fullmatch(r"/session/([0-9a-f]+)/node/(\d+)/move", url.path)
            if m:
                return self._move(m.group(1), int(m.group(2)))
            return self._error(404, "no such route")
        except (json.JSONDecodeError, KeyError, ValueError, TypeError, BadParams) as exc:
            return self._error(400, exc)
        except IndexOutOfRange as exc:
            return self._error(404, exc)
        except (CornerMerge, MoveError, NotIsolated, NotACorner) as exc:
            return self._error(409, exc)
        except AtfError as exc:
            return self._error(409, exc)

    def do_GET(self):
        url = urlparse(self.path)
        query = {k: v[0] for k, v in parse_qs(url.query).items()}
        try:
            m = re.fullmatch(r"/session/([0-9a-f]+)/tree", url.path)
            if m:
                return self._json(200, self.store.get(m.group(1)).tree_dict())
            m = re.fullmatch(r"/session/([0-9a-f]+)/node/(\d+)", url.path)
            if m:
                node = self.store.get(m.group(1)).node(int(m.group(2)))
                return self._json(200, node_payload(node.diagram))
            m = re.fullmatch(r"/session/([0-9a-f]+)/node/(\d+)/render\.svg", url.path)
            if m:
                node = self.store.get(m.group(1)).node(int(m.group(2)))
                svg = render_svg(node.diagram, _spec_from_query(node.diagram, query))
                return self._send(200, svg.encode(), "image/svg+xml")
            m = re.fullmatch(r"/session/([0-9a-f]+)/node/(\d+)/germ", url.path)
            if m:
                node = self.store.get(m.group(1)).node(int(m.group(2)))
                k = int(query["k"]) if "k" in query else None
                payload = germ_payload(node.diagram, rat(query["x"]), rat(query["y"]), k)
                return self._json(200, payload)
            m = re.fullmatch(r"/session/([0-9a-f]+)/node/(\d+)/energy", url.path)
            if m:
                node = self.store.get(m.group(1)).node(int(m.group(2)))
                from .affine import qvec

                value = energy_field(node.diagram, qvec(rat(query["x"]), rat(query["y"])))
                return self._json(200, value.to_dict())
            return self._error(404, "no such route")
        except (json.JSONDecodeError, KeyError, ValueError, TypeError, BadParams) as exc:
            return self._error(400, exc)
        except IndexOutOfRange as exc:
            return self._error(404, exc)
        except OutOfRegion as exc:
            return self._error(409, exc)
        except AtfError as exc:
            return self._error(409, exc)

    # -- handlers -----------------------------------------------------------

    def _create_session(self):
        body = self._body()
        if "diagram" in body:
            dg = diagram_from_dict(body["diagram"])
        elif "preset" in body:
            dg = preset(body["preset"], **(body.get("params") or {}))
        else:
            raise BadParams("need a preset or a diagram")
        sess = self.store.create(dg)
        self._json(201, {"session_id": sess.session_id, "root": 0})

    def _move(self, session_id: str, node_id: int):
        move = self._body()
        node, record = self.store.apply_move(session_id, node_id, move)
        self._json(
            201,
            {
                "node": node.node_id,
                "record": record.to_dict() if record is not None else None,
            },
        )


def _spec_from_query(dg: Diagram, query: dict) -> RenderSpec:
    if "viewport" in query:
        vals = [rat(v) for v in query["viewport"].split(",")]
        if len(vals) != 4:
            raise BadParams("viewport needs xmin,ymin,xmax,ymax")
        viewport = tuple(vals)
    else:
        viewport = default_viewport(dg)
    levels = tuple(rat(v) for v in query["levels"].split(",")) if query.get("levels") else ()
    return RenderSpec(
        viewport=viewport,
        cuts=query.get("cuts", "1") != "0",
        nodes=query.get("nodes", "1") != "0",
        levels=levels,
        crease=query.get("crease", "0") != "0",
    )


def default_viewport(dg: Diagram):
    if dg.kind == "bdpq":
        top = max(dg.bdpq.nodes) * (abs(dg.bdpq.p) + abs(dg.bdpq.q) + 2)
        return (Fraction(-1), -top, top, top)
    xs = [v.x for v in dg.vertices]
    ys = [v.y for v in dg.vertices]
    pad = max(max(xs) - min(xs), max(ys) - min(ys), Fraction(1)) / 10
    return (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)


def make_server(store: SessionStore, port: int = 0) -> ThreadingHTTPServer:
    handler = type("BoundApiHandler", (ApiHandler,), {"store": store})
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve_forever(state_dir: str | None, port: int):
    server = make_server(SessionStore(state_dir), port)
    host, actual_port = server.server_address
    print(f"serving on http://{host}:{actual_port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
