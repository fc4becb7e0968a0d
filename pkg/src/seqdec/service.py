"""HTTP/JSON facade over the library for the hint-exploration UI.

The request handling core is a pure function from (method, path, body) to
(status, response dict); the HTTP layer adds transport concerns only: body
size limits, a per-request wall-clock budget, CORS headers, and the session
store.  Solver responses share one shape:

    {"verdict": ..., "witness": ..., "counterexample": ..., "stats": {...}}

and errors are {"error": message} with status 400 (unparsable), 413 (too
large), 422 (semantically invalid or over a cap), or 500 (unexpected).
"""

from __future__ import annotations

import json
import secrets
import threading
from collections import OrderedDict
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional

from .errors import CapExceededError, SeqdecError
from . import jsonio
from .automatic import (
    R1_GIVEN as AUTO_R1,
    check_hint_automatic,
    ebp_check,
    solve_unary,
)
from .explicit_solver import R1_GIVEN, R2_GIVEN, solve_explicit, solve_with_hint
from .errors import ValidationError
from .strategic import T1_GIVEN, T2_GIVEN, solve_strategic, solve_strategic_hint

MAX_BODY_BYTES = 1 << 20
DEFAULT_BUDGET_SECONDS = 10.0


class SessionStore:
    """Uploaded artifacts per opaque token, bounded with LRU eviction."""

    def __init__(self, capacity: int = 64):
        if capacity <= 0:
            raise ValidationError("capacity must be positive")
        self.capacity = capacity
        self._items: OrderedDict[str, dict] = OrderedDict()
        self._lock = threading.Lock()

    def create(self, payload: dict) -> str:
        token = secrets.token_hex(8)
        with self._lock:
            self._items[token] = payload
            self._items.move_to_end(token)
            while len(self._items) > self.capacity:
                self._items.popitem(last=False)
        return token

    def get(self, token: str) -> Optional[dict]:
        with self._lock:
            if token not in self._items:
                return None
            self._items.move_to_end(token)
            return self._items[token]

    def __len__(self):
        with self._lock:
            return len(self._items)


def _result(verdict, witness=None, counterexample=None, stats=None):
    return {
        "verdict": verdict,
        "witness": witness,
        "counterexample": counterexample,
        "stats": stats or {},
    }


def _need(body, key):
    if not isinstance(body, dict) or key not in body:
        raise ValidationError(f"request body is missing {key!r}")
    return body[key]


def _explicit_side(value):
    if value not in (R1_GIVEN, R2_GIVEN):
        raise ValidationError('side must be "r1" or "r2"')
    return value


def _handle_explicit_solve(body):
    inst = jsonio.explicit_instance_from_json(_need(body, "instance"))
    res = solve_explicit(inst)
    return _result(
        "feasible" if res.feasible else "infeasible",
        jsonio.witness_to_json(res.witness) if res.witness else None,
        None,
        res.stats,
    )


def _handle_explicit_hint(body):
    inst = jsonio.explicit_instance_from_json(_need(body, "instance"))
    side = _explicit_side(_need(body, "side"))
    if side == R1_GIVEN:
        hint = jsonio.pairs_from_json(
            _need(body, "hint"), inst.input, inst.intermediate, "hint"
        )
    else:
        hint = jsonio.pairs_from_json(
            _need(body, "hint"), inst.intermediate, inst.output, "hint"
        )
    res = solve_with_hint(inst, hint, side)
    value = res.report.counterexample
    if isinstance(value, tuple):
        value = list(value)
    payload = _result(
        "feasible" if res.feasible else "infeasible",
        jsonio.witness_to_json(res.witness) if res.witness else None,
        None if res.report.holds else {"reason": res.report.reason, "value": value},
        {"complement_size": len(res.complement)},
    )
    payload["max_complement"] = [list(p) for p in res.complement.sorted_pairs()]
    return payload


def _handle_automatic_hint(body):
    inst = jsonio.automatic_instance_from_json(_need(body, "instance"))
    side = _explicit_side(_need(body, "side"))
    hint = jsonio.automaton_from_json(_need(body, "hint"))
    res = check_hint_automatic(inst, hint, side)
    witness = None
    if res.feasible:
        witness = {
            "r1": jsonio.automaton_to_json(res.r1),
            "r2": jsonio.automaton_to_json(res.r2),
        }
    return _result(
        "feasible" if res.feasible else "infeasible",
        witness,
        jsonio.word_to_json(res.counterexample),
        {"failed_condition": res.failed_condition} if res.failed_condition else {},
    )


def _handle_automatic_unary(body):
    inst = jsonio.automatic_instance_from_json(_need(body, "instance"))
    res = solve_unary(inst)
    witness = None
    counterexample = None
    if res.feasible:
        witness = {
            "r1": jsonio.automaton_to_json(res.r1),
            "r2": jsonio.automaton_to_json(res.r2),
        }
    else:
        counterexample = {
            "input": jsonio.word_to_json(res.counterexample[0]),
            "output": jsonio.word_to_json(res.counterexample[1]),
        }
    return _result(
        "feasible" if res.feasible else "infeasible", witness, counterexample
    )


def _handle_ebp(body):
    dfa = jsonio.automaton_from_json(_need(body, "dfa"))
    max_n = _need(body, "max_n")
    if not isinstance(max_n, int) or max_n < 0:
        raise ValidationError("max_n must be a non-negative integer")
    report = ebp_check(dfa, max_n)
    if report.violation is None:
        return _result("ok", None, None, {"ok_up_to": report.ok_up_to})
    n, count = report.violation
    return _result("violation", None, {"n": n, "count": str(count)})


def _handle_strategic(body):
    inst = jsonio.automatic_instance_from_json(_need(body, "instance"))
    if "hint_t1" in body and "hint_t2" in body:
        raise ValidationError("give at most one of hint_t1 / hint_t2")
    if "hint_t1" in body:
        hint = jsonio.transducer_from_json(body["hint_t1"])
        res = solve_strategic_hint(inst, hint, T1_GIVEN)
    elif "hint_t2" in body:
        hint = jsonio.transducer_from_json(body["hint_t2"])
        res = solve_strategic_hint(inst, hint, T2_GIVEN)
    else:
        res = solve_strategic(inst)
    witness = None
    if res.feasible:
        witness = {
            "t1": jsonio.transducer_to_json(res.witness.t1),
            "t2": jsonio.transducer_to_json(res.witness.t2),
        }
    return _result(
        "feasible" if res.feasible else "infeasible", witness, None, res.stats
    )


_POST_ROUTES = {
    "/api/explicit/solve": _handle_explicit_solve,
    "/api/explicit/hint": _handle_explicit_hint,
    "/api/automatic/hint": _handle_automatic_hint,
    "/api/automatic/unary": _handle_automatic_unary,
    "/api/ebp": _handle_ebp,
    "/api/strategic/solve": _handle_strategic,
}


def handle(method: str, path: str, body: Optional[bytes], store: Optional[SessionStore] = None):
    """Pure request dispatch: returns (status code, response dict)."""
    if method == "GET" and path == "/api/health":
        return 200, {"ok": True}
    if store is not None and method == "GET" and path.startswith("/api/session/"):
        token = path.rsplit("/", 1)[1]
        payload = store.get(token)
        if payload is None:
            return 404, {"error": "unknown session"}
        return 200, payload
    if method != "POST":
        if path in _POST_ROUTES or path == "/api/session":
            return 405, {"error": "method not allowed"}
        return 404, {"error": "not found"}
    if body is not None and len(body) > MAX_BODY_BYTES:
        return 413, {"error": "body exceeds 1 MiB"}
    try:
        parsed = json.loads(body or b"")
    except (json.JSONDecodeError, UnicodeDecodeError):
        return 400, {"error": "malformed JSON body"}
    if path == "/api/session":
        if store is None:
            return 404, {"error": "sessions disabled"}
        if not isinstance(parsed, dict):
            return 422, {"error": "session payload must be an object"}
        return 200, {"token": store.create(parsed)}
    route = _POST_ROUTES.get(path)
    if route is None:
        return 404, {"error": "not found"}
    try:
        return 200, route(parsed)
    except CapExceededError as exc:
        return 422, {"error": f"cap exceeded: {exc}", "stats": exc.stats}
    except SeqdecError as exc:
        return 422, {"error": str(exc)}
    except Exception as exc:  # pragma: no cover - defensive
        return 500, {"error": f"internal error: {exc}"}


def _run_with_budget(fn, budget_seconds):
    """Run fn in a worker; on budget overrun the caller moves on without it."""
    result: list = []

    def work():
        result.append(fn())

    worker = threading.Thread(target=work, daemon=True)
    worker.start()
    worker.join(budget_seconds)
    if worker.is_alive() or not result:
        return None
    return result[0]


def make_server(
    port: int = 0,
    cors_origin: Optional[str] = None,
    budget_seconds: float = DEFAULT_BUDGET_SECONDS,
    store: Optional[SessionStore] = None,
) -> ThreadingHTTPServer:
    """Build (but do not start) the HTTP server bound to localhost."""
    session_store = store if store is not None else SessionStore()

    class Handler(BaseHTTPRequestHandler):
        def _send(self, status, payload):
            data = json.dumps(payload, sort_keys=True).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            if cors_origin:
                self.send_header("Access-Control-Allow-Origin", cors_origin)
                self.send_header("Access-Control-Allow-Headers", "Content-Type")
                self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.end_headers()
            self.wfile.write(data)

        def _dispatch(self, method):
            body = None
            if method == "POST":
                length = int(self.headers.get("Content-Length") or 0)
                if length > MAX_BODY_BYTES:
                    self._send(413, {"error": "body exceeds 1 MiB"})
                    return
                body = self.rfile.read(length)
            outcome = _run_with_budget(
                lambda: handle(method, self.path, body, session_store),
                budget_seconds,
            )
            if outcome is None:
                self._send(422, {"error": "budget exceeded"})
                return
            self._send(*outcome)

        def do_GET(self):
            self._dispatch("GET")

        def do_POST(self):
            self._dispatch("POST")

        def do_OPTIONS(self):
            self.send_response(204)
            if cors_origin:
                self.send_header("Access-Control-Allow-Origin", cors_origin)
                self.send_header("Access-Control-Allow-Headers", "Content-Type")
                self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Content-Length", "0")
            self.end_headers()

        def log_message(self, *args):  # quiet by default
            pass

    server = ThreadingHTTPServer(("127.0.0.1", port), Handler)
    server.session_store = session_store
    return server


def serve_forever(port, cors_origin=None, budget_seconds=DEFAULT_BUDGET_SECONDS):
    server = make_server(port, cors_origin, budget_seconds)
    host, bound_port = server.server_address
    print(f"seqdec service listening on http://{host}:{bound_port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:  # pragma: no cover
        pass
    finally:
        server.server_close()
