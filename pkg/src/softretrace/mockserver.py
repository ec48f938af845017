"""A scriptable chat-completion test double on the stdlib HTTP server.

Serves POST /v1/chat/completions.  Responses come from a script queue
(each item an int HTTP status or a str body text); once the queue is
empty every call answers with the default text.  The server records
request payloads and tracks in-flight concurrency so client-side
limits are observable.  Runs in-process for tests and standalone via
``python -m softretrace.mockserver``.
"""
from __future__ import annotations

import argparse
import json
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

DEFAULT_TEXT = "The computation settles the question. Final answer: \\boxed{5}"


class MockChatServer:
    def __init__(
        self,
        default_text: str = DEFAULT_TEXT,
        script: list[int | str] | None = None,
        latency_s: float = 0.0,
        require_key: str | None = None,
    ) -> None:
        self.default_text = default_text
        self.script = list(script or [])
        self.latency_s = latency_s
        self.require_key = require_key
        self.requests: list[dict] = []
        self.call_count = 0
        self.max_in_flight = 0
        self._in_flight = 0
        self._lock = threading.Lock()
        self._httpd: ThreadingHTTPServer | None = None
        self._thread: threading.Thread | None = None

    # -- scripting ----------------------------------------------------
    def _next_action(self) -> int | str:
        with self._lock:
            self.call_count += 1
            if self.script:
                return self.script.pop(0)
        return self.default_text

    def _enter(self) -> None:
        with self._lock:
            self._in_flight += 1
            self.max_in_flight = max(self.max_in_flight, self._in_flight)

    def _leave(self) -> None:
        with self._lock:
            self._in_flight -= 1

    def _record(self, payload: dict, headers: dict) -> None:
        with self._lock:
            self.requests.append({"payload": payload, "headers": headers})

    # -- lifecycle ----------------------------------------------------
    def start(self, port: int = 0) -> int:
        server = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, fmt, *args):  # silence per-request stderr spam
                pass

            def do_POST(self) -> None:
                server._enter()
                try:
                    length = int(self.headers.get("Content-Length", "0"))
                    raw = self.rfile.read(length)
                    try:
                        payload = json.loads(raw)
                    except json.JSONDecodeError:
                        payload = {"_unparsed": raw.decode("utf-8", "replace")}
                    server._record(payload, dict(self.headers))
                    if server.latency_s > 0:
                        time.sleep(server.latency_s)
                    if server.require_key is not None:
                        auth = self.headers.get("Authorization", "")
                        if auth != f"Bearer {server.require_key}":
                            self._send(401, {"error": "bad or missing api key"})
                            return
                    action = server._next_action()
                    if isinstance(action, int):
                        self._send(action, {"error": f"scripted status {action}"})
                    else:
                        body = {
                            "id": "mock",
                            "object": "chat.completion",
                            "choices": [
                                {
                                    "index": 0,
                                    "message": {"role": "assistant", "content": action},
                                    "finish_reason": "stop",
                                }
                            ],
                        }
                        self._send(200, body)
                finally:
                    server._leave()

            def _send(self, status: int, body: dict) -> None:
                data = json.dumps(body).encode()
                try:
                    self.send_response(status)
                    self.send_header("Content-Type", "application/json")
                    self.send_header("Content-Length", str(len(data)))
                    self.end_headers()
                    self.wfile.write(data)
                except (BrokenPipeError, ConnectionResetError):
                    # a client that timed out and hung up is not our problem
                    pass

        self._httpd = ThreadingHTTPServer(("127.0.0.1", port), Handler)
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()
        return self._httpd.server_address[1]

    def stop(self) -> None:
        if self._httpd is not None:
            self._httpd.shutdown()
            self._httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)

    @property
    def url(self) -> str:
        assert self._httpd is not None, "server not started"
        return f"http://127.0.0.1:{self._httpd.server_address[1]}"

    def __enter__(self) -> "MockChatServer":
        self.start()
        return self

    def __exit__(self, *exc) -> None:
        self.stop()


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="standalone mock chat-completion server")
    parser.add_argument("--port", type=int, default=8330)
    parser.add_argument("--text", default=DEFAULT_TEXT)
    parser.add_argument("--latency-ms", type=float, default=0.0)
    args = parser.parse_args(argv)
    server = MockChatServer(default_text=args.text, latency_s=args.latency_ms / 1000.0)
    port = server.start(args.port)
    print(f"mock chat server listening on 127.0.0.1:{port}")
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        server.stop()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
