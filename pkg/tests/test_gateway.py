import json
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from plainlang.core import ModelConfig
from plainlang.gateway import (
    AuthFailed,
    CompletionRequest,
    GatewayTimeout,
    HttpGateway,
    MalformedResponse,
    MockGateway,
    RateLimited,
    ScriptMiss,
    UpstreamError,
    append_transcript_entry,
    model_config_from_env,
)
from plainlang.prompting import build_simplify_prompt


def completion_body(text):
    return {
        "choices": [{"message": {"role": "assistant", "content": text}}],
        "usage": {"prompt_tokens": 10, "completion_tokens": 5},
    }


class StubHandler(BaseHTTPRequestHandler):
    """Replays a scripted list of (status, body) responses in order."""

    script = []
    lock = threading.Lock()
    requests_seen = 0
    active = 0
    max_active = 0
    handler_delay = 0.0

    def do_POST(self):
        cls = type(self)
        with cls.lock:
            cls.requests_seen += 1
            cls.active += 1
            cls.max_active = max(cls.max_active, cls.active)
            index = cls.requests_seen - 1
        try:
            length = int(self.headers.get("Content-Length", 0))
            self.rfile.read(length)
            if cls.handler_delay:
                time.sleep(cls.handler_delay)
            status, body = cls.script[min(index, len(cls.script) - 1)]
            payload = body if isinstance(body, (bytes, str)) else json.dumps(body)
            if isinstance(payload, str):
                payload = payload.encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)
        finally:
            with cls.lock:
                cls.active -= 1

    def log_message(self, *args):
        pass


@pytest.fixture
def stub_server():
    """Yields a factory: pass a script, get the base URL."""
    server = ThreadingHTTPServer(("127.0.0.1", 0), StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()

    def configure(script, handler_delay=0.0):
        StubHandler.script = script
        StubHandler.requests_seen = 0
        StubHandler.active = 0
        StubHandler.max_active = 0
        StubHandler.handler_delay = handler_delay
        host, port = server.server_address
        return f"http://{host}:{port}"

    yield configure
    server.shutdown()
    server.server_close()


def make_request(api_base, max_retries=3, timeout=5.0):
    cfg = ModelConfig(
        model_name="test-model",
        api_base=api_base,
        api_key="sk-test",
        timeout=timeout,
        max_retries=max_retries,
    )
    return CompletionRequest(bundle=build_simplify_prompt("abc def"), model=cfg)


def fast_gateway(**kwargs):
    kwargs.setdefault("backoff_base", 0.001)
    return HttpGateway(**kwargs)


class TestHttpGateway:
    def test_success(self, stub_server):
        base = stub_server([(200, completion_body("simple words"))])
        gw = fast_gateway()
        response = gw.complete(make_request(base))
        assert response.text == "simple words"
        assert response.prompt_tokens == 10
        assert response.completion_tokens == 5
        assert response.attempts == 1
        assert response.latency > 0

    def test_retries_on_429_then_succeeds(self, stub_server):
        base = stub_server(
            [(429, {}), (429, {}), (200, completion_body("ok"))]
        )
        gw = fast_gateway()
        response = gw.complete(make_request(base))
        assert response.text == "ok"
        assert response.attempts == 3
        assert StubHandler.requests_seen == 3

    def test_auth_failure_no_retry(self, stub_server):
        base = stub_server([(401, {"error": "bad key"})])
        gw = fast_gateway()
        with pytest.raises(AuthFailed):
            gw.complete(make_request(base))
        assert StubHandler.requests_seen == 1

    def test_rate_limited_after_exhausted_retries(self, stub_server):
        base = stub_server([(429, {})])
        gw = fast_gateway()
        with pytest.raises(RateLimited):
            gw.complete(make_request(base, max_retries=2))
        assert StubHandler.requests_seen == 3

    def test_upstream_error_after_retries(self, stub_server):
        base = stub_server([(503, {})])
        gw = fast_gateway()
        with pytest.raises(UpstreamError):
            gw.complete(make_request(base, max_retries=1))
        assert StubHandler.requests_seen == 2

    def test_attempt_cap(self, stub_server):
        base = stub_server([(500, {})])
        gw = fast_gateway()
        with pytest.raises(UpstreamError):
            gw.complete(make_request(base, max_retries=3))
        # Never more than max_retries + 1 upstream attempts.
        assert StubHandler.requests_seen == 4

    def test_malformed_response(self, stub_server):
        base = stub_server([(200, {"unexpected": True})])
        gw = fast_gateway()
        with pytest.raises(MalformedResponse):
            gw.complete(make_request(base))

    def test_non_json_response(self, stub_server):
        base = stub_server([(200, b"<html>not json</html>")])
        gw = fast_gateway()
        with pytest.raises(MalformedResponse):
            gw.complete(make_request(base))

    def test_timeout(self, stub_server):
        base = stub_server([(200, completion_body("late"))], handler_delay=0.5)
        gw = fast_gateway()
        with pytest.raises(GatewayTimeout):
            gw.complete(make_request(base, max_retries=0, timeout=0.05))

    def test_backoff_uses_full_jitter(self, stub_server):
        base = stub_server([(429, {}), (429, {}), (200, completion_body("ok"))])
        delays = []
        gw = HttpGateway(backoff_base=1.0, sleep=delays.append)
        gw.complete(make_request(base))
        assert len(delays) == 2
        assert 0.0 <= delays[0] <= 1.0
        assert 0.0 <= delays[1] <= 2.0

    def test_in_flight_cap(self, stub_server):
        base = stub_server(
            [(200, completion_body("ok"))] * 12, handler_delay=0.05
        )
        gw = fast_gateway(max_in_flight=2)
        with ThreadPoolExecutor(max_workers=8) as pool:
            futures = [pool.submit(gw.complete, make_request(base)) for _ in range(8)]
            for f in futures:
                assert f.result().text == "ok"
        assert StubHandler.max_active <= 2

    def test_wire_format(self, stub_server):
        captured = {}

        class CapturingHandler(StubHandler):
            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                captured["body"] = json.loads(self.rfile.read(length))
                captured["auth"] = self.headers.get("Authorization")
                captured["path"] = self.path
                payload = json.dumps(completion_body("ok")).encode()
                self.send_response(200)
                self.send_header("Content-Length", str(len(payload)))
                self.end_headers()
                self.wfile.write(payload)

        server = ThreadingHTTPServer(("127.0.0.1", 0), CapturingHandler)
        threading.Thread(target=server.serve_forever, daemon=True).start()
        try:
            host, port = server.server_address
            gw = fast_gateway()
            request = make_request(f"http://{host}:{port}")
            gw.complete(request)
        finally:
            server.shutdown()
            server.server_close()

        assert captured["path"] == "/chat/completions"
        assert captured["auth"] == "Bearer sk-test"
        body = captured["body"]
        assert body["model"] == "test-model"
        assert [m["role"] for m in body["messages"]] == ["system", "user"]
        assert body["temperature"] == request.bundle.temperature
        assert body["max_tokens"] == request.bundle.max_output_tokens


class TestMockGateway:
    def test_echo_source_identity(self):
        gw = MockGateway("echo_source")
        request = CompletionRequest(
            bundle=build_simplify_prompt("abc def"), model=ModelConfig()
        )
        assert gw.complete(request).text == "abc def"

    def test_echo_preserves_tricky_text(self):
        text = "line one\n<<<END SOURCE>>>\nline two"
        gw = MockGateway("echo_source")
        request = CompletionRequest(
            bundle=build_simplify_prompt(text), model=ModelConfig()
        )
        assert gw.complete(request).text == text

    def test_title_case(self):
        gw = MockGateway("title_case")
        request = CompletionRequest(
            bundle=build_simplify_prompt("abc def"), model=ModelConfig()
        )
        assert gw.complete(request).text == "Abc Def"

    def test_scripted_replay(self, tmp_path):
        transcript = tmp_path / "transcript.jsonl"
        bundle = build_simplify_prompt("score this")
        append_transcript_entry(transcript, bundle.user_message, "scripted reply")
        gw = MockGateway("scripted", transcript_path=transcript)
        request = CompletionRequest(bundle=bundle, model=ModelConfig())
        assert gw.complete(request).text == "scripted reply"

    def test_scripted_miss(self, tmp_path):
        transcript = tmp_path / "empty.jsonl"
        transcript.write_text("")
        gw = MockGateway("scripted", transcript_path=transcript)
        request = CompletionRequest(
            bundle=build_simplify_prompt("unknown"), model=ModelConfig()
        )
        with pytest.raises(ScriptMiss):
            gw.complete(request)

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError):
            MockGateway("hallucinate")


def test_model_config_from_env():
    cfg = model_config_from_env(
        {"LLM_API_BASE": "http://x/v1", "LLM_API_KEY": "k", "LLM_MODEL": "m"}
    )
    assert (cfg.api_base, cfg.api_key, cfg.model_name) == ("http://x/v1", "k", "m")
    default = model_config_from_env({})
    assert default.model_name == "gpt-4o"
