from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from policyqa.answerers import (
    Answer,
    AnswererConfig,
    LexicalBaselineAnswerer,
    RemoteAnswerer,
    get_answerer,
    lexical_baseline_answer,
    remote_answer,
)
from policyqa.errors import (
    RemoteMalformedResponse,
    RemoteTimeout,
    RemoteUnavailable,
)

QUESTION = "What is the password's maximum age according to the password policy?"
CONTEXT = (
    "Password Policy\n"
    "All accounts are protected by passwords chosen according to this section.\n"
    "The password needs to be changed after a maximum time duration of 60 days.\n"
    "Passwords must contain at least 12 characters including one digit."
)
EVIDENCE = "The password needs to be changed after a maximum time duration of 60 days."


class TestLexicalBaseline:
    def test_finds_the_evidence_sentence(self):
        answer = lexical_baseline_answer(QUESTION, CONTEXT)
        assert answer.answerable
        assert answer.text == EVIDENCE
        assert CONTEXT[answer.start_offset : answer.end_offset] == EVIDENCE

    def test_score_is_question_term_coverage(self):
        answer = lexical_baseline_answer(QUESTION, CONTEXT)
        # question content lemmas: password, maximum, age, accord, policy;
        # the best window covers all but "age".
        assert answer.score == pytest.approx(4 / 5)

    def test_deterministic(self):
        first = lexical_baseline_answer(QUESTION, CONTEXT)
        second = lexical_baseline_answer(QUESTION, CONTEXT)
        assert first == second

    def test_unrelated_context_is_unanswerable(self):
        answer = lexical_baseline_answer(QUESTION, "The cafeteria closes at noon.")
        assert not answer.answerable
        assert answer.text == ""
        assert (answer.start_offset, answer.end_offset) == (0, 0)
        assert answer.score == 1.0

    def test_below_threshold_reports_residual_confidence(self):
        config = AnswererConfig(no_answer_threshold=0.9)
        answer = lexical_baseline_answer(QUESTION, CONTEXT, config)
        assert not answer.answerable
        assert answer.score == pytest.approx(1.0 - 4 / 5)

    def test_threshold_boundary_is_answerable(self):
        config = AnswererConfig(no_answer_threshold=0.8)
        answer = lexical_baseline_answer(QUESTION, CONTEXT, config)
        assert answer.answerable

    def test_stopword_only_question_is_unanswerable(self):
        answer = lexical_baseline_answer("Is it the an of?", CONTEXT)
        assert not answer.answerable
        assert answer.score == 1.0

    def test_empty_context_is_unanswerable(self):
        assert not lexical_baseline_answer(QUESTION, "").answerable

    def test_earliest_best_sentence_wins_ties(self):
        context = "Passwords expire monthly. Unrelated filler text here. Passwords expire monthly."
        answer = lexical_baseline_answer("When do passwords expire?", context)
        assert answer.answerable
        assert answer.start_offset == 0

    def test_sentence_with_more_question_terms_beats_shorter_one(self):
        # Both sentences sit inside the winning window; the one matching
        # more question terms is the better evidence even though it is longer.
        context = "Password rules. The password maximum age is 60 days."
        answer = lexical_baseline_answer(QUESTION, context)
        assert answer.text == "The password maximum age is 60 days."

    def test_long_context_still_finds_late_evidence(self):
        filler = "This paragraph discusses unrelated catering arrangements. " * 40
        context = filler + EVIDENCE
        answer = lexical_baseline_answer(QUESTION, context)
        assert answer.answerable
        assert answer.text == EVIDENCE
        assert context[answer.start_offset : answer.end_offset] == EVIDENCE

    def test_newlines_are_sentence_boundaries(self):
        context = "password maximum age\n60 days for passwords"
        answer = lexical_baseline_answer(QUESTION, context)
        assert "\n" not in answer.text

    @given(st.text(max_size=400))
    @settings(max_examples=100)
    def test_offsets_always_honest(self, context):
        answer = lexical_baseline_answer(QUESTION, context)
        if answer.answerable:
            assert context[answer.start_offset : answer.end_offset] == answer.text
            assert answer.text.strip()
        else:
            assert answer.text == ""
            assert (answer.start_offset, answer.end_offset) == (0, 0)
        assert 0.0 <= answer.score <= 1.0

    def test_callable_wrapper_matches_function(self):
        answerer = LexicalBaselineAnswerer(AnswererConfig())
        assert answerer(QUESTION, CONTEXT) == lexical_baseline_answer(QUESTION, CONTEXT)

    def test_get_answerer_dispatch(self):
        assert isinstance(get_answerer(AnswererConfig()), LexicalBaselineAnswerer)
        remote_config = AnswererConfig(backend="remote", endpoint_url="http://localhost:1/qa")
        assert isinstance(get_answerer(remote_config), RemoteAnswerer)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            AnswererConfig(window_tokens=3)
        with pytest.raises(ValueError):
            AnswererConfig(no_answer_threshold=1.5)
        with pytest.raises(ValueError):
            AnswererConfig(backend="remote")  # endpoint required
        with pytest.raises(ValueError):
            AnswererConfig(backend="neural")


class TestAnswerSerialization:
    def test_round_trip(self):
        answer = Answer(text="60 days", start_offset=10, end_offset=17, score=0.5, answerable=True)
        assert Answer.from_dict(answer.to_dict()) == answer

    def test_validation(self):
        with pytest.raises(ValueError):
            Answer(text="x", start_offset=5, end_offset=4, score=0.5, answerable=True)
        with pytest.raises(ValueError):
            Answer(text="x", start_offset=0, end_offset=1, score=1.5, answerable=True)


class _StubHandler(BaseHTTPRequestHandler):
    """Scripted QA endpoint; the request path selects the behaviour."""

    def do_POST(self):  # noqa: N802 - http.server naming
        length = int(self.headers.get("Content-Length", 0))
        payload = json.loads(self.rfile.read(length).decode("utf-8"))
        context = payload["context"]
        route = self.path.rstrip("/").rsplit("/", 1)[-1]
        if route == "echo":
            start = context.find("60 days")
            body = {
                "answer": "60 days",
                "start": start,
                "end": start + len("60 days"),
                "score": 0.87,
                "answerable": True,
            }
        elif route == "no-answer":
            body = {"answer": "", "start": 0, "end": 0, "score": 0.93, "answerable": False}
        elif route == "bad-offsets":
            body = {"answer": "60 days", "start": 0, "end": 7, "score": 0.5, "answerable": True}
        elif route == "bad-score":
            body = {"answer": "60 days", "start": 0, "end": 7, "score": 7.0, "answerable": True}
        elif route == "missing-fields":
            body = {"answer": "60 days"}
        elif route == "not-json":
            self.send_response(200)
            self.send_header("Content-Type", "text/plain")
            self.end_headers()
            self.wfile.write(b"<html>surprise</html>")
            return
        elif route == "server-error":
            self.send_response(500)
            self.end_headers()
            self.wfile.write(b"boom")
            return
        elif route == "slow":
            threading.Event().wait(1.0)
            body = {"answer": "", "start": 0, "end": 0, "score": 1.0, "answerable": False}
        else:
            self.send_response(404)
            self.end_headers()
            return
        blob = json.dumps(body).encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(blob)))
        self.end_headers()
        self.wfile.write(blob)

    def log_message(self, *args):  # keep pytest output clean
        pass


@pytest.fixture(scope="module")
def stub_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _StubHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}"
    server.shutdown()
    thread.join(timeout=5)


def remote_config(base_url, route, **overrides):
    return AnswererConfig(
        backend="remote", endpoint_url=f"{base_url}/{route}", **overrides
    )


class TestRemoteAnswerer:
    def test_valid_response_accepted(self, stub_server):
        config = remote_config(stub_server, "echo")
        answer = remote_answer(QUESTION, CONTEXT, config)
        assert answer.answerable
        assert answer.text == "60 days"
        assert CONTEXT[answer.start_offset : answer.end_offset] == "60 days"
        assert answer.score == pytest.approx(0.87)

    def test_no_answer_response(self, stub_server):
        answer = remote_answer(QUESTION, CONTEXT, remote_config(stub_server, "no-answer"))
        assert not answer.answerable
        assert answer.text == ""

    def test_offsets_must_address_context(self, stub_server):
        with pytest.raises(RemoteMalformedResponse):
            remote_answer(QUESTION, CONTEXT, remote_config(stub_server, "bad-offsets"))

    def test_score_must_be_probability(self, stub_server):
        with pytest.raises(RemoteMalformedResponse):
            remote_answer(QUESTION, CONTEXT, remote_config(stub_server, "bad-score"))

    def test_missing_fields_rejected(self, stub_server):
        with pytest.raises(RemoteMalformedResponse):
            remote_answer(QUESTION, CONTEXT, remote_config(stub_server, "missing-fields"))

    def test_non_json_rejected(self, stub_server):
        with pytest.raises(RemoteMalformedResponse):
            remote_answer(QUESTION, CONTEXT, remote_config(stub_server, "not-json"))

    def test_http_error_maps_to_unavailable(self, stub_server):
        with pytest.raises(RemoteUnavailable):
            remote_answer(QUESTION, CONTEXT, remote_config(stub_server, "server-error"))

    def test_connection_refused_maps_to_unavailable(self):
        config = AnswererConfig(backend="remote", endpoint_url="http://127.0.0.1:9/qa")
        with pytest.raises(RemoteUnavailable):
            remote_answer(QUESTION, CONTEXT, config)

    def test_slow_endpoint_maps_to_timeout(self, stub_server):
        config = remote_config(stub_server, "slow", timeout_ms=200)
        with pytest.raises(RemoteTimeout):
            remote_answer(QUESTION, CONTEXT, config)

    def test_callable_wrapper(self, stub_server):
        answerer = RemoteAnswerer(remote_config(stub_server, "echo"))
        assert answerer(QUESTION, CONTEXT).text == "60 days"
