"""Loopback HTTP endpoint hosting the acquisition dialogue and read-only
analysis/generation queries for the wizard frontend.

Contract (JSON bodies):
  POST /lexicon/session                -> 201 {session_id, question}
  POST /lexicon/session/{id}/answer    -> 200 {question} | {inferred}
  POST /lexicon/session/{id}/commit    -> 201 {entry_id}
  GET  /analyze?form=...               -> 200 {form, analyses:[...]}
  GET  /generate?lemma=...&pos=...     -> 200 {lemma, pos, forms:[...]}

Analysis payload bytes are identical to `morphkit analyze --json`.
"""

from __future__ import annotations

import json
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from . import data
from .analyze import Morphology, analyze
from .errors import (DuplicateEntry, GenerationError, InvalidAnswer,
                     MalformedLemma, MorphkitError, UnknownParadigm)
from .inflect import generate, load_paradigms
from .lexicon import (InferredSkeleton, load_lexicon, load_question_tree,
                      make_entry, save_lexicon)
from .payload import analyses_payload, forms_payload, to_json_bytes
from .tagset import load_mapping


class WizardSessionState:
    def __init__(self, session_id: str):
        self.id = session_id
        self.history: list[tuple[str, str]] = []
        self.inferred: InferredSkeleton | None = None
        self.committed = False


class App:
    """Server state: lexicon, registries, sessions, write lock."""

    def __init__(self, lexicon_path, paradigm_path, tagmap_path,
                 question_path=None, save_path=None):
        self.paradigms = load_paradigms(paradigm_path)
        self.lexicon = load_lexicon(lexicon_path, self.paradigms)
        self.mapping = load_mapping(tagmap_path)
        self.tree = load_question_tree(
            question_path or data.path(data.QUESTION_TREE), self.paradigms)
        self.morphology = Morphology(self.lexicon, self.paradigms)
        self.save_path = save_path
        self.sessions: dict[str, WizardSessionState] = {}
        self.lock = threading.Lock()
        self.guesser = None
        self.refresh_guesser()

    def refresh_guesser(self):
        from .cli import _guesser_from_lexicon
        from .cli import Pipeline, PipelineConfig
        pipeline = Pipeline(PipelineConfig(), self.paradigms, self.lexicon,
                            self.mapping, self.morphology)
        self.guesser = _guesser_from_lexicon(pipeline, 5)

    # --- wizard session flow ---

    def new_session(self) -> dict:
        session = WizardSessionState(uuid.uuid4().hex)
        with self.lock:
            self.sessions[session.id] = session
        node = self.tree.walk([])
        return {"session_id": session.id,
                "question": self.question_payload(node)}

    def question_payload(self, node) -> dict:
        return {
            "id": node.id,
            "prompt": node.prompt,
            "answers": [{"key": key, "label": label}
                        for key, (label, _) in node.answers.items()],
        }

    def skeleton_payload(self, skeleton: InferredSkeleton) -> dict:
        return {
            "pos": skeleton.pos,
            "paradigm_id": skeleton.paradigm_id,
            "flags": {k: v for k, v in skeleton.flags},
            "required_alternants": list(skeleton.required_alternants),
        }

    def answer(self, session_id: str, key: str) -> dict:
        session = self.sessions.get(session_id)
        if session is None:
            raise KeyError(session_id)
        if session.inferred is not None:
            raise InvalidAnswer("session already reached an inflection class")
        node = self.tree.walk(session.history)
        if key not in node.answers:
            raise InvalidAnswer(f"answer {key!r} not offered at {node.id}")
        session.history.append((node.id, key))
        outcome = self.tree.walk(session.history)
        if isinstance(outcome, InferredSkeleton):
            session.inferred = outcome
            return {"inferred": self.skeleton_payload(outcome)}
        return {"question": self.question_payload(outcome)}

    def commit(self, session_id: str, body: dict) -> dict:
        session = self.sessions.get(session_id)
        if session is None:
            raise KeyError(session_id)
        if session.inferred is None:
            raise InvalidAnswer("session has not reached an inflection class")
        if session.committed:
            raise InvalidAnswer("session already committed")
        lemma = body.get("lemma", "")
        entry = make_entry(lemma, session.inferred.pos,
                           session.inferred.paradigm_id,
                           body.get("alternants") or {},
                           body.get("prefix") or "",
                           body.get("gloss") or "")
        with self.lock:
            entry_id = self.lexicon.add_stem(entry)
            if self.save_path:
                save_lexicon(self.lexicon, self.save_path)
            session.committed = True
        self.refresh_guesser()
        return {"entry_id": entry_id}

    # --- read-only queries ---

    def analyze_payload(self, form: str) -> dict:
        readings = analyze(form, self.lexicon, self.paradigms, self.guesser,
                           morphology=self.morphology)
        return analyses_payload(form, readings)

    def generate_payload(self, lemma: str, pos: str | None) -> dict:
        forms = []
        for entry in self.lexicon.entries.values():
            if entry.lemma != lemma or (pos and entry.pos != pos):
                continue
            forms.extend(generate(entry, self.paradigms[entry.paradigm_id]))
        return forms_payload(lemma, pos, forms)


class Handler(BaseHTTPRequestHandler):
    protocol_version = "HTTP/1.1"

    @property
    def app(self) -> App:
        return self.server.app

    def log_message(self, fmt, *args):
        pass

    def _send(self, status: int, body: bytes,
              content_type="application/json; charset=utf-8"):
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods",
                         "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        self.wfile.write(body)

    def _json(self, status: int, obj) -> None:
        self._send(status, to_json_bytes(obj))

    def _error(self, status: int, message: str) -> None:
        self._json(status, {"error": message})

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if not length:
            return {}
        raw = self.rfile.read(length)
        try:
            parsed = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError):
            raise ValueError("request body is not valid JSON")
        if not isinstance(parsed, dict):
            raise ValueError("request body must be a JSON object")
        return parsed

    def do_OPTIONS(self):
        self._send(204, b"")

    def do_GET(self):
        url = urlparse(self.path)
        query = {k: v[0] for k, v in parse_qs(url.query).items()}
        try:
            if url.path == "/analyze":
                form = query.get("form", "")
                if not form:
                    return self._error(422, "missing form parameter")
                return self._send(200, to_json_bytes(
                    self.app.analyze_payload(form)))
            if url.path == "/generate":
                lemma = query.get("lemma", "")
                if not lemma:
                    return self._error(422, "missing lemma parameter")
                return self._send(200, to_json_bytes(
                    self.app.generate_payload(lemma, query.get("pos"))))
            return self._error(404, f"no such endpoint: {url.path}")
        except MorphkitError as exc:
            return self._error(422, str(exc))

    def do_POST(self):
        url = urlparse(self.path)
        parts = [p for p in url.path.split("/") if p]
        try:
            body = self._body()
        except ValueError as exc:
            return self._error(422, str(exc))
        try:
            if parts == ["lexicon", "session"]:
                return self._json(201, self.app.new_session())
            if (len(parts) == 4 and parts[:2] == ["lexicon", "session"]
                    and parts[3] == "answer"):
                key = body.get("key", "")
                return self._json(200, self.app.answer(parts[2], key))
            if (len(parts) == 4 and parts[:2] == ["lexicon", "session"]
                    and parts[3] == "commit"):
                return self._json(201, self.app.commit(parts[2], body))
            return self._error(404, f"no such endpoint: {url.path}")
        except KeyError as exc:
            return self._error(404, f"unknown session {exc}")
        except InvalidAnswer as exc:
            return self._error(422, str(exc))
        except DuplicateEntry as exc:
            return self._error(409, f"duplicate entry: {exc}")
        except (MalformedLemma, UnknownParadigm, GenerationError) as exc:
            return self._error(422, str(exc))
        except MorphkitError as exc:
            return self._error(422, str(exc))


class MorphServer(ThreadingHTTPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address, app: App):
        super().__init__(address, Handler)
        self.app = app


def make_server(host: str, port: int, lexicon_path, paradigm_path,
                tagmap_path, question_path=None,
                save_path=None) -> MorphServer:
    app = App(lexicon_path, paradigm_path, tagmap_path, question_path,
              save_path)
    return MorphServer((host, port), app)


def serve(host: str, port: int, lexicon_path, paradigm_path, tagmap_path,
          question_path=None, save_path=None) -> None:
    server = make_server(host, port, lexicon_path, paradigm_path,
                         tagmap_path, question_path, save_path)
    print(f"morphkit serving on http://{host}:{server.server_address[1]}/",
          flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
