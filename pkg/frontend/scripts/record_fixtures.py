#!/usr/bin/env python3
"""Record real server responses for the wizard's integration fixtures.

Starts the morphkit HTTP endpoint on a scratch copy of the shipped
lexicon, walks the canonical wizard flow (new masculine noun "Tisch",
commit, paradigm preview, analyze box) and stores every response body
byte-exactly in tests/fixtures/recorded.json.
"""

import json
import pathlib
import shutil
import tempfile
import threading
import urllib.error
import urllib.request

from morphkit import data
from morphkit.server import make_server

HERE = pathlib.Path(__file__).resolve().parent.parent
OUT = HERE / "tests" / "fixtures" / "recorded.json"


def main():
    tmp = tempfile.mkdtemp()
    lexicon_copy = pathlib.Path(tmp) / "lexicon.txt"
    shutil.copy(data.path(data.LEXICON), lexicon_copy)
    server = make_server("127.0.0.1", 0, str(lexicon_copy),
                         str(data.path(data.PARADIGMS)),
                         str(data.path(data.TAGMAP_SMALL)),
                         save_path=str(lexicon_copy))
    port = server.server_address[1]
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()

    recordings = []

    def call(name, method, path, body=None):
        request = urllib.request.Request(
            f"http://127.0.0.1:{port}{path}", method=method,
            data=json.dumps(body).encode() if body is not None else None,
            headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(request) as resp:
                status, raw = resp.status, resp.read()
        except urllib.error.HTTPError as exc:
            status, raw = exc.code, exc.read()
        recordings.append({
            "name": name,
            "method": method,
            "path": path,
            "request": body,
            "status": status,
            "body": raw.decode("utf-8"),
        })
        return json.loads(raw)

    created = call("session_create", "POST", "/lexicon/session")
    sid = created["session_id"]
    for key in ("noun", "masculine", "plural_e", "no"):
        call(f"answer_{key}", "POST",
             f"/lexicon/session/{sid}/answer", {"key": key})
    call("answer_invalid", "POST",
         f"/lexicon/session/{sid}/answer", {"key": "purple"})
    call("commit_tisch", "POST",
         f"/lexicon/session/{sid}/commit",
         {"lemma": "Tisch", "alternants": {}})
    call("generate_tisch", "GET", "/generate?lemma=Tisch&pos=SUB")
    call("analyze_tisches", "GET", "/analyze?form=Tisches")
    call("analyze_winde", "GET", "/analyze?form=Winde")

    # A duplicate commit via a second session, for the error path.
    dup = call("session_create_dup", "POST", "/lexicon/session")
    sid2 = dup["session_id"]
    for key in ("noun", "masculine", "plural_e", "no"):
        call(f"dup_answer_{key}", "POST",
             f"/lexicon/session/{sid2}/answer", {"key": key})
    call("commit_duplicate", "POST",
         f"/lexicon/session/{sid2}/commit",
         {"lemma": "Tisch", "alternants": {}})

    server.shutdown()
    server.server_close()
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(recordings, ensure_ascii=False, indent=1),
                   encoding="utf-8")
    print(f"recorded {len(recordings)} responses -> {OUT}")


if __name__ == "__main__":
    main()
