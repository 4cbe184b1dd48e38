"""JSON payload builders shared by the CLI and the HTTP endpoint so both
emit byte-identical bodies for the same query."""

from __future__ import annotations

import json

from .analyze import Analysis
from .tagset import Tag


def to_json_bytes(obj) -> bytes:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True,
                      separators=(",", ":")).encode("utf-8")


def analyses_payload(form: str, analyses: list[Analysis]) -> dict:
    return {
        "form": form,
        "analyses": [
            {
                "lemma": a.lemma,
                "tag": a.tag.render(),
                "provenance": a.provenance,
                "segments": [
                    {"surface": s.surface, "piece": s.piece,
                     "linker": s.linker}
                    for s in a.segments
                ],
            }
            for a in analyses
        ],
    }


def forms_payload(lemma: str, pos: str | None,
                  forms: list[tuple[str, Tag]]) -> dict:
    return {
        "lemma": lemma,
        "pos": pos or "",
        "forms": [{"form": f, "tag": t.render()} for f, t in forms],
    }
