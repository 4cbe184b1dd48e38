"""Stem lexicon: compact storage of base forms plus inflection classes.

Each entry records a lemma, its part of speech, a paradigm reference and
any alternant stems the paradigm needs (ablaut, participle stems). The
index maps lemmas, derived stems and alternants to entries, so the
analyzer can look up any root candidate in one step. New entries are
acquired through a decision tree that asks the fewest questions needed to
pin down the inflection class.
"""

from __future__ import annotations

import io
import unicodedata
from dataclasses import dataclass, field

from .errors import (DuplicateEntry, GenerationError, InvalidAnswer,
                     MalformedLemma, RegistryError, SinkFailure,
                     UnknownParadigm)
from .inflect import Paradigm, entry_stem, generate

FORMAT_VERSION = "morphkit-v1"


@dataclass(frozen=True)
class StemEntry:
    lemma: str
    pos: str
    paradigm_id: str
    alternants: tuple[tuple[str, str], ...] = ()
    separable_prefix: str = ""
    gloss: str = ""

    @property
    def key(self) -> str:
        return f"{self.lemma}|{self.pos}|{self.paradigm_id}"

    def alternant(self, name: str) -> str | None:
        for n, stem in self.alternants:
            if n == name:
                return stem
        return None

    def alternant_stems(self) -> list[str]:
        return [stem for _, stem in self.alternants]


def make_entry(lemma: str, pos: str, paradigm_id: str,
               alternants: dict[str, str] | None = None,
               separable_prefix: str = "", gloss: str = "") -> StemEntry:
    lemma = unicodedata.normalize("NFC", lemma)
    if not lemma or any(ch.isspace() for ch in lemma):
        raise MalformedLemma(f"bad lemma: {lemma!r}")
    alts = tuple(sorted((k, unicodedata.normalize("NFC", v))
                        for k, v in (alternants or {}).items()))
    return StemEntry(lemma, pos, paradigm_id, alts, separable_prefix, gloss)


class Lexicon:
    """Entry container with a root index.

    Immutable after load except through add_stem; one writer at a time,
    any number of concurrent readers.
    """

    def __init__(self, paradigms: dict[str, Paradigm]):
        self.paradigms = paradigms
        self.entries: dict[str, StemEntry] = {}
        self.index: dict[str, list[str]] = {}
        self.version = FORMAT_VERSION

    def __len__(self) -> int:
        return len(self.entries)

    def _index_keys(self, entry: StemEntry) -> set[str]:
        paradigm = self.paradigms[entry.paradigm_id]
        keys = {entry.lemma, entry_stem(entry, paradigm)}
        keys.update(entry.alternant_stems())
        return keys

    def add_stem(self, entry: StemEntry) -> str:
        """Validate, store and index one entry; returns its id."""
        if not entry.lemma or any(ch.isspace() for ch in entry.lemma):
            raise MalformedLemma(f"bad lemma: {entry.lemma!r}")
        if unicodedata.normalize("NFC", entry.lemma) != entry.lemma:
            raise MalformedLemma(f"lemma not NFC: {entry.lemma!r}")
        paradigm = self.paradigms.get(entry.paradigm_id)
        if paradigm is None:
            raise UnknownParadigm(entry.paradigm_id)
        if paradigm.pos != entry.pos:
            raise GenerationError(
                f"{entry.lemma}: pos {entry.pos} does not match paradigm "
                f"{entry.paradigm_id} ({paradigm.pos})")
        if entry.separable_prefix and not entry.lemma.startswith(
                entry.separable_prefix):
            raise MalformedLemma(
                f"{entry.lemma}: does not start with prefix "
                f"{entry.separable_prefix!r}")
        missing = paradigm.required_alternants() - {n for n, _ in
                                                    entry.alternants}
        if missing:
            raise GenerationError(
                f"{entry.lemma}: paradigm {entry.paradigm_id} needs "
                f"alternants {sorted(missing)}")
        if entry.key in self.entries:
            raise DuplicateEntry(entry.key)
        self.entries[entry.key] = entry
        for k in self._index_keys(entry):
            self.index.setdefault(k, []).append(entry.key)
            self.index[k].sort()
        return entry.key

    def lookup_stem(self, root: str) -> list[StemEntry]:
        """Entries whose lemma, stem or alternant equals the root, ordered
        by (lemma, pos)."""
        found = [self.entries[k] for k in self.index.get(root, ())]
        return sorted(found, key=lambda e: (e.lemma, e.pos, e.paradigm_id))

    def separable_prefixes(self) -> list[str]:
        return sorted({e.separable_prefix for e in self.entries.values()
                       if e.separable_prefix})

    def rebuild_index(self) -> dict[str, list[str]]:
        fresh: dict[str, list[str]] = {}
        for entry in self.entries.values():
            for k in self._index_keys(entry):
                fresh.setdefault(k, []).append(entry.key)
        for v in fresh.values():
            v.sort()
        return fresh


# --- lexicon file ------------------------------------------------------------

_RESERVED_KEYS = {"prefix", "gloss"}


def _parse_entry_line(line: str) -> StemEntry:
    cols = line.split("\t")
    if len(cols) not in (3, 4):
        raise RegistryError(f"expected 3 or 4 columns: {line!r}")
    lemma, pos, paradigm_id = cols[0], cols[1], cols[2]
    alternants: dict[str, str] = {}
    prefix = ""
    gloss = ""
    if len(cols) == 4 and cols[3]:
        for item in cols[3].split(";"):
            if not item:
                continue
            if "=" not in item:
                raise RegistryError(f"bad flag {item!r} in {line!r}")
            k, v = item.split("=", 1)
            if k == "prefix":
                prefix = v
            elif k == "gloss":
                gloss = v
            else:
                alternants[k] = v
    return make_entry(lemma, pos, paradigm_id, alternants, prefix, gloss)


def _entry_line(entry: StemEntry) -> str:
    flags = [f"{n}={s}" for n, s in entry.alternants]
    if entry.separable_prefix:
        flags.append(f"prefix={entry.separable_prefix}")
    if entry.gloss:
        flags.append(f"gloss={entry.gloss}")
    cols = [entry.lemma, entry.pos, entry.paradigm_id]
    if flags:
        cols.append(";".join(flags))
    return "\t".join(cols)


def load_lexicon(path, paradigms: dict[str, Paradigm]) -> Lexicon:
    lexicon = Lexicon(paradigms)
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith("#morphkit-v1"):
            raise RegistryError(f"{path}: missing #morphkit-v1 header")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            try:
                lexicon.add_stem(_parse_entry_line(line))
            except RegistryError as exc:
                raise RegistryError(f"{path}:{lineno}: {exc}") from exc
    return lexicon


def save_lexicon(lexicon: Lexicon, path) -> None:
    lines = sorted(_entry_line(e) for e in lexicon.entries.values())
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"#{FORMAT_VERSION} lexicon\n")
        for line in lines:
            fh.write(line + "\n")


# --- full-form export ----------------------------------------------------------

def export_fullforms(lexicon: Lexicon, paradigms: dict[str, Paradigm],
                     sink: io.TextIOBase) -> int:
    """Write one `form<TAB>tag<TAB>lemma` line per paradigm slot of every
    entry, sorted by (form, tag); returns the number of lines."""
    rows = []
    for entry in lexicon.entries.values():
        paradigm = paradigms[entry.paradigm_id]
        for form, tag in generate(entry, paradigm):
            rows.append((form, tag.render(), entry.lemma))
    rows.sort()
    try:
        for form, tag_text, lemma in rows:
            sink.write(f"{form}\t{tag_text}\t{lemma}\n")
    except OSError as exc:
        raise SinkFailure(str(exc)) from exc
    return len(rows)


class FullformLexicon:
    """Lookup table over an export file; answers analysis by plain lookup."""

    def __init__(self):
        self.forms: dict[str, list[tuple[str, str]]] = {}

    @classmethod
    def load(cls, path) -> "FullformLexicon":
        table = cls()
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                try:
                    form, tag_text, lemma = line.split("\t")
                except ValueError:
                    raise RegistryError(f"{path}:{lineno}: expected 3 columns")
                table.forms.setdefault(form, []).append((tag_text, lemma))
        return table

    def lookup(self, form: str) -> list[tuple[str, str]]:
        return list(self.forms.get(form, ()))


# --- acquisition question tree -------------------------------------------------

@dataclass(frozen=True)
class InferredSkeleton:
    pos: str
    paradigm_id: str
    flags: tuple[tuple[str, str], ...] = ()
    required_alternants: tuple[str, ...] = ()


@dataclass
class QuestionNode:
    id: str
    prompt: str
    # key -> (label, ("goto", node_id) | ("leaf", InferredSkeleton))
    answers: dict[str, tuple[str, tuple]] = field(default_factory=dict)
    rationale: str = ""


class QuestionTree:
    def __init__(self, nodes: dict[str, QuestionNode], root: str = "root"):
        self.nodes = nodes
        self.root = root

    def walk(self, history: list[tuple[str, str]]):
        """Replay (node_id, key) answers; returns the next QuestionNode or
        the InferredSkeleton once a leaf is reached."""
        node = self.nodes[self.root]
        for node_id, key in history:
            if node is None or node.id != node_id:
                raise InvalidAnswer(f"history does not match tree at {node_id}")
            if key not in node.answers:
                raise InvalidAnswer(f"answer {key!r} not offered at {node.id}")
            _, action = node.answers[key]
            if action[0] == "goto":
                node = self.nodes[action[1]]
            else:
                return action[1]
        return node

    def leaves_under(self, node_id: str) -> set[InferredSkeleton]:
        node = self.nodes[node_id]
        out: set[InferredSkeleton] = set()
        for _, action in node.answers.values():
            if action[0] == "goto":
                out |= self.leaves_under(action[1])
            else:
                out.add(action[1])
        return out


def next_question(tree: QuestionTree, history: list[tuple[str, str]]):
    return tree.walk(history)


def load_question_tree(path, paradigms: dict[str, Paradigm]) -> QuestionTree:
    nodes: dict[str, QuestionNode] = {}
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith("#morphkit-v1"):
            raise RegistryError(f"{path}: missing #morphkit-v1 header")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            if cols[0] == "question":
                if len(cols) not in (3, 4):
                    raise RegistryError(f"{path}:{lineno}: bad question line")
                if cols[1] in nodes:
                    raise RegistryError(f"{path}:{lineno}: duplicate node")
                rationale = cols[3] if len(cols) == 4 else ""
                nodes[cols[1]] = QuestionNode(cols[1], cols[2],
                                              rationale=rationale)
            elif cols[0] == "answer":
                if len(cols) != 5:
                    raise RegistryError(f"{path}:{lineno}: bad answer line")
                _, node_id, key, label, action_text = cols
                node = nodes.get(node_id)
                if node is None:
                    raise RegistryError(
                        f"{path}:{lineno}: answer for unknown node {node_id}")
                if key in node.answers:
                    raise RegistryError(f"{path}:{lineno}: duplicate key")
                parts = action_text.split()
                if parts[0] == "goto" and len(parts) == 2:
                    action = ("goto", parts[1])
                elif parts[0] == "leaf" and len(parts) >= 3:
                    pos, paradigm_id = parts[1], parts[2]
                    flags = tuple(tuple(p.split("=", 1))
                                  for p in parts[3:] if "=" in p)
                    paradigm = paradigms.get(paradigm_id)
                    if paradigm is None:
                        raise RegistryError(
                            f"{path}:{lineno}: unknown paradigm {paradigm_id}")
                    if paradigm.pos != pos:
                        raise RegistryError(
                            f"{path}:{lineno}: leaf pos {pos} != paradigm pos")
                    skeleton = InferredSkeleton(
                        pos, paradigm_id, flags,
                        tuple(sorted(paradigm.required_alternants())))
                    action = ("leaf", skeleton)
                else:
                    raise RegistryError(f"{path}:{lineno}: bad action")
                node.answers[key] = (label, action)
            else:
                raise RegistryError(f"{path}:{lineno}: unknown record")
    tree = QuestionTree(nodes)
    _validate_tree(tree, paradigms)
    return tree


def _validate_tree(tree: QuestionTree, paradigms: dict[str, Paradigm]) -> None:
    if tree.root not in tree.nodes:
        raise RegistryError("question tree has no root node")
    # Acyclicity and reachability.
    seen: set[str] = set()
    stack: list[str] = []

    def visit(node_id: str):
        if node_id in stack:
            raise RegistryError(f"question tree cycle through {node_id}")
        if node_id in seen:
            return
        stack.append(node_id)
        node = tree.nodes[node_id]
        if not node.answers:
            raise RegistryError(f"node {node_id} has no answers")
        for _, action in node.answers.values():
            if action[0] == "goto":
                if action[1] not in tree.nodes:
                    raise RegistryError(f"goto to unknown node {action[1]}")
                visit(action[1])
        stack.pop()
        seen.add(node_id)

    visit(tree.root)
    unreachable = set(tree.nodes) - seen
    if unreachable:
        raise RegistryError(f"unreachable question nodes: {sorted(unreachable)}")
    # Every paradigm must be reachable through some leaf.
    reached = {s.paradigm_id for s in tree.leaves_under(tree.root)}
    missing = set(paradigms) - reached
    if missing:
        raise RegistryError(f"paradigms unreachable in tree: {sorted(missing)}")
    # Minimal questioning: a node whose branches all resolve to one triple
    # asks a question that cannot discriminate anything.
    for node_id, node in tree.nodes.items():
        triples = {(s.pos, s.paradigm_id, s.flags)
                   for s in tree.leaves_under(node_id)}
        if len(node.answers) < 2 or len(triples) < 2:
            raise RegistryError(
                f"node {node_id} does not discriminate between paradigms")
