"""Inflected-form generation from stem entries and declarative paradigms.

A paradigm is a table of slots, each pairing a tag with a suffix and a set
of string transformations (vowel mutation, ss/ß alternation, e-omission,
participle ge- marking, zu-infixation, alternant-stem selection). Generation
walks the slots and is deterministic: the same entry and paradigm always
yield byte-identical output.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

from .errors import GenerationError, NotAVerb, RegistryError
from .tagset import Tag, parse_tag

UMLAUT = "UMLAUT"
SS_SHIFT = "SS_SHIFT"
E_OMIT = "E_OMIT"
GE_PARTICIPLE = "GE_PARTICIPLE"
ZU_INFIX = "ZU_INFIX"

KNOWN_FLAGS = {UMLAUT, SS_SHIFT, E_OMIT, GE_PARTICIPLE, ZU_INFIX}

_UMLAUT_MAP = {"a": "ä", "o": "ö", "u": "ü", "A": "Ä", "O": "Ö", "U": "Ü"}
_REVERSE_MAP = {v: k for k, v in _UMLAUT_MAP.items()}


@dataclass(frozen=True)
class Slot:
    tag: Tag
    suffix: str = ""
    flags: frozenset[str] = field(default_factory=frozenset)
    alternant: str | None = None  # named stem variant to inflect instead


@dataclass(frozen=True)
class Paradigm:
    id: str
    pos: str
    slots: tuple[Slot, ...]
    # Suffix the citation form adds to the stem ("en" for most verbs, ""
    # for nouns); stripping it recovers the stem the slots attach to.
    lemma_suffix: str = ""

    def slot_suffixes(self) -> set[str]:
        return {s.suffix for s in self.slots}

    def required_alternants(self) -> set[str]:
        return {s.alternant for s in self.slots if s.alternant}


def nfc(s: str) -> str:
    return unicodedata.normalize("NFC", s)


def apply_umlaut(stem: str) -> str:
    """Mutate the last umlautable vowel (a->ä, o->ö, u->ü, au->äu).

    Stems without an umlautable vowel come back unchanged; stems that are
    already mutated are left alone (ä/ö/ü are not umlautable).
    """
    for i in range(len(stem) - 1, -1, -1):
        ch = stem[i]
        if ch not in _UMLAUT_MAP:
            continue
        if ch in "uU" and i > 0 and stem[i - 1] in "aA":
            return stem[:i - 1] + _UMLAUT_MAP[stem[i - 1]] + stem[i:]
        return stem[:i] + _UMLAUT_MAP[ch] + stem[i + 1:]
    return stem


def _umlaut_units(stem: str) -> list[tuple[int, int]]:
    """(position, length) of each umlaut in the stem; äu counts as one."""
    units = []
    i = 0
    while i < len(stem):
        if stem[i] in "äÄ" and i + 1 < len(stem) and stem[i + 1] in "uU":
            units.append((i, 2))
            i += 2
        elif stem[i] in _REVERSE_MAP:
            units.append((i, 1))
            i += 1
        else:
            i += 1
    return units


def reverse_umlaut(stem: str) -> list[str]:
    """All de-mutations of the stem: the input itself, then every string
    obtained by undoing a non-empty subset of its umlauts, by position.

    Analysis needs the full subset enumeration because it cannot know which
    vowel the generator mutated; regeneration filters the over-generation.
    """
    units = _umlaut_units(stem)
    results = []
    for mask in range(1 << len(units)):
        chars = list(stem)
        for j, (pos, length) in enumerate(units):
            if mask & (1 << j):
                chars[pos] = _REVERSE_MAP[stem[pos]]
                # äu -> au: only the ä changes, the u stays
        candidate = "".join(chars)
        if candidate not in results:
            results.append(candidate)
    return results


SS_TO_SS = "ß>ss"
SS_TO_ESZETT = "ss>ß"


def ss_shift(stem: str, direction: str) -> str:
    """Final ß/ss alternation; no-op when the stem does not end in one."""
    if direction == SS_TO_SS:
        if stem.endswith("ß"):
            return stem[:-1] + "ss"
    elif direction == SS_TO_ESZETT:
        if stem.endswith("ss"):
            return stem[:-2] + "ß"
    else:
        raise ValueError(f"bad ss_shift direction: {direction!r}")
    return stem


def omit_e(stem: str) -> str:
    """Drop the e of a stem-final -el/-er syllable (segel -> segl)."""
    if len(stem) >= 2 and stem.endswith(("el", "er")):
        return stem[:-2] + stem[-1]
    return stem


def entry_stem(entry, paradigm: Paradigm) -> str:
    """The string the paradigm's suffixes attach to."""
    base = entry.lemma
    if entry.separable_prefix:
        if not base.startswith(entry.separable_prefix):
            raise GenerationError(
                f"{entry.lemma}: lemma does not start with prefix "
                f"{entry.separable_prefix!r}")
        base = base[len(entry.separable_prefix):]
    if paradigm.lemma_suffix:
        if not base.endswith(paradigm.lemma_suffix):
            raise GenerationError(
                f"{entry.lemma}: lemma does not end in paradigm suffix "
                f"-{paradigm.lemma_suffix}")
        base = base[:len(base) - len(paradigm.lemma_suffix)]
    return base


def realize_slot(entry, paradigm: Paradigm, slot: Slot) -> str:
    if slot.alternant:
        base = entry.alternant(slot.alternant)
        if base is None:
            raise GenerationError(
                f"{entry.lemma}: paradigm {paradigm.id} needs alternant "
                f"{slot.alternant!r}")
    else:
        base = entry_stem(entry, paradigm)
    if SS_SHIFT in slot.flags:
        base = ss_shift(base, SS_TO_SS)
    if UMLAUT in slot.flags:
        base = apply_umlaut(base)
    if E_OMIT in slot.flags:
        base = omit_e(base)
    form = base + slot.suffix
    if GE_PARTICIPLE in slot.flags:
        form = "ge" + form
    if ZU_INFIX in slot.flags:
        if not entry.separable_prefix:
            raise GenerationError(
                f"{entry.lemma}: zu-infixation needs a separable prefix")
        form = entry.separable_prefix + "zu" + form
    elif entry.separable_prefix:
        form = entry.separable_prefix + form
    return nfc(form)


def generate(entry, paradigm: Paradigm) -> list[tuple[str, Tag]]:
    """All (form, tag) pairs of the entry, one per paradigm slot."""
    if entry.pos != paradigm.pos:
        raise GenerationError(
            f"{entry.lemma}: entry pos {entry.pos} != paradigm pos "
            f"{paradigm.pos}")
    return [(realize_slot(entry, paradigm, slot), slot.tag)
            for slot in paradigm.slots]


def zu_infinitive(entry) -> str:
    """The zu-marked infinitive: infixed after a separable prefix
    (weggehen -> wegzugehen), a free particle otherwise (zu gehen)."""
    if entry.pos != "VER":
        raise NotAVerb(f"{entry.lemma} is {entry.pos}, not VER")
    if entry.separable_prefix:
        base = entry.lemma[len(entry.separable_prefix):]
        return nfc(entry.separable_prefix + "zu" + base)
    return nfc("zu " + entry.lemma)


def participle(entry, paradigm: Paradigm) -> str:
    """The past participle, via the paradigm's PA2 slot (prefix verbs get
    the ge-marker infixed after the prefix: weggehen -> weggegangen)."""
    if entry.pos != "VER":
        raise NotAVerb(f"{entry.lemma} is {entry.pos}, not VER")
    for slot in paradigm.slots:
        if slot.tag.has("PA2"):
            return realize_slot(entry, paradigm, slot)
    raise GenerationError(f"paradigm {paradigm.id} has no participle slot")


# --- paradigm registry file --------------------------------------------------

def load_paradigms(path) -> dict[str, Paradigm]:
    """Read the paradigm registry (see data/paradigms.txt for the format)."""
    paradigms: dict[str, Paradigm] = {}
    current_id = None
    current_pos = None
    current_suffix = ""
    pending: list[Slot] = []

    def flush():
        if current_id is None:
            return
        paradigm = Paradigm(current_id, current_pos, tuple(pending),
                            current_suffix)
        _validate_paradigm(paradigm)
        if current_id in paradigms:
            raise RegistryError(f"duplicate paradigm id {current_id}")
        paradigms[current_id] = paradigm

    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith("#morphkit-v1"):
            raise RegistryError(f"{path}: missing #morphkit-v1 header")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            cols = line.split("\t")
            kind = cols[0]
            if kind == "paradigm":
                if len(cols) != 4 or not cols[3].startswith("lemma_suffix="):
                    raise RegistryError(f"{path}:{lineno}: bad paradigm line")
                flush()
                current_id, current_pos = cols[1], cols[2]
                current_suffix = cols[3][len("lemma_suffix="):]
                pending = []
            elif kind == "slot":
                if current_id is None:
                    raise RegistryError(f"{path}:{lineno}: slot before paradigm")
                if len(cols) not in (3, 4):
                    raise RegistryError(f"{path}:{lineno}: bad slot line")
                tag = parse_tag(cols[1])
                suffix = "" if cols[2] == "-" else cols[2]
                flags = set()
                alternant = None
                if len(cols) == 4 and cols[3]:
                    for token in cols[3].split():
                        if token.startswith("USE_ALTERNANT:"):
                            alternant = token.split(":", 1)[1]
                        elif token in KNOWN_FLAGS:
                            flags.add(token)
                        else:
                            raise RegistryError(
                                f"{path}:{lineno}: unknown flag {token!r}")
                pending.append(Slot(tag, suffix, frozenset(flags), alternant))
            else:
                raise RegistryError(f"{path}:{lineno}: unknown record {kind!r}")
        flush()
    return paradigms


def _validate_paradigm(p: Paradigm) -> None:
    tags = [s.tag for s in p.slots]
    if len(set(tags)) != len(tags):
        raise RegistryError(f"paradigm {p.id}: slot tags not distinct")
    for s in p.slots:
        if s.tag.pos != p.pos:
            raise RegistryError(
                f"paradigm {p.id}: slot tag {s.tag} has pos {s.tag.pos}")
        if (GE_PARTICIPLE in s.flags or ZU_INFIX in s.flags) and p.pos != "VER":
            raise RegistryError(
                f"paradigm {p.id}: verb-only flag on {p.pos} paradigm")
