"""Surface-form analysis: roots by affix stripping, verification by
regeneration, compound segmentation and a suffix-statistics guesser.

A word form is analyzed by cutting off every suffix that occurs in any
paradigm slot (plus verbal ge-/zu- markers and separable prefixes),
undoing vowel mutation and the ss/ß shift, looking the resulting root
candidates up in the stem lexicon, regenerating each hit and keeping only
readings whose regenerated form is identical to the input. Unrecognized
forms fall back to compound segmentation, then to the guesser.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (EmptyForm, EmptyTrainingData, RegistryError,
                     UntrainedGuesser)
from .inflect import (SS_TO_ESZETT, Paradigm, generate, nfc, reverse_umlaut,
                      ss_shift)
from .lexicon import FullformLexicon, Lexicon, StemEntry
from .tagset import Tag, parse_tag

LEXICON = "LEXICON"
COMPOUND = "COMPOUND"
GUESSER = "GUESSER"

_PROVENANCE_RANK = {LEXICON: 0, COMPOUND: 1, GUESSER: 2}

DEFAULT_LINKERS = ("", "e", "s", "es", "en", "er", "n")
MIN_SEGMENT_LEN = 3
COMPOUND_MODIFIER_POS = ("SUB", "VER", "ADJ")


def cap_first(s: str) -> str:
    return s[:1].upper() + s[1:]


def low_first(s: str) -> str:
    return s[:1].lower() + s[1:]


@dataclass(frozen=True)
class Segment:
    surface: str          # slice of the analyzed form, linker excluded
    piece: str            # lemma of the segment
    linker: str = ""      # linking letters following the slice, if any


@dataclass(frozen=True)
class Analysis:
    surface: str
    lemma: str
    tag: Tag
    segments: tuple[Segment, ...]
    provenance: str
    # Bookkeeping for exact regeneration; not part of reading identity.
    entry_key: str = field(default="", compare=False)
    case_shift: str = field(default="", compare=False)  # "", cap, low

    def sort_key(self):
        return (_PROVENANCE_RANK[self.provenance], self.tag.render(),
                self.lemma, tuple((s.surface, s.linker, s.piece)
                                  for s in self.segments))


@dataclass(frozen=True)
class Segmentation:
    segments: tuple[Segment, ...]

    @property
    def head(self) -> Segment:
        return self.segments[-1]

    def sort_key(self):
        return (-len(self.head.surface), len(self.segments),
                tuple((s.surface, s.linker, s.piece) for s in self.segments))


def _case_variants(form: str) -> list[tuple[str, str]]:
    """(variant, shift) pairs: the form itself, plus the de-capitalized or
    capitalized twin so sentence-initial verbs and lowercased nouns still
    match. `shift` records how to map a regenerated form back."""
    variants = [(form, "")]
    if form[:1].isupper():
        low = low_first(form)
        if low != form:
            variants.append((low, "cap"))
    elif form[:1].islower():
        cap = cap_first(form)
        if cap != form:
            variants.append((cap, "low"))
    return variants


def _unshift(form: str, shift: str) -> str:
    if shift == "cap":
        return cap_first(form)
    if shift == "low":
        return low_first(form)
    return form


class Morphology:
    """Analysis context: a lexicon, its paradigms and per-entry caches."""

    def __init__(self, lexicon: Lexicon, paradigms: dict[str, Paradigm],
                 linkers: tuple[str, ...] = DEFAULT_LINKERS):
        self.lexicon = lexicon
        self.paradigms = paradigms
        self.linkers = linkers
        self._gen_cache: dict[str, list[tuple[str, Tag]]] = {}
        self._suffixes: list[str] | None = None

    def forms_of(self, entry: StemEntry) -> list[tuple[str, Tag]]:
        got = self._gen_cache.get(entry.key)
        if got is None:
            got = generate(entry, self.paradigms[entry.paradigm_id])
            self._gen_cache[entry.key] = got
        return got

    def suffix_pool(self) -> list[str]:
        if self._suffixes is None:
            pool = set()
            for p in self.paradigms.values():
                pool |= p.slot_suffixes()
                pool.add(p.lemma_suffix)
            pool.discard("")
            self._suffixes = [""] + sorted(pool, key=lambda s: (-len(s), s))
        return self._suffixes

    def candidate_roots(self, form: str) -> list[tuple[str, str]]:
        """Duplicate-free (root, pos-hint) candidates for one case variant.

        The hint is "VER" for roots uncovered by stripping verbal markers
        (separable prefix, ge-, zu-), empty otherwise. Regeneration later
        discards everything that does not verify.
        """
        if not form:
            raise EmptyForm("empty word form")
        seen: set[tuple[str, str]] = set()
        out: list[tuple[str, str]] = []

        def push(root: str, hint: str):
            if root and (root, hint) not in seen:
                seen.add((root, hint))
                out.append((root, hint))

        stripped: list[tuple[str, str]] = [(form, "")]
        for prefix in self.lexicon.separable_prefixes():
            if form.startswith(prefix) and len(form) > len(prefix) + 1:
                stripped.append((form[len(prefix):], "VER"))
        for s, hint in list(stripped):
            for marker in ("ge", "zu"):
                if s.startswith(marker) and len(s) > len(marker) + 1:
                    stripped.append((s[len(marker):], "VER"))
        for s, hint in stripped:
            for suffix in self.suffix_pool():
                if suffix and not s.endswith(suffix):
                    continue
                base = s[:len(s) - len(suffix)] if suffix else s
                if not base:
                    continue
                for undone in reverse_umlaut(base):
                    push(undone, hint)
                    shifted = ss_shift(undone, SS_TO_ESZETT)
                    if shifted != undone:
                        push(shifted, hint)
                    # undo e-omission: segl -> segel, wundr -> wunder
                    if len(undone) >= 2 and undone[-1] in "lr":
                        push(undone[:-1] + "e" + undone[-1], hint)
        return out

    def matches(self, variant: str) -> list[tuple[StemEntry, Tag]]:
        """Entries and tags whose regenerated form equals the variant."""
        hits: list[tuple[StemEntry, Tag]] = []
        seen_entries: set[str] = set()
        for root, hint in self.candidate_roots(variant):
            for entry in self.lexicon.lookup_stem(root):
                if hint == "VER" and entry.pos != "VER":
                    continue
                if entry.key in seen_entries:
                    continue
                seen_entries.add(entry.key)
                for gen_form, tag in self.forms_of(entry):
                    if gen_form == variant:
                        hits.append((entry, tag))
        return hits


def candidate_roots(form: str, lexicon: Lexicon,
                    paradigms: dict[str, Paradigm]) -> list[tuple[str, str]]:
    if not form:
        raise EmptyForm("empty word form")
    return Morphology(lexicon, paradigms).candidate_roots(nfc(form))


def analyze(form: str, lexicon: Lexicon, paradigms: dict[str, Paradigm],
            guesser: "GuesserModel | None" = None,
            linkers: tuple[str, ...] = DEFAULT_LINKERS,
            morphology: Morphology | None = None) -> list[Analysis]:
    """All readings of a surface form, ordered by (provenance, tag, lemma).

    Lexicon readings win outright; compound segmentation is tried only for
    unrecognized forms, the guesser only after that."""
    if not form:
        raise EmptyForm("empty word form")
    form = nfc(form)
    m = morphology or Morphology(lexicon, paradigms, linkers)

    readings: list[Analysis] = []
    seen: set[tuple[str, str]] = set()
    for variant, shift in _case_variants(form):
        for entry, tag in m.matches(variant):
            if (entry.lemma, tag.render()) in seen:
                continue
            seen.add((entry.lemma, tag.render()))
            readings.append(Analysis(
                surface=form, lemma=entry.lemma, tag=tag,
                segments=(Segment(variant, entry.lemma),),
                provenance=LEXICON, entry_key=entry.key, case_shift=shift))
    if readings:
        return sorted(readings, key=Analysis.sort_key)

    for segmentation in split_compound(form, lexicon, paradigms, linkers,
                                       morphology=m):
        head = segmentation.head
        modifiers = segmentation.segments[:-1]
        for entry, gen_form, tag in _head_readings(m, head.surface):
            if entry.lemma != head.piece:
                continue
            lemma = cap_first("".join(s.surface + s.linker
                                      for s in modifiers) + low_first(entry.lemma))
            reading = Analysis(
                surface=form, lemma=lemma, tag=tag,
                segments=segmentation.segments,
                provenance=COMPOUND, entry_key=entry.key)
            if reading not in readings:
                readings.append(reading)
    if readings:
        return sorted(readings, key=Analysis.sort_key)

    if guesser is not None:
        for tag, prob in guesser.guess(form).items():
            if prob > 0:
                readings.append(Analysis(
                    surface=form, lemma=form, tag=tag,
                    segments=(Segment(form, form),), provenance=GUESSER))
    return sorted(readings, key=Analysis.sort_key)


def analyze_fullform(form: str, table: FullformLexicon) -> list[Analysis]:
    """Lookup-table analysis over an export file; mirrors analyze() on
    every exported form (same readings, same order)."""
    if not form:
        raise EmptyForm("empty word form")
    form = nfc(form)
    readings = []
    seen: set[tuple[str, str]] = set()
    for variant, shift in _case_variants(form):
        for tag_text, lemma in table.lookup(variant):
            if (lemma, tag_text) in seen:
                continue
            seen.add((lemma, tag_text))
            readings.append(Analysis(
                surface=form, lemma=lemma, tag=parse_tag(tag_text),
                segments=(Segment(variant, lemma),),
                provenance=LEXICON, case_shift=shift))
    return sorted(readings, key=Analysis.sort_key)


# --- compound segmentation ---------------------------------------------------

def _head_readings(m: Morphology, slice_: str):
    """Noun readings whose form matches the head slice at compound-internal
    capitalization (Becken matches 'becken')."""
    out = []
    for variant in dict.fromkeys((slice_, cap_first(slice_))):
        for entry, tag in m.matches(variant):
            if entry.pos != "SUB":
                continue
            out.append((entry, variant, tag))
    return out


def _modifier_lemmas(m: Morphology, core: str) -> dict[str, str]:
    """lemma -> match kind (base/stem/inflected) for one modifier core."""
    found: dict[str, str] = {}
    variants = list(dict.fromkeys((core, cap_first(core), low_first(core))))
    for variant in variants:
        for entry in m.lexicon.lookup_stem(variant):
            if entry.pos not in COMPOUND_MODIFIER_POS:
                continue
            kind = "base" if entry.lemma == variant else "stem"
            if found.get(entry.lemma) != "base":
                found[entry.lemma] = kind
    for variant in variants:
        for entry, tag in m.matches(variant):
            if entry.pos not in COMPOUND_MODIFIER_POS:
                continue
            found.setdefault(entry.lemma, "inflected")
    return found


def split_compound(form: str, lexicon: Lexicon,
                   paradigms: dict[str, Paradigm],
                   linkers: tuple[str, ...] = DEFAULT_LINKERS,
                   min_len: int = MIN_SEGMENT_LEN,
                   morphology: Morphology | None = None) -> list[Segmentation]:
    """All segmentations with an inflected noun head and lexicon-validated
    modifiers, longest head first, then fewer segments, then lexicographic.

    Each modifier is a base form, stem or inflected form, optionally
    followed by a linking letter; when a slice parses both as base+linker
    and as an inflected form of the same lemma, the linker reading wins
    (Schwein-e-bauch, not Schweine-bauch).
    """
    if not form:
        raise EmptyForm("empty word form")
    form = nfc(form)
    m = morphology or Morphology(lexicon, paradigms, linkers)
    if "" not in linkers:
        linkers = ("",) + tuple(linkers)

    def parse_modifiers(s: str) -> list[list[Segment]]:
        if not s:
            return [[]]
        parses = []
        for end in range(min_len, len(s) + 1):
            piece = s[:end]
            derivations: dict[tuple[str, str], str] = {}
            for linker in linkers:
                if linker and not piece.endswith(linker):
                    continue
                core = piece[:len(piece) - len(linker)] if linker else piece
                if len(core) < min_len:
                    continue
                for lemma, kind in _modifier_lemmas(m, core).items():
                    if kind == "inflected" and linker == "":
                        derivations.setdefault((lemma, ""), "inflected")
                    elif kind != "inflected":
                        key = (lemma, linker)
                        derivations[key] = kind
            # Base/stem + linker wins over an inflected reading of the
            # same lemma spanning the same slice.
            for (lemma, linker), kind in list(derivations.items()):
                if kind == "inflected" and any(
                        k[0] == lemma and v != "inflected"
                        for k, v in derivations.items()):
                    del derivations[(lemma, linker)]
            for (lemma, linker), kind in derivations.items():
                core = piece[:len(piece) - len(linker)] if linker else piece
                seg = Segment(core, lemma, linker)
                for rest in parse_modifiers(s[end:]):
                    parses.append([seg] + rest)
        return parses

    results: list[Segmentation] = []
    seen: set[tuple] = set()
    for head_start in range(min_len, len(form) - min_len + 1):
        head_slice = form[head_start:]
        head_lemmas = {entry.lemma
                       for entry, _, _ in _head_readings(m, head_slice)}
        if not head_lemmas:
            continue
        modifier_parses = parse_modifiers(form[:head_start])
        for mods in modifier_parses:
            if not mods:
                continue
            for head_lemma in sorted(head_lemmas):
                segmentation = Segmentation(
                    tuple(mods) + (Segment(head_slice, head_lemma),))
                key = tuple((s.surface, s.linker, s.piece)
                            for s in segmentation.segments)
                if key not in seen:
                    seen.add(key)
                    results.append(segmentation)
    return sorted(results, key=Segmentation.sort_key)


# --- regeneration (soundness checks) ------------------------------------------

def regenerate(analysis: Analysis, lexicon: Lexicon,
               paradigms: dict[str, Paradigm]) -> str:
    """Rebuild the surface string of a lexicon or compound reading from its
    entry and segments; GUESSER readings cannot be regenerated."""
    if analysis.provenance == GUESSER:
        raise ValueError("guesser readings are not regenerable")
    entry = lexicon.entries[analysis.entry_key]
    forms = generate(entry, paradigms[entry.paradigm_id])
    regenerated = None
    for form, tag in forms:
        if tag == analysis.tag:
            regenerated = form
            break
    if regenerated is None:
        raise ValueError(f"{analysis.tag} not generable from {entry.key}")
    if analysis.provenance == LEXICON:
        return _unshift(regenerated, analysis.case_shift)
    prefix = "".join(s.surface + s.linker for s in analysis.segments[:-1])
    return prefix + low_first(regenerated)


# --- unknown-word guesser ------------------------------------------------------

DEFAULT_MAX_SUFFIX_LEN = 5


class GuesserModel:
    """Suffix-frequency statistics for predicting tags of unknown forms."""

    def __init__(self, max_suffix_len: int = DEFAULT_MAX_SUFFIX_LEN):
        self.max_suffix_len = max_suffix_len
        self.suffix_stats: dict[str, dict[Tag, int]] = {}
        self.capitalization_prior: dict[bool, dict[Tag, int]] = {
            True: {}, False: {}}

    @property
    def trained(self) -> bool:
        return bool(self.suffix_stats) or any(
            self.capitalization_prior.values())

    def guess(self, form: str) -> dict[Tag, float]:
        """Tag distribution for the form: longest trained suffix wins,
        shorter suffixes are the backoff, the capitalization prior the
        floor. Probabilities sum to one."""
        if not self.trained:
            raise UntrainedGuesser("guesser has no statistics")
        if not form:
            raise EmptyForm("empty word form")
        counts: dict[Tag, int] | None = None
        for k in range(min(self.max_suffix_len, len(form)), 0, -1):
            counts = self.suffix_stats.get(form[-k:])
            if counts:
                break
        if not counts:
            counts = self.capitalization_prior[form[:1].isupper()]
        if not counts:
            counts = self.capitalization_prior[not form[:1].isupper()]
        total = sum(counts.values())
        return {tag: counts[tag] / total
                for tag in sorted(counts, key=Tag.render)}


def guess_tags(form: str, guesser: GuesserModel) -> dict[Tag, float]:
    """Tag distribution the guesser assigns to an unknown form."""
    return guesser.guess(form)


def train_guesser(pairs, max_suffix_len: int = DEFAULT_MAX_SUFFIX_LEN,
                  mapping=None) -> GuesserModel:
    """Count suffix/tag statistics from (form, tag) pairs; tags may be Tag
    values or renderings, optionally coarsened through a tagset mapping."""
    model = GuesserModel(max_suffix_len)
    n = 0
    for form, tag in pairs:
        if isinstance(tag, str):
            tag = parse_tag(tag)
        if mapping is not None:
            tag = mapping.map(tag)
        n += 1
        for k in range(1, min(max_suffix_len, len(form)) + 1):
            bucket = model.suffix_stats.setdefault(form[-k:], {})
            bucket[tag] = bucket.get(tag, 0) + 1
        prior = model.capitalization_prior[form[:1].isupper()]
        prior[tag] = prior.get(tag, 0) + 1
    if n == 0:
        raise EmptyTrainingData("no (form, tag) pairs")
    return model


def save_guesser(model: GuesserModel, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("#morphkit-v1 guesser\n[params]\n")
        fh.write(f"max_suffix_len\t{model.max_suffix_len}\n")
        fh.write("[cap]\n")
        for upper in (False, True):
            for tag in sorted(model.capitalization_prior[upper],
                              key=Tag.render):
                fh.write(f"{int(upper)}\t{tag.render()}\t"
                         f"{model.capitalization_prior[upper][tag]}\n")
        fh.write("[suffix]\n")
        for suffix in sorted(model.suffix_stats):
            for tag in sorted(model.suffix_stats[suffix], key=Tag.render):
                fh.write(f"{suffix}\t{tag.render()}\t"
                         f"{model.suffix_stats[suffix][tag]}\n")


def load_guesser(path) -> GuesserModel:
    model = GuesserModel()
    section = None
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith("#morphkit-v1"):
            raise RegistryError(f"{path}: missing #morphkit-v1 header")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("["):
                section = line
                continue
            cols = line.split("\t")
            if section == "[params]" and cols[0] == "max_suffix_len":
                model.max_suffix_len = int(cols[1])
            elif section == "[cap]" and len(cols) == 3:
                prior = model.capitalization_prior[cols[0] == "1"]
                prior[parse_tag(cols[1])] = int(cols[2])
            elif section == "[suffix]" and len(cols) == 3:
                bucket = model.suffix_stats.setdefault(cols[0], {})
                bucket[parse_tag(cols[1])] = int(cols[2])
            else:
                raise RegistryError(f"{path}:{lineno}: bad line")
    return model
