"""Context-sensitive lemmatization: keep only lemmata whose paradigm can
realize the surface form under the tag the tagger chose; the rest are
discarded. Ties and empty survivor sets fall back to frequency, then to
lexicographic order, with the fallback recorded in the decision status.
"""

from __future__ import annotations

from dataclasses import dataclass

from .analyze import Analysis, cap_first, low_first
from .errors import AlignmentError, EmptyInput, NoAnalyses
from .tagset import Tag, TagsetMapping

UNAMBIGUOUS = "UNAMBIGUOUS"
RESOLVED = "RESOLVED"
UNRESOLVED_TIE = "UNRESOLVED_TIE"
NO_SURVIVOR = "NO_SURVIVOR"

LARGE = "LARGE"
SMALL = "SMALL"


@dataclass(frozen=True)
class LemmaDecision:
    surface: str
    chosen_tag: Tag
    survivors: tuple[str, ...]
    emitted: str
    status: str


def _normalize_case(lemma: str, pos: str) -> str:
    return cap_first(lemma) if pos == "SUB" else low_first(lemma)


def lemmatize(surface: str, analyses: list[Analysis], chosen_tag: Tag,
              mode: str = SMALL, mapping: TagsetMapping | None = None,
              lemma_freq: dict[str, int] | None = None) -> LemmaDecision:
    """Discard every lemma that has no reading matching the chosen tag
    (mapped to the requested granularity); emit the unique survivor, or
    fall back by frequency and spelling with an explicit status."""
    if not analyses:
        raise NoAnalyses(f"no analyses for {surface!r}")
    if mode == SMALL and mapping is None:
        raise ValueError("small-mode lemmatization needs a tagset mapping")
    freq = lemma_freq or {}

    def decision_tag(a: Analysis) -> Tag:
        return mapping.map(a.tag) if mode == SMALL else a.tag

    by_lemma: dict[str, list[Analysis]] = {}
    for a in analyses:
        by_lemma.setdefault(a.lemma, []).append(a)
    lemmas = sorted(by_lemma)
    survivors = tuple(sorted(
        lemma for lemma in lemmas
        if any(decision_tag(a) == chosen_tag for a in by_lemma[lemma])))

    def pick(pool) -> str:
        return sorted(pool, key=lambda l: (-freq.get(l, 0), l))[0]

    if len(lemmas) == 1:
        status = UNAMBIGUOUS
        emitted = lemmas[0]
    elif len(survivors) == 1:
        status = RESOLVED
        emitted = survivors[0]
    elif len(survivors) > 1:
        status = UNRESOLVED_TIE
        emitted = pick(survivors)
    else:
        status = NO_SURVIVOR
        emitted = pick(lemmas)

    backing = [a for a in by_lemma[emitted]
               if decision_tag(a) == chosen_tag] or by_lemma[emitted]
    emitted = _normalize_case(emitted, backing[0].tag.pos)
    return LemmaDecision(surface, chosen_tag, survivors, emitted, status)


def lemma_ambiguity_report(token_analyses) -> dict:
    """Histogram of tokens by number of distinct candidate lemmata."""
    by_degree: dict[int, int] = {}
    total = 0
    for analyses in token_analyses:
        degree = len({a.lemma for a in analyses})
        by_degree[degree] = by_degree.get(degree, 0) + 1
        total += 1
    if total == 0:
        raise EmptyInput("no tokens")
    return {
        "total": total,
        "by_degree": dict(sorted(by_degree.items())),
        "fractions": {d: n / total for d, n in sorted(by_degree.items())},
    }


def evaluate_lemmatizer(decisions: list[LemmaDecision],
                        gold_lemmata: list[str]) -> dict:
    """Accuracy over ambiguous tokens and over all tokens (the overall
    number alone would hide how many decisions were forced)."""
    if len(decisions) != len(gold_lemmata):
        raise AlignmentError(
            f"{len(decisions)} decisions vs {len(gold_lemmata)} gold lemmata")
    total = len(decisions)
    correct = 0
    ambiguous = 0
    ambiguous_correct = 0
    for decision, gold in zip(decisions, gold_lemmata):
        hit = decision.emitted == gold
        correct += hit
        if decision.status != UNAMBIGUOUS:
            ambiguous += 1
            ambiguous_correct += hit
    return {
        "total": total,
        "correct": correct,
        "accuracy": correct / total if total else 0.0,
        "ambiguous": ambiguous,
        "ambiguous_correct": ambiguous_correct,
        "ambiguous_accuracy":
            ambiguous_correct / ambiguous if ambiguous else 1.0,
    }
