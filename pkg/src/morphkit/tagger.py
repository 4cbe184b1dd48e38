"""Trigram part-of-speech tagger: training, smoothing, Viterbi decoding.

The decoder picks, per sentence, the tag assignment maximizing the product
of lexical probabilities P(tag | word) and contextual probabilities
P(Z | X, Y), the latter estimated as trigram frequency over bigram
frequency with interpolated bigram/unigram backoff and an absolute floor.
Sentences are padded with two boundary tags in front and one behind, both
in training and in decoding, so sentences never influence one another.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .analyze import GUESSER, Analysis
from .errors import (EmptyCorpus, EmptyInput, LatticeMismatch, ModeMismatch,
                     NoCandidates, RegistryError, TagParseError)
from .tagset import BOUNDARY, Tag, TagsetMapping, parse_tag

LARGE = "LARGE"
SMALL = "SMALL"

DEFAULT_FLOOR = 1e-6
DEFAULT_TOP_K_UNKNOWN = 10


@dataclass
class TrigramModel:
    tagset_mode: str = SMALL
    f3: dict[tuple[Tag, Tag, Tag], int] = field(default_factory=dict)
    f2: dict[tuple[Tag, Tag], int] = field(default_factory=dict)
    f1: dict[Tag, int] = field(default_factory=dict)
    total: int = 0
    lex: dict[tuple[str, Tag], int] = field(default_factory=dict)
    wordcount: dict[str, int] = field(default_factory=dict)
    lambdas: tuple[float, float, float] = (1 / 3, 1 / 3, 1 / 3)
    floor: float = DEFAULT_FLOOR
    boundary: Tag = BOUNDARY

    def tags(self) -> list[Tag]:
        return sorted((t for t in self.f1 if t != self.boundary),
                      key=Tag.render)


@dataclass(frozen=True)
class TagLattice:
    """Per-token candidate tags with lexical probabilities (each summing
    to one)."""
    tokens: tuple[str, ...]
    candidates: tuple[tuple[tuple[Tag, float], ...], ...]

    def widths(self) -> list[int]:
        return [len(c) for c in self.candidates]


# --- corpus ------------------------------------------------------------------

def read_tagged_corpus(path) -> list[list[tuple[str, str]]]:
    """`token<TAB>tag` lines, blank line between sentences."""
    sentences: list[list[tuple[str, str]]] = []
    current: list[tuple[str, str]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if line.startswith("#"):
                continue
            if not line.strip():
                if current:
                    sentences.append(current)
                    current = []
                continue
            try:
                token, tag = line.split("\t")
            except ValueError:
                raise RegistryError(
                    f"{path}:{lineno}: expected token<TAB>tag") from None
            current.append((token, tag))
    if current:
        sentences.append(current)
    return sentences


def parse_corpus_tags(sentences, mode: str,
                      mapping: TagsetMapping | None = None
                      ) -> list[list[tuple[str, Tag]]]:
    parsed = []
    for sentence in sentences:
        row = []
        for token, tag_text in sentence:
            tag = parse_tag(tag_text)
            if mode == SMALL and mapping is not None \
                    and tag not in mapping.small_inventory:
                raise TagParseError(
                    f"{tag_text!r} is not in the small tag inventory")
            row.append((token, tag))
        parsed.append(row)
    return parsed


# --- training ----------------------------------------------------------------

def _count(sentences, boundary: Tag):
    f3: dict[tuple[Tag, Tag, Tag], int] = {}
    f2: dict[tuple[Tag, Tag], int] = {}
    f1: dict[Tag, int] = {}
    total = 0
    for sentence in sentences:
        padded = [boundary, boundary] + [t for _, t in sentence] + [boundary]
        for i, tag in enumerate(padded):
            f1[tag] = f1.get(tag, 0) + 1
            total += 1
            if i >= 1:
                b = (padded[i - 1], tag)
                f2[b] = f2.get(b, 0) + 1
            if i >= 2:
                tri = (padded[i - 2], padded[i - 1], tag)
                f3[tri] = f3.get(tri, 0) + 1
    return f3, f2, f1, total


def _deleted_interpolation(sentences, boundary: Tag
                           ) -> tuple[float, float, float]:
    """Tune the interpolation weights on a held-out 10% tail: each held-out
    trigram votes for whichever of the three estimators scores it best."""
    n = len(sentences)
    if n < 2:
        return (1 / 3, 1 / 3, 1 / 3)
    n_held = max(1, round(0.1 * n))
    train_part, held_part = sentences[:n - n_held], sentences[n - n_held:]
    c3, c2, c1, total = _count(train_part, boundary)
    votes = [0, 0, 0]
    for sentence in held_part:
        padded = [boundary, boundary] + [t for _, t in sentence] + [boundary]
        for i in range(2, len(padded)):
            x, y, z = padded[i - 2], padded[i - 1], padded[i]
            t3 = c3.get((x, y, z), 0) / c2[(x, y)] if c2.get((x, y)) else 0.0
            t2 = c2.get((y, z), 0) / c1[y] if c1.get(y) else 0.0
            t1 = c1.get(z, 0) / total if total else 0.0
            best = max(range(3), key=lambda j: ((t1, t2, t3)[j], j))
            votes[best] += 1
    s = sum(votes)
    if s == 0:
        return (1 / 3, 1 / 3, 1 / 3)
    return (votes[0] / s, votes[1] / s, votes[2] / s)


def train(sentences: list[list[tuple[str, Tag]]], tagset_mode: str,
          floor: float = DEFAULT_FLOOR) -> TrigramModel:
    """Count a trigram model from parsed tagged sentences; interpolation
    weights come from deleted interpolation over a held-out 10% split,
    counts from the full corpus."""
    sentences = [s for s in sentences if s]
    if not sentences:
        raise EmptyCorpus("no tagged sentences")
    model = TrigramModel(tagset_mode=tagset_mode, floor=floor)
    model.f3, model.f2, model.f1, model.total = _count(sentences,
                                                       model.boundary)
    for sentence in sentences:
        for token, tag in sentence:
            model.lex[(token, tag)] = model.lex.get((token, tag), 0) + 1
            model.wordcount[token] = model.wordcount.get(token, 0) + 1
    model.lambdas = _deleted_interpolation(sentences, model.boundary)
    return model


# --- probabilities -----------------------------------------------------------

def contextual_prob(model: TrigramModel, x: Tag, y: Tag, z: Tag) -> float:
    """P(z | x, y): interpolated trigram/bigram/unigram ratios, 0/0 terms
    dropping out, clamped below by the floor."""
    l1, l2, l3 = model.lambdas
    p = 0.0
    f2xy = model.f2.get((x, y), 0)
    if f2xy:
        p += l3 * model.f3.get((x, y, z), 0) / f2xy
    f1y = model.f1.get(y, 0)
    if f1y:
        p += l2 * model.f2.get((y, z), 0) / f1y
    if model.total:
        p += l1 * model.f1.get(z, 0) / model.total
    return max(p, model.floor)


def lexical_prob(model: TrigramModel, word: str, candidates,
                 fallback: dict[Tag, float] | None = None
                 ) -> dict[Tag, float]:
    """P(tag | word) over the candidate tags, from corpus counts for known
    words (floor-smoothing candidates unseen with this word), from the
    fallback distribution (e.g. the guesser's) or uniformly otherwise."""
    tags: list[Tag] = []
    for c in candidates:
        tag = c.tag if isinstance(c, Analysis) else c
        if tag not in tags:
            tags.append(tag)
    if not tags:
        raise NoCandidates(f"no candidate tags for {word!r}")
    tags.sort(key=Tag.render)
    if model.wordcount.get(word, 0) > 0:
        raw = {t: float(model.lex.get((word, t), 0)) or model.floor
               for t in tags}
    elif fallback:
        raw = {t: fallback.get(t, 0.0) for t in tags}
        if not any(raw.values()):
            raw = {t: 1.0 for t in tags}
    else:
        raw = {t: 1.0 for t in tags}
    total = sum(raw.values())
    return {t: raw[t] / total for t in tags}


def expand_guesser_tag(model: TrigramModel, mapping: TagsetMapping,
                       small: Tag) -> list[Tag]:
    """Large-mode stand-ins for a coarse guesser tag: every corpus-attested
    large tag mapping onto it (the coarse tag itself when none does)."""
    expansion = [t for t in model.tags() if mapping.map(t) == small]
    return expansion or [small]


def build_lattice(model: TrigramModel, tokens: list[str],
                  token_analyses: list[list[Analysis]],
                  mapping: TagsetMapping,
                  guesser=None,
                  top_k_unknown: int = DEFAULT_TOP_K_UNKNOWN,
                  uniform_lex: bool = False) -> TagLattice:
    """Candidate tags plus lexical probabilities for one sentence."""
    if len(tokens) != len(token_analyses):
        raise LatticeMismatch("one analysis list per token required")
    columns = []
    for token, analyses in zip(tokens, token_analyses):
        if not analyses:
            raise NoCandidates(f"no analyses for {token!r}")
        guessed = all(a.provenance == GUESSER for a in analyses)
        weights: dict[Tag, float] = {}
        for a in analyses:
            if model.tagset_mode == SMALL:
                tag_choices = [mapping.map(a.tag)]
            elif a.provenance == GUESSER:
                tag_choices = expand_guesser_tag(model, mapping, a.tag)
            else:
                tag_choices = [a.tag]
            for t in tag_choices:
                weights.setdefault(t, 0.0)
        if model.wordcount.get(token, 0) > 0:
            # Corpus-attested tags are candidates too: the analyzer may
            # not cover every training word (closed-class words, names).
            for (word, t), n in model.lex.items():
                if word == token and n > 0:
                    weights.setdefault(t, 0.0)
            guessed = False
        tags = sorted(weights, key=Tag.render)
        if uniform_lex:
            probs = {t: 1.0 / len(tags) for t in tags}
        elif model.wordcount.get(token, 0) > 0:
            probs = lexical_prob(model, token, tags)
        elif guessed and guesser is not None:
            dist = guesser.guess(token)
            for t in tags:
                small = t if model.tagset_mode == SMALL else mapping.map(t)
                share = dist.get(small, 0.0)
                if model.tagset_mode == LARGE:
                    siblings = sum(
                        1 for u in tags if mapping.map(u) == small)
                    share = share / siblings if siblings else 0.0
                weights[t] = share
            ranked = sorted(tags, key=lambda t: (-weights[t], t.render()))
            keep = [t for t in ranked[:top_k_unknown] if weights[t] > 0] \
                or ranked[:top_k_unknown]
            probs = lexical_prob(model, token, keep,
                                 {t: weights[t] for t in keep})
        else:
            probs = lexical_prob(model, token, tags)
        columns.append(tuple(sorted(probs.items(),
                                    key=lambda kv: kv[0].render())))
    return TagLattice(tuple(tokens), tuple(columns))


# --- decoding ----------------------------------------------------------------

def _log(p: float) -> float:
    return math.log(p) if p > 0 else float("-inf")


def tag_sentence(model: TrigramModel, tokens, lattice: TagLattice
                 ) -> list[Tag]:
    """Maximum-product assignment via Viterbi over previous-two-tag states
    in log space; ties fall to the lexicographically smaller rendered tag
    sequence, matching exhaustive enumeration exactly."""
    if tuple(tokens) != lattice.tokens:
        raise LatticeMismatch("lattice tokens differ from input tokens")
    if not tokens:
        return []
    b = model.boundary
    # state -> (score, tag sequence, rendered sequence)
    states: dict[tuple[Tag, Tag], tuple[float, tuple[Tag, ...], tuple[str, ...]]]
    states = {(b, b): (0.0, (), ())}
    for column in lattice.candidates:
        nxt: dict[tuple[Tag, Tag], tuple[float, tuple[Tag, ...], tuple[str, ...]]] = {}
        for (prev2, prev1), (score, seq, rendered) in states.items():
            for tag, lexp in column:
                s = score + _log(lexp)
                s = s + _log(contextual_prob(model, prev2, prev1, tag))
                state = (prev1, tag)
                candidate = (s, seq + (tag,), rendered + (tag.render(),))
                best = nxt.get(state)
                if best is None or candidate[0] > best[0] or (
                        candidate[0] == best[0] and candidate[2] < best[2]):
                    nxt[state] = candidate
        states = nxt
    best = None
    for (prev2, prev1), (score, seq, rendered) in states.items():
        s = score + _log(contextual_prob(model, prev2, prev1, b))
        candidate = (s, seq, rendered)
        if best is None or candidate[0] > best[0] or (
                candidate[0] == best[0] and candidate[2] < best[2]):
            best = candidate
    return list(best[1])


def brute_force_tag(model: TrigramModel, tokens, lattice: TagLattice
                    ) -> list[Tag]:
    """Exhaustive-enumeration argmax with the same accumulation order and
    tie rule as tag_sentence; the oracle for decoder tests."""
    if tuple(tokens) != lattice.tokens:
        raise LatticeMismatch("lattice tokens differ from input tokens")
    if not tokens:
        return []
    b = model.boundary
    best = None

    def recurse(i, prev2, prev1, score, seq, rendered):
        nonlocal best
        if i == len(lattice.candidates):
            s = score + _log(contextual_prob(model, prev2, prev1, b))
            candidate = (s, seq, rendered)
            if best is None or candidate[0] > best[0] or (
                    candidate[0] == best[0] and candidate[2] < best[2]):
                best = candidate
            return
        for tag, lexp in lattice.candidates[i]:
            s = score + _log(lexp)
            s = s + _log(contextual_prob(model, prev2, prev1, tag))
            recurse(i + 1, prev1, tag, s, seq + (tag,),
                    rendered + (tag.render(),))

    recurse(0, b, b, 0.0, (), ())
    return list(best[1])


# --- statistics ---------------------------------------------------------------

def ambiguity_rate(lattices) -> float:
    """Mean number of candidate tags per token across a lattice stream."""
    widths = []
    for lattice in lattices:
        widths.extend(lattice.widths())
    if not widths:
        raise EmptyInput("no tokens")
    return sum(widths) / len(widths)


def evaluate(model: TrigramModel, gold_sentences, lattices,
             mode: str | None = None) -> dict:
    """Token accuracy of the decoder against gold tags, plus a confusion
    summary (gold -> predicted counts for mistagged tokens)."""
    if mode is not None and mode != model.tagset_mode:
        raise ModeMismatch(f"model is {model.tagset_mode}, requested {mode}")
    if len(gold_sentences) != len(lattices):
        raise ModeMismatch("gold corpus and lattice stream differ in length")
    total = 0
    correct = 0
    confusion: dict[tuple[str, str], int] = {}
    for sentence, lattice in zip(gold_sentences, lattices):
        tokens = [w for w, _ in sentence]
        predicted = tag_sentence(model, tokens, lattice)
        for (_, gold_tag), pred in zip(sentence, predicted):
            total += 1
            if gold_tag == pred:
                correct += 1
            else:
                key = (gold_tag.render(), pred.render())
                confusion[key] = confusion.get(key, 0) + 1
    return {
        "total": total,
        "correct": correct,
        "accuracy": correct / total if total else 0.0,
        "confusion": dict(sorted(confusion.items())),
    }


# --- model file ----------------------------------------------------------------

def save_model(model: TrigramModel, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("#morphkit-v1 model\n[params]\n")
        fh.write(f"tagset_mode\t{model.tagset_mode}\n")
        fh.write(f"boundary\t{model.boundary.render()}\n")
        for i, lam in enumerate(model.lambdas, start=1):
            fh.write(f"lambda{i}\t{lam!r}\n")
        fh.write(f"floor\t{model.floor!r}\n")
        fh.write(f"total\t{model.total}\n")
        fh.write("[f1]\n")
        for tag in sorted(model.f1, key=Tag.render):
            fh.write(f"{tag.render()}\t{model.f1[tag]}\n")
        fh.write("[f2]\n")
        for x, y in sorted(model.f2, key=lambda p: (p[0].render(),
                                                    p[1].render())):
            fh.write(f"{x.render()}\t{y.render()}\t{model.f2[(x, y)]}\n")
        fh.write("[f3]\n")
        for x, y, z in sorted(model.f3, key=lambda p: (p[0].render(),
                                                       p[1].render(),
                                                       p[2].render())):
            fh.write(f"{x.render()}\t{y.render()}\t{z.render()}\t"
                     f"{model.f3[(x, y, z)]}\n")
        fh.write("[lex]\n")
        for word, tag in sorted(model.lex, key=lambda p: (p[0],
                                                          p[1].render())):
            fh.write(f"{word}\t{tag.render()}\t{model.lex[(word, tag)]}\n")


def load_model(path) -> TrigramModel:
    model = TrigramModel()
    lambdas = [1 / 3, 1 / 3, 1 / 3]
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
            if section == "[params]":
                key, value = cols
                if key == "tagset_mode":
                    model.tagset_mode = value
                elif key == "boundary":
                    model.boundary = parse_tag(value)
                elif key.startswith("lambda"):
                    lambdas[int(key[-1]) - 1] = float(value)
                elif key == "floor":
                    model.floor = float(value)
                elif key == "total":
                    model.total = int(value)
            elif section == "[f1]":
                model.f1[parse_tag(cols[0])] = int(cols[1])
            elif section == "[f2]":
                model.f2[(parse_tag(cols[0]), parse_tag(cols[1]))] = int(cols[2])
            elif section == "[f3]":
                model.f3[(parse_tag(cols[0]), parse_tag(cols[1]),
                          parse_tag(cols[2]))] = int(cols[3])
            elif section == "[lex]":
                word, tag_text, count = cols
                model.lex[(word, parse_tag(tag_text))] = int(count)
                model.wordcount[word] = model.wordcount.get(word, 0) \
                    + int(count)
            else:
                raise RegistryError(f"{path}:{lineno}: bad line")
    model.lambdas = (lambdas[0], lambdas[1], lambdas[2])
    return model
