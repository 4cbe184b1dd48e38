"""Command-line entry point: analysis, generation, tagging, lemmatization,
training, export, evaluation, lexicon acquisition and the HTTP endpoint.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import io
import sys
from dataclasses import dataclass, field

from . import data
from .analyze import (DEFAULT_MAX_SUFFIX_LEN, GUESSER, Analysis, GuesserModel,
                      Morphology, Segment, analyze, analyze_fullform,
                      load_guesser, save_guesser, train_guesser)
from .errors import EmptyCorpus, ModeMismatch, MorphkitError
from .inflect import generate, load_paradigms
from .lexicon import (FullformLexicon, export_fullforms, load_lexicon,
                      make_entry, save_lexicon)
from .lemmatize import lemmatize
from .payload import analyses_payload, forms_payload, to_json_bytes
from .tagger import (DEFAULT_TOP_K_UNKNOWN, SMALL, TrigramModel,
                     ambiguity_rate, build_lattice, evaluate, load_model,
                     parse_corpus_tags, read_tagged_corpus, save_model,
                     tag_sentence, train)
from .tagset import Tag, enumerate_valid_tags, load_mapping, parse_tag


@dataclass
class PipelineConfig:
    lexicon_path: str = str(data.path(data.LEXICON))
    paradigm_path: str = str(data.path(data.PARADIGMS))
    tagmap_path: str = str(data.path(data.TAGMAP_SMALL))
    model_path: str = ""
    tagset_mode: str = SMALL
    linker_set: tuple[str, ...] = ("", "e", "s", "es", "en", "er", "n")
    guesser_suffix_len: int = DEFAULT_MAX_SUFFIX_LEN
    top_k_unknown: int = DEFAULT_TOP_K_UNKNOWN
    output_format: str = "text"


@dataclass
class Pipeline:
    config: PipelineConfig
    paradigms: dict = field(default_factory=dict)
    lexicon: object = None
    mapping: object = None
    morphology: Morphology | None = None
    guesser: GuesserModel | None = None
    model: TrigramModel | None = None
    fullform: FullformLexicon | None = None

    def analyses(self, form: str) -> list[Analysis]:
        if self.fullform is not None:
            found = analyze_fullform(form, self.fullform)
            if found:
                return found
            if self.guesser is None:
                return []
            return analyze(form, self.lexicon, self.paradigms, self.guesser,
                           self.config.linker_set, self.morphology)
        return analyze(form, self.lexicon, self.paradigms, self.guesser,
                       self.config.linker_set, self.morphology)


def _check_model_mode(model: TrigramModel, args) -> None:
    wanted = getattr(args, "tagset", None)
    if wanted and wanted.upper() != model.tagset_mode:
        raise ModeMismatch(
            f"model is {model.tagset_mode}, --tagset asked for "
            f"{wanted.upper()}")


def build_pipeline(args, need_model: bool = False,
                   want_guesser: bool = True) -> Pipeline:
    config = PipelineConfig(
        lexicon_path=args.lexicon,
        paradigm_path=args.paradigms,
        tagmap_path=args.tagmap,
        model_path=getattr(args, "model", "") or "",
        tagset_mode=getattr(args, "tagset", "small").upper(),
        guesser_suffix_len=getattr(args, "max_suffix_len",
                                   DEFAULT_MAX_SUFFIX_LEN),
        top_k_unknown=getattr(args, "top_k_unknown", DEFAULT_TOP_K_UNKNOWN),
    )
    paradigms = load_paradigms(config.paradigm_path)
    lexicon = load_lexicon(config.lexicon_path, paradigms)
    mapping = load_mapping(config.tagmap_path)
    pipeline = Pipeline(config, paradigms, lexicon, mapping,
                        Morphology(lexicon, paradigms, config.linker_set))
    if getattr(args, "fullform", None):
        pipeline.fullform = FullformLexicon.load(args.fullform)
    guesser_path = getattr(args, "guesser", None)
    if guesser_path:
        pipeline.guesser = load_guesser(guesser_path)
    elif want_guesser and not getattr(args, "no_guesser", False):
        pipeline.guesser = _guesser_from_lexicon(
            pipeline, config.guesser_suffix_len)
    if need_model:
        pipeline.model = load_model(config.model_path)
        _check_model_mode(pipeline.model, args)
    return pipeline


def _guesser_from_lexicon(pipeline: Pipeline, max_suffix_len: int
                          ) -> GuesserModel:
    """Default guesser: suffix statistics over the lexicon's own full-form
    export, coarsened to the small tag set."""
    sink = io.StringIO()
    export_fullforms(pipeline.lexicon, pipeline.paradigms, sink)
    pairs = []
    for line in sink.getvalue().splitlines():
        form, tag_text, _ = line.split("\t")
        pairs.append((form, tag_text))
    return train_guesser(pairs, max_suffix_len, pipeline.mapping)


# --- tokenizer -----------------------------------------------------------------

_DETACH = ".,!?;:"
_SENTENCE_END = {".", "!", "?"}


def load_abbreviations(path=None) -> set[str]:
    path = path or data.path(data.ABBREVIATIONS)
    abbreviations = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                abbreviations.add(line)
    return abbreviations


def tokenize(text: str, abbreviations: set[str] | None = None
             ) -> list[list[str]]:
    """Whitespace tokenization with terminal punctuation detached; sentence
    breaks after . ! ? when the next token is capitalized or input ends.
    Abbreviations keep their period and never end a sentence."""
    if abbreviations is None:
        abbreviations = load_abbreviations()
    flat: list[str] = []
    for raw in text.split():
        tail: list[str] = []
        while (len(raw) > 1 and raw[-1] in _DETACH
               and raw not in abbreviations
               and not (raw[-1] == "." and raw[-2].isdigit())):
            tail.append(raw[-1])
            raw = raw[:-1]
        flat.append(raw)
        flat.extend(reversed(tail))
    sentences: list[list[str]] = []
    current: list[str] = []
    for i, token in enumerate(flat):
        current.append(token)
        if token in _SENTENCE_END:
            nxt = flat[i + 1] if i + 1 < len(flat) else None
            if nxt is None or nxt[:1].isupper():
                sentences.append(current)
                current = []
    if current:
        sentences.append(current)
    return sentences


# --- pipeline runs ----------------------------------------------------------------

def tag_tokens(pipeline: Pipeline, sentences: list[list[str]],
               uniform_lex: bool = False) -> list[list[tuple[str, Tag]]]:
    out = []
    for tokens in sentences:
        lattice = build_lattice(
            pipeline.model, tokens,
            [pipeline.analyses(t) for t in tokens],
            pipeline.mapping, pipeline.guesser,
            pipeline.config.top_k_unknown, uniform_lex)
        tags = tag_sentence(pipeline.model, tokens, lattice)
        out.append(list(zip(tokens, tags)))
    return out


def lemmatize_tagged(pipeline: Pipeline,
                     sentences: list[list[tuple[str, Tag]]]):
    mode = pipeline.model.tagset_mode if pipeline.model else \
        pipeline.config.tagset_mode
    freq = pipeline.model.wordcount if pipeline.model else {}
    rows = []
    for sentence in sentences:
        decided = []
        for token, tag in sentence:
            analyses = pipeline.analyses(token)
            if not analyses:
                analyses = [Analysis(token, token, tag,
                                     (Segment(token, token),), GUESSER)]
            decision = lemmatize(token, analyses, tag, mode,
                                 pipeline.mapping, freq)
            decided.append(decision)
        rows.append(decided)
    return rows


# --- subcommands -----------------------------------------------------------------

def _read_input(args) -> str:
    if getattr(args, "input", None) and args.input != "-":
        with open(args.input, encoding="utf-8") as fh:
            return fh.read()
    return sys.stdin.read()


def _segments_text(a: Analysis) -> str:
    parts = []
    for s in a.segments:
        parts.append(s.piece)
        if s.linker:
            parts.append(s.linker)
    return "+".join(parts)


def _print_analyses(form: str, analyses: list[Analysis], out) -> None:
    for a in analyses:
        out.write(f"{form}\t{a.lemma}\t{a.tag.render()}\t"
                  f"{_segments_text(a)}\n")


def cmd_analyze(args) -> int:
    pipeline = build_pipeline(args)
    out = sys.stdout
    if args.word:
        analyses = pipeline.analyses(args.word)
        if args.json:
            out.buffer.write(to_json_bytes(
                analyses_payload(args.word, analyses)) + b"\n")
        else:
            _print_analyses(args.word, analyses, out)
        return 0
    text = _read_input(args)
    first = True
    for sentence in tokenize(text):
        for token in sentence:
            if not first:
                out.write("\n")
            first = False
            _print_analyses(token, pipeline.analyses(token), out)
    return 0


def cmd_generate(args) -> int:
    pipeline = build_pipeline(args, want_guesser=False)
    forms: list[tuple[str, Tag]] = []
    for entry in pipeline.lexicon.entries.values():
        if entry.lemma != args.lemma:
            continue
        if args.pos and entry.pos != args.pos:
            continue
        forms.extend(generate(entry, pipeline.paradigms[entry.paradigm_id]))
    if args.json:
        sys.stdout.buffer.write(to_json_bytes(
            forms_payload(args.lemma, args.pos, forms)) + b"\n")
    else:
        for form, tag in forms:
            sys.stdout.write(f"{form}\t{tag.render()}\n")
    return 0


def cmd_export(args) -> int:
    pipeline = build_pipeline(args, want_guesser=False)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            count = export_fullforms(pipeline.lexicon, pipeline.paradigms, fh)
    else:
        count = export_fullforms(pipeline.lexicon, pipeline.paradigms,
                                 sys.stdout)
    print(f"exported {count} forms", file=sys.stderr)
    return 0


def cmd_train(args) -> int:
    mode = args.tagset.upper()
    mapping = load_mapping(args.tagmap)
    sentences = read_tagged_corpus(args.corpus)
    if not sentences:
        raise EmptyCorpus("empty corpus")
    parsed = parse_corpus_tags(sentences, mode, mapping)
    model = train(parsed, mode, floor=args.floor)
    save_model(model, args.out)
    return 0


def cmd_train_guesser(args) -> int:
    mapping = None if args.tagset == "large" else load_mapping(args.tagmap)
    pairs = []
    with open(args.fullform, encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            form, tag_text = line.split("\t")[:2]
            pairs.append((form, tag_text))
    model = train_guesser(pairs, args.max_suffix_len, mapping)
    save_guesser(model, args.out)
    return 0


def cmd_tag(args) -> int:
    pipeline = build_pipeline(args, need_model=True)
    sentences = tokenize(_read_input(args))
    if not any(sentences):
        raise EmptyCorpus("empty corpus")
    out = sys.stdout
    for sentence in tag_tokens(pipeline, sentences, args.uniform_lexical):
        for token, tag in sentence:
            out.write(f"{token}\t{tag.render()}\n")
        out.write("\n")
    return 0


def _read_tagged_stream(text: str) -> list[list[tuple[str, Tag]]]:
    sentences: list[list[tuple[str, Tag]]] = []
    current: list[tuple[str, Tag]] = []
    for line in text.splitlines():
        if not line.strip():
            if current:
                sentences.append(current)
                current = []
            continue
        token, tag_text = line.split("\t")[:2]
        current.append((token, parse_tag(tag_text)))
    if current:
        sentences.append(current)
    return sentences


def cmd_lemmatize(args) -> int:
    pipeline = build_pipeline(args, need_model=True)
    if args.with_tagger:
        sentences = tokenize(_read_input(args))
        if not any(sentences):
            raise EmptyCorpus("empty corpus")
        tagged = tag_tokens(pipeline, sentences)
    else:
        tagged = _read_tagged_stream(_read_input(args))
        if not tagged:
            raise EmptyCorpus("empty corpus")
    out = sys.stdout
    for sentence in lemmatize_tagged(pipeline, tagged):
        for d in sentence:
            out.write(f"{d.surface}\t{d.chosen_tag.render()}\t{d.emitted}\t"
                      f"{d.status}\n")
        out.write("\n")
    return 0


def cmd_eval(args) -> int:
    pipeline = build_pipeline(args, need_model=True)
    mode = pipeline.model.tagset_mode
    sentences = read_tagged_corpus(args.gold)
    if not sentences:
        raise EmptyCorpus("empty corpus")
    parsed = parse_corpus_tags(sentences, mode, pipeline.mapping)
    lattices = []
    token_analyses = []
    for sentence in parsed:
        tokens = [w for w, _ in sentence]
        analyses = [pipeline.analyses(t) for t in tokens]
        token_analyses.extend(analyses)
        lattices.append(build_lattice(
            pipeline.model, tokens, analyses, pipeline.mapping,
            pipeline.guesser, pipeline.config.top_k_unknown))
    report = evaluate(pipeline.model, parsed, lattices)
    out = sys.stdout
    out.write(f"tokens\t{report['total']}\n")
    out.write(f"correct\t{report['correct']}\n")
    out.write(f"tagging-accuracy\t{report['accuracy']:.4f}\n")
    out.write(f"ambiguity-rate\t{ambiguity_rate(lattices):.4f}\n")
    degrees: dict[int, int] = {}
    for analyses in token_analyses:
        degree = len({a.lemma for a in analyses}) if analyses else 1
        degrees[degree] = degrees.get(degree, 0) + 1
    for degree in sorted(degrees):
        out.write(f"lemma-degree-{degree}\t{degrees[degree]}\n")
    attested = {tag for sentence in parsed for _, tag in sentence}
    out.write(f"tags-attested\t{len(attested)}\n")
    out.write(f"tags-theoretical-large\t{len(enumerate_valid_tags())}\n")
    out.write(f"tags-small-inventory\t"
              f"{len(pipeline.mapping.small_inventory)}\n")
    for (gold, pred), n in report["confusion"].items():
        out.write(f"confusion\t{gold} -> {pred}\t{n}\n")
    return 0


def cmd_lexicon_add(args) -> int:
    pipeline = build_pipeline(args, want_guesser=False)
    alternants = {}
    for item in args.alternant or []:
        name, _, stem = item.partition("=")
        alternants[name] = stem
    entry = make_entry(args.lemma, args.pos, args.paradigm, alternants,
                       args.prefix or "", args.gloss or "")
    entry_id = pipeline.lexicon.add_stem(entry)
    save_lexicon(pipeline.lexicon, args.out or args.lexicon)
    print(entry_id)
    return 0


def cmd_serve(args) -> int:
    from .server import serve
    serve(args.host, args.port, args.lexicon, args.paradigms, args.tagmap,
          save_path=args.out or args.lexicon)
    return 0


# --- argument parsing ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _add_common(p) -> None:
    p.add_argument("--lexicon", default=str(data.path(data.LEXICON)))
    p.add_argument("--paradigms", default=str(data.path(data.PARADIGMS)))
    p.add_argument("--tagmap", default=str(data.path(data.TAGMAP_SMALL)))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="morphkit")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("analyze", help="morphological analysis")
    _add_common(p)
    p.add_argument("--word")
    p.add_argument("--input")
    p.add_argument("--fullform", help="analyze via a full-form export")
    p.add_argument("--guesser", help="guesser model file")
    p.add_argument("--no-guesser", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("generate", help="inflect a lemma")
    _add_common(p)
    p.add_argument("--lemma", required=True)
    p.add_argument("--pos")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("export", help="write the full-form lexicon")
    _add_common(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("train", help="train the trigram tagger")
    p.add_argument("--corpus", required=True)
    p.add_argument("--tagset", choices=("small", "large"), default="small")
    p.add_argument("--tagmap", default=str(data.path(data.TAGMAP_SMALL)))
    p.add_argument("--floor", type=float, default=1e-6)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("train-guesser", help="train the unknown-word guesser")
    p.add_argument("--fullform", required=True)
    p.add_argument("--tagset", choices=("small", "large"), default="small")
    p.add_argument("--tagmap", default=str(data.path(data.TAGMAP_SMALL)))
    p.add_argument("--max-suffix-len", type=int,
                   default=DEFAULT_MAX_SUFFIX_LEN)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train_guesser)

    p = sub.add_parser("tag", help="tag running text")
    _add_common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--tagset", choices=("small", "large"), default="small")
    p.add_argument("--input")
    p.add_argument("--guesser")
    p.add_argument("--no-guesser", action="store_true")
    p.add_argument("--uniform-lexical", action="store_true",
                   help="ignore word/tag counts, use uniform lexical "
                        "probabilities over the candidates")
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("lemmatize", help="lemmatize tagged tokens")
    _add_common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--tagset", choices=("small", "large"), default="small")
    p.add_argument("--input")
    p.add_argument("--with-tagger", action="store_true",
                   help="run the tagger on raw text first")
    p.add_argument("--guesser")
    p.add_argument("--no-guesser", action="store_true")
    p.set_defaults(func=cmd_lemmatize)

    p = sub.add_parser("eval", help="evaluation report on a gold corpus")
    _add_common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--guesser")
    p.add_argument("--no-guesser", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("lexicon-add", help="add a stem entry")
    _add_common(p)
    p.add_argument("--lemma", required=True)
    p.add_argument("--pos", required=True)
    p.add_argument("--paradigm", required=True)
    p.add_argument("--alternant", action="append",
                   metavar="NAME=STEM")
    p.add_argument("--prefix")
    p.add_argument("--gloss")
    p.add_argument("--out", help="write the lexicon here instead of in place")
    p.set_defaults(func=cmd_lexicon_add)

    p = sub.add_parser("serve", help="run the HTTP endpoint")
    _add_common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8571)
    p.add_argument("--out", help="lexicon save path for committed entries")
    p.set_defaults(func=cmd_serve)

    return parser


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except MorphkitError as exc:
        print(f"morphkit: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"morphkit: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
