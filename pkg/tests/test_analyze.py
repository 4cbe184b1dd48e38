import io

import pytest
from hypothesis import given, strategies as st

from morphkit.analyze import (GUESSER, LEXICON, Morphology, analyze,
                              analyze_fullform, regenerate, split_compound,
                              train_guesser)
from morphkit.errors import EmptyForm, EmptyTrainingData, UntrainedGuesser
from morphkit.inflect import entry_stem, generate
from morphkit.lexicon import (FullformLexicon, Lexicon, export_fullforms,
                              make_entry)
from morphkit.tagset import parse_tag

from oracles import brute_force_segmentations

TABLE_1 = {
    ("SUB NOM SIN FEM", "Winde"),
    ("SUB GEN SIN FEM", "Winde"),
    ("SUB DAT SIN FEM", "Winde"),
    ("SUB AKK SIN FEM", "Winde"),
    ("SUB DAT SIN MAS", "Wind"),
    ("SUB NOM PLU MAS", "Wind"),
    ("SUB GEN PLU MAS", "Wind"),
    ("SUB AKK PLU MAS", "Wind"),
    ("VER SIN 1PE PRÄ", "winden"),
    ("VER SIN 1PE KJ1", "winden"),
    ("VER SIN 3PE KJ1", "winden"),
    ("VER SIN IMP", "winden"),
}


def test_winde_reproduces_table_1(shared_lexicon, paradigms, morphology):
    readings = analyze("Winde", shared_lexicon, paradigms,
                       morphology=morphology)
    assert {(a.tag.render(), a.lemma) for a in readings} == TABLE_1
    assert len(readings) == 12
    assert all(a.provenance == LEXICON for a in readings)


def test_wind_matches_export_filter(shared_lexicon, paradigms, morphology):
    sink = io.StringIO()
    export_fullforms(shared_lexicon, paradigms, sink)
    expected = set()
    for line in sink.getvalue().splitlines():
        form, tag, lemma = line.split("\t")
        if form == "Wind":
            expected.add((tag, lemma))
    readings = analyze("Wind", shared_lexicon, paradigms,
                       morphology=morphology)
    assert {(a.tag.render(), a.lemma) for a in readings} == expected


def test_unknown_form_falls_back_to_guesser(shared_lexicon, paradigms,
                                            morphology, mapping):
    guesser = _fixture_guesser(shared_lexicon, paradigms, mapping)
    readings = analyze("Xylopharen", shared_lexicon, paradigms, guesser,
                       morphology=morphology)
    assert readings
    assert all(a.provenance == GUESSER for a in readings)
    assert all(a.lemma == "Xylopharen" for a in readings)


def test_analyze_rejects_empty_form(shared_lexicon, paradigms):
    with pytest.raises(EmptyForm):
        analyze("", shared_lexicon, paradigms)


def test_analyses_sorted_and_duplicate_free(shared_lexicon, paradigms,
                                            morphology):
    readings = analyze("Winde", shared_lexicon, paradigms,
                       morphology=morphology)
    keys = [a.sort_key() for a in readings]
    assert keys == sorted(keys)
    assert len(set(readings)) == len(readings)


# --- candidate roots -----------------------------------------------------------


@pytest.mark.parametrize("form,expected_root", [
    ("Häuser", "Haus"),
    ("Wind", "Wind"),
    ("Fässer", "Faß"),
    ("gegangen", "gang"),
    ("segle", "segel"),
])
def test_candidate_roots_contain_generating_stem(morphology, form,
                                                 expected_root):
    roots = [r for r, _ in morphology.candidate_roots(form)]
    assert expected_root in roots
    assert roots[0] == form


def test_candidate_roots_duplicate_free(morphology):
    roots = morphology.candidate_roots("Häusern")
    assert len(roots) == len(set(roots))


def test_candidate_roots_superset_guarantee(shared_lexicon, paradigms,
                                            morphology):
    """For every generated fixture form, the stem or alternant that
    produced it shows up among the root candidates of some case variant."""
    for entry in shared_lexicon.entries.values():
        paradigm = paradigms[entry.paradigm_id]
        stems = {entry_stem(entry, paradigm)} | set(entry.alternant_stems())
        for form, _ in generate(entry, paradigm):
            found = set()
            for variant in {form, form[:1].lower() + form[1:],
                            form[:1].upper() + form[1:]}:
                found.update(r for r, _ in morphology.candidate_roots(variant))
            assert stems & found, (entry.lemma, form)


# --- soundness and monotonicity --------------------------------------------------


def test_regeneration_soundness(shared_lexicon, paradigms, morphology):
    for entry in shared_lexicon.entries.values():
        for form, _ in generate(entry, paradigms[entry.paradigm_id]):
            for a in analyze(form, shared_lexicon, paradigms,
                             morphology=morphology):
                if a.provenance != GUESSER:
                    assert regenerate(a, shared_lexicon, paradigms) == form


def test_round_trip_all_fixture_forms(shared_lexicon, paradigms, morphology):
    for entry in shared_lexicon.entries.values():
        for form, tag in generate(entry, paradigms[entry.paradigm_id]):
            readings = analyze(form, shared_lexicon, paradigms,
                               morphology=morphology)
            assert any(a.lemma == entry.lemma and a.tag == tag
                       for a in readings), (entry.lemma, form)


def test_adding_a_stem_never_loses_coverage(lexicon, paradigms):
    before = Morphology(lexicon, paradigms)
    recognized_before = {
        form
        for entry in list(lexicon.entries.values())
        for form, _ in generate(entry, paradigms[entry.paradigm_id])
    }
    lexicon.add_stem(make_entry("Tisch", "SUB", "n_mas_e"))
    after = Morphology(lexicon, paradigms)
    for form in recognized_before:
        assert analyze(form, lexicon, paradigms, morphology=after)
    assert analyze("Tisches", lexicon, paradigms, morphology=after)


# --- compounds -------------------------------------------------------------------


def _segment_tuples(segmentations):
    return {tuple((s.surface, s.piece, s.linker) for s in seg.segments)
            for seg in segmentations}


@pytest.mark.parametrize("form,expected", [
    ("Hausmeister", {(("Haus", "Haus", ""), ("meister", "Meister", ""))}),
    ("Häusermeer", {(("Häuser", "Haus", ""), ("meer", "Meer", ""))}),
    ("Staubecken", {(("Stau", "Stau", ""), ("becken", "Becken", "")),
                    (("Staub", "Staub", ""), ("ecken", "Ecke", ""))}),
    ("Schweinebauch", {(("Schwein", "Schwein", "e"),
                        ("bauch", "Bauch", ""))}),
    ("Schweinsblase", {(("Schwein", "Schwein", "s"),
                        ("blase", "Blase", ""))}),
    ("Schweinkram", {(("Schwein", "Schwein", ""), ("kram", "Kram", ""))}),
])
def test_paper_compounds(shared_lexicon, paradigms, morphology, form,
                         expected):
    got = split_compound(form, shared_lexicon, paradigms,
                         morphology=morphology)
    assert _segment_tuples(got) == expected


def test_staubecken_order_longest_head_first(shared_lexicon, paradigms,
                                             morphology):
    got = split_compound("Staubecken", shared_lexicon, paradigms,
                         morphology=morphology)
    heads = [seg.head.surface for seg in got]
    assert heads == ["becken", "ecken"]


@pytest.mark.parametrize("form", [
    "Hausmeister", "Häusermeer", "Staubecken", "Schweinebauch",
    "Schweinsblase", "Schweinkram", "Windmeer", "Hausecke",
    "Meisterhaus", "Gartenecke", "Schweinehausecke", "Blasenmeer",
    "Xylopharen", "Winde",
])
def test_compound_splitting_matches_brute_force(shared_lexicon, paradigms,
                                                morphology, form):
    got = split_compound(form, shared_lexicon, paradigms,
                         morphology=morphology)
    oracle = brute_force_segmentations(form, shared_lexicon, paradigms)
    assert {tuple((s.surface, s.piece, s.linker) for s in seg.segments)
            for seg in got} == oracle


def test_compound_analysis_only_as_fallback(shared_lexicon, paradigms,
                                            morphology):
    # "Winde" has direct readings, so no compound analyses even though a
    # split might exist; "Staubecken" has none and yields compounds.
    direct = analyze("Winde", shared_lexicon, paradigms,
                     morphology=morphology)
    assert all(a.provenance == LEXICON for a in direct)
    compounds = analyze("Staubecken", shared_lexicon, paradigms,
                        morphology=morphology)
    assert compounds
    assert all(a.provenance == "COMPOUND" for a in compounds)
    lemmas = {a.lemma for a in compounds}
    assert lemmas == {"Staubecken", "Staubecke"}


def test_compound_regeneration(shared_lexicon, paradigms, morphology):
    for form in ["Hausmeister", "Häusermeer", "Staubecken",
                 "Schweinebauch"]:
        for a in analyze(form, shared_lexicon, paradigms,
                         morphology=morphology):
            assert regenerate(a, shared_lexicon, paradigms) == form


# --- guesser ---------------------------------------------------------------------


def _fixture_guesser(lexicon, paradigms, mapping):
    sink = io.StringIO()
    export_fullforms(lexicon, paradigms, sink)
    pairs = [tuple(line.split("\t")[:2])
             for line in sink.getvalue().splitlines()]
    return train_guesser(pairs, mapping=mapping)


def test_single_tag_suffix():
    model = train_guesser([("Zeitung", "SUB NOM SIN FEM")])
    dist = model.guess("Forschung")
    assert dist == {parse_tag("SUB NOM SIN FEM"): 1.0}


def test_capitalization_prior_backoff():
    model = train_guesser([("Haus", "SUB"), ("gehen", "VER")])
    dist = model.guess("Qqqqq")  # no trained suffix matches
    assert dist == {parse_tag("SUB"): 1.0}
    dist = model.guess("qqqqq")
    assert dist == {parse_tag("VER"): 1.0}


def test_suffix_distribution_from_hand_counts():
    pairs = [("laufen", "VER"), ("gehen", "VER"), ("sehen", "VER"),
             ("Wagen", "SUB")]
    model = train_guesser(pairs)
    dist = model.guess("Xen")
    assert dist[parse_tag("VER")] == pytest.approx(0.75)
    assert dist[parse_tag("SUB")] == pytest.approx(0.25)


def test_maus_via_aus_suffix():
    model = train_guesser([("Haus", "SUB NOM SIN NEU")])
    dist = model.guess("Maus")
    assert dist == {parse_tag("SUB NOM SIN NEU"): 1.0}


def test_longest_suffix_wins():
    model = train_guesser([("Meer", "SUB"), ("lieber", "ADV")])
    # "er" is trained from both; "ber" only from the adverb.
    assert model.guess("aber") == {parse_tag("ADV"): 1.0}


def test_empty_training_data():
    with pytest.raises(EmptyTrainingData):
        train_guesser([])


def test_untrained_guesser_raises():
    from morphkit.analyze import GuesserModel
    with pytest.raises(UntrainedGuesser):
        GuesserModel().guess("Haus")


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyzäöüß", min_size=1,
               max_size=12))
def test_guess_normalization_property(word):
    model = train_guesser([("Haus", "SUB"), ("gehen", "VER"),
                           ("Zeitung", "SUB"), ("segeln", "VER"),
                           ("schnell", "ADV")])
    dist = model.guess(word)
    assert abs(sum(dist.values()) - 1.0) <= 1e-9
    assert all(p >= 0 for p in dist.values())


def test_train_guesser_counting_oracle(shared_lexicon, paradigms, mapping):
    model = _fixture_guesser(shared_lexicon, paradigms, mapping)
    # Independent recount of one suffix bucket.
    sink = io.StringIO()
    export_fullforms(shared_lexicon, paradigms, sink)
    expected = {}
    for line in sink.getvalue().splitlines():
        form, tag, _ = line.split("\t")
        if form.endswith("er") and len(form) >= 2:
            small = mapping.map(parse_tag(tag))
            expected[small] = expected.get(small, 0) + 1
    assert model.suffix_stats["er"] == expected


def test_guesser_save_load_round_trip(tmp_path, shared_lexicon, paradigms,
                                      mapping):
    from morphkit.analyze import load_guesser, save_guesser
    model = _fixture_guesser(shared_lexicon, paradigms, mapping)
    path = tmp_path / "guesser.txt"
    save_guesser(model, path)
    reloaded = load_guesser(path)
    assert reloaded.suffix_stats == model.suffix_stats
    assert reloaded.capitalization_prior == model.capitalization_prior
    path2 = tmp_path / "guesser2.txt"
    save_guesser(reloaded, path2)
    assert path.read_bytes() == path2.read_bytes()


# --- full-form parity --------------------------------------------------------------


def test_fullform_parity_on_every_exported_form(shared_lexicon, paradigms,
                                                morphology, tmp_path):
    path = tmp_path / "ff.txt"
    with open(path, "w", encoding="utf-8") as fh:
        export_fullforms(shared_lexicon, paradigms, fh)
    table = FullformLexicon.load(path)
    forms = sorted(table.forms)
    for form in forms:
        via_lookup = analyze_fullform(form, table)
        via_rules = analyze(form, shared_lexicon, paradigms,
                            morphology=morphology)
        assert [(a.lemma, a.tag, a.segments) for a in via_lookup] \
            == [(a.lemma, a.tag, a.segments) for a in via_rules], form
