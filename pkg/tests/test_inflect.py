import pytest
from hypothesis import given, strategies as st

from morphkit.errors import GenerationError, NotAVerb
from morphkit.inflect import (SS_TO_ESZETT, SS_TO_SS, apply_umlaut, generate,
                              omit_e, participle, reverse_umlaut, ss_shift,
                              zu_infinitive)
from morphkit.lexicon import make_entry

from oracles import reverse_umlaut_oracle


@pytest.mark.parametrize("stem,expected", [
    ("Haus", "Häus"),
    ("Fass", "Fäss"),
    ("Garten", "Gärten"),
    ("Bauch", "Bäuch"),
    ("Wort", "Wört"),
    ("Fuß", "Füß"),
    ("Fäss", "Fäss"),    # already mutated
    ("Brrr", "Brrr"),    # nothing to mutate
    ("Wind", "Wind"),
])
def test_apply_umlaut(stem, expected):
    assert apply_umlaut(stem) == expected


@pytest.mark.parametrize("stem,expected", [
    ("Häus", ["Häus", "Haus"]),
    ("Wind", ["Wind"]),
    ("Wörterbüch", ["Wörterbüch", "Worterbüch", "Wörterbuch", "Worterbuch"]),
])
def test_reverse_umlaut_examples(stem, expected):
    assert reverse_umlaut(stem) == expected


@pytest.mark.parametrize("stem", [
    "Häus", "Wörterbüch", "Gärten", "Bäuche", "wände", "Füße", "Mäuse",
    "xyz", "Äußerung",
])
def test_reverse_umlaut_matches_subset_oracle(stem):
    assert reverse_umlaut(stem) == reverse_umlaut_oracle(stem)


def test_ss_shift_examples():
    assert ss_shift("Faß", SS_TO_SS) == "Fass"
    assert ss_shift("Fluss", SS_TO_ESZETT) == "Fluß"
    assert ss_shift("Wind", SS_TO_SS) == "Wind"
    assert ss_shift("Wind", SS_TO_ESZETT) == "Wind"


@given(st.text(alphabet="abcdefghklmnoprstuwß", min_size=1, max_size=10))
def test_ss_shift_inverse_property(stem):
    if stem.endswith("ß"):
        assert ss_shift(ss_shift(stem, SS_TO_SS), SS_TO_ESZETT) == stem


_UMLAUTABLE = "aou"


@given(st.text(alphabet="bcdfghklmnprstw", min_size=1, max_size=4),
       st.sampled_from(_UMLAUTABLE),
       st.text(alphabet="bcdfghklmnprstw", min_size=0, max_size=4))
def test_umlaut_partial_inverse(prefix, vowel, suffix):
    stem = prefix + vowel + suffix
    mutated = apply_umlaut(stem)
    assert mutated != stem
    assert stem in reverse_umlaut(mutated)


def test_omit_e():
    assert omit_e("segel") == "segl"
    assert omit_e("wunder") == "wundr"
    assert omit_e("geh") == "geh"


def _entry(lexicon, lemma, pos=None):
    hits = [e for e in lexicon.entries.values() if e.lemma == lemma
            and (pos is None or e.pos == pos)]
    assert len(hits) == 1, f"{lemma}: {hits}"
    return hits[0]


def test_generate_haus_umlaut(shared_lexicon, paradigms):
    entry = _entry(shared_lexicon, "Haus")
    forms = generate(entry, paradigms[entry.paradigm_id])
    rendered = {(f, t.render()) for f, t in forms}
    assert ("Häuser", "SUB NOM PLU NEU") in rendered


def test_generate_fass_ss_shift(shared_lexicon, paradigms):
    entry = _entry(shared_lexicon, "Faß")
    rendered = {(f, t.render())
                for f, t in generate(entry, paradigms[entry.paradigm_id])}
    assert ("Fässer", "SUB NOM PLU NEU") in rendered
    assert ("Fasses", "SUB GEN SIN NEU") in rendered


def test_generate_segeln_e_omission(shared_lexicon, paradigms):
    entry = _entry(shared_lexicon, "segeln")
    rendered = {(f, t.render())
                for f, t in generate(entry, paradigms[entry.paradigm_id])}
    assert ("segle", "VER SIN 1PE PRÄ") in rendered


def test_generate_slot_tag_bijection(shared_lexicon, paradigms):
    for entry in shared_lexicon.entries.values():
        paradigm = paradigms[entry.paradigm_id]
        forms = generate(entry, paradigm)
        assert len(forms) == len(paradigm.slots)
        assert [t for _, t in forms] == [s.tag for s in paradigm.slots]


def test_generate_deterministic(shared_lexicon, paradigms):
    for entry in shared_lexicon.entries.values():
        paradigm = paradigms[entry.paradigm_id]
        assert generate(entry, paradigm) == generate(entry, paradigm)


def test_generate_rejects_pos_mismatch(shared_lexicon, paradigms):
    entry = _entry(shared_lexicon, "Wind")
    with pytest.raises(GenerationError):
        generate(entry, paradigms["v_weak"])


def test_generate_missing_alternant(paradigms):
    bare = make_entry("binden", "VER", "v_strong_i")
    with pytest.raises(GenerationError):
        generate(bare, paradigms["v_strong_i"])


def test_zu_infinitive(shared_lexicon):
    assert zu_infinitive(_entry(shared_lexicon, "weggehen")) == "wegzugehen"
    assert zu_infinitive(_entry(shared_lexicon, "gehen")) == "zu gehen"
    with pytest.raises(NotAVerb):
        zu_infinitive(_entry(shared_lexicon, "Wind"))


def test_participle(shared_lexicon, paradigms):
    gehen = _entry(shared_lexicon, "gehen")
    assert participle(gehen, paradigms[gehen.paradigm_id]) == "gegangen"
    weggehen = _entry(shared_lexicon, "weggehen")
    assert participle(weggehen,
                      paradigms[weggehen.paradigm_id]) == "weggegangen"
    segeln = _entry(shared_lexicon, "segeln")
    assert participle(segeln, paradigms[segeln.paradigm_id]) == "gesegelt"
    begreifen = _entry(shared_lexicon, "begreifen")
    assert participle(begreifen,
                      paradigms[begreifen.paradigm_id]) == "begriffen"
    with pytest.raises(NotAVerb):
        participle(_entry(shared_lexicon, "Haus"), paradigms["n_neu_er_uml"])


def test_prefix_infixation_property(shared_lexicon, paradigms):
    for entry in shared_lexicon.entries.values():
        if entry.pos != "VER" or not entry.separable_prefix:
            continue
        prefix = entry.separable_prefix
        pa2 = participle(entry, paradigms[entry.paradigm_id])
        assert pa2.startswith(prefix + "ge")
        zu = zu_infinitive(entry)
        assert zu.startswith(prefix + "zu")
