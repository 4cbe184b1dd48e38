"""morphkit: German morphological analysis, POS tagging, lemmatization.

The pipeline mirrors a compact-lexicon design: stems plus inflection
classes generate all word forms; analysis strips affixes and verifies by
regeneration; a trigram tagger disambiguates readings in context; the
lemmatizer discards lemmata incompatible with the chosen tag.
"""

from .analyze import (Analysis, GuesserModel, Morphology, Segment,
                      Segmentation, analyze, analyze_fullform,
                      candidate_roots, guess_tags, regenerate,
                      split_compound, train_guesser)
from .inflect import (Paradigm, Slot, apply_umlaut, generate, load_paradigms,
                      participle, reverse_umlaut, ss_shift, zu_infinitive)
from .lexicon import (FullformLexicon, Lexicon, QuestionTree, StemEntry,
                      export_fullforms, load_lexicon, load_question_tree,
                      make_entry, next_question, save_lexicon)
from .lemmatize import LemmaDecision, evaluate_lemmatizer, lemmatize
from .tagger import (TagLattice, TrigramModel, ambiguity_rate, build_lattice,
                     contextual_prob, lexical_prob, load_model, save_model,
                     tag_sentence, train)
from .tagset import Tag, TagsetMapping, load_mapping, map_large_to_small, parse_tag

__version__ = "0.1.0"
