import pytest

from morphkit import data
from morphkit.analyze import Morphology
from morphkit.inflect import load_paradigms
from morphkit.lexicon import load_lexicon, load_question_tree
from morphkit.tagger import parse_corpus_tags, read_tagged_corpus, train
from morphkit.tagset import load_mapping


@pytest.fixture(scope="session")
def paradigms():
    return load_paradigms(data.path(data.PARADIGMS))


@pytest.fixture()
def lexicon(paradigms):
    # Function-scoped: some tests add entries.
    return load_lexicon(data.path(data.LEXICON), paradigms)


@pytest.fixture(scope="session")
def shared_lexicon(paradigms):
    return load_lexicon(data.path(data.LEXICON), paradigms)


@pytest.fixture(scope="session")
def mapping():
    return load_mapping(data.path(data.TAGMAP_SMALL))


@pytest.fixture(scope="session")
def morphology(shared_lexicon, paradigms):
    return Morphology(shared_lexicon, paradigms)


@pytest.fixture(scope="session")
def question_tree(paradigms):
    return load_question_tree(data.path(data.QUESTION_TREE), paradigms)


@pytest.fixture(scope="session")
def small_corpus(mapping):
    sentences = read_tagged_corpus(data.path(data.MINICORPUS_SMALL))
    return parse_corpus_tags(sentences, "SMALL", mapping)


@pytest.fixture(scope="session")
def large_corpus(mapping):
    sentences = read_tagged_corpus(data.path(data.MINICORPUS_LARGE))
    return parse_corpus_tags(sentences, "LARGE", mapping)


@pytest.fixture(scope="session")
def small_model(small_corpus):
    return train(small_corpus, "SMALL")


@pytest.fixture(scope="session")
def large_model(large_corpus):
    return train(large_corpus, "LARGE")
