"""Shipped fixture data: paradigms, lexicon, question tree, tag mapping,
mini corpora and the tokenizer abbreviation list."""

from importlib import resources


def path(name: str):
    """Filesystem path of a shipped data file."""
    return resources.files(__package__).joinpath(name)


PARADIGMS = "paradigms.txt"
LEXICON = "lexicon.txt"
QUESTION_TREE = "question_tree.txt"
TAGMAP_SMALL = "tagmap_small.txt"
MINICORPUS_SMALL = "minicorpus_small.txt"
MINICORPUS_LARGE = "minicorpus_large.txt"
ABBREVIATIONS = "abbreviations.txt"
