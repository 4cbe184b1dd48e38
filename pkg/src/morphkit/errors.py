"""Exception hierarchy shared by all morphkit modules."""


class MorphkitError(Exception):
    """Base class; CLI maps these to exit code 2 (data error)."""


class RegistryError(MorphkitError):
    """Malformed paradigm / question-tree / mapping / model file."""


# --- lexicon ---------------------------------------------------------------

class DuplicateEntry(MorphkitError):
    pass


class UnknownParadigm(MorphkitError):
    pass


class MalformedLemma(MorphkitError):
    pass


class InvalidAnswer(MorphkitError):
    pass


class SinkFailure(MorphkitError):
    pass


# --- tagset ----------------------------------------------------------------

class TagParseError(MorphkitError):
    pass


class UnknownCode(TagParseError):
    pass


class IllegalFeatureForPos(TagParseError):
    pass


# --- inflect ---------------------------------------------------------------

class GenerationError(MorphkitError):
    pass


class NotAVerb(MorphkitError):
    pass


# --- analyze ---------------------------------------------------------------

class EmptyForm(MorphkitError):
    pass


class UntrainedGuesser(MorphkitError):
    pass


class EmptyTrainingData(MorphkitError):
    pass


# --- tagger ----------------------------------------------------------------

class EmptyCorpus(MorphkitError):
    pass


class EmptyInput(MorphkitError):
    pass


class NoCandidates(MorphkitError):
    pass


class LatticeMismatch(MorphkitError):
    pass


class ModeMismatch(MorphkitError):
    pass


# --- lemmatize -------------------------------------------------------------

class NoAnalyses(MorphkitError):
    pass


class AlignmentError(MorphkitError):
    pass
