"""Morphological tags and the coarse 51-tag mapping.

A tag is a part-of-speech code plus feature values (case, number, gender,
person, verb form, ...). Rendering is canonical: the pos code first, then
features ordered by category (usage, degree, case, number, gender, person,
verb form). Parsing accepts features in any order and canonicalizes, so
``SUB AKK FEM SIN`` and ``SUB AKK SIN FEM`` denote the same tag.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import IllegalFeatureForPos, RegistryError, UnknownCode

# Category name -> legal values, in canonical rendering order.
USAGE = "usage"
DEGREE = "degree"
CASE = "case"
NUMBER = "number"
GENDER = "gender"
PERSON = "person"
VFORM = "vform"

CATEGORY_ORDER = (USAGE, DEGREE, CASE, NUMBER, GENDER, PERSON, VFORM)

FEATURES = {
    USAGE: ("PER", "POS", "DEM", "REL", "REF", "INT", "IND", "ATT", "PRD",
            "DEF", "EIG", "AUX", "MOD", "UNT", "VGL", "KRD", "ORD", "ZU",
            "ANT", "VRB"),
    DEGREE: ("KOM", "SUP"),
    CASE: ("NOM", "GEN", "DAT", "AKK"),
    NUMBER: ("SIN", "PLU"),
    GENDER: ("MAS", "FEM", "NEU"),
    PERSON: ("1PE", "2PE", "3PE"),
    VFORM: ("PRÄ", "PRT", "KJ1", "KJ2", "IMP", "INF", "IZU", "PA1", "PA2"),
}

_FEATURE_CATEGORY = {}
for _cat, _values in FEATURES.items():
    for _v in _values:
        if _v in _FEATURE_CATEGORY:
            raise AssertionError(f"feature code {_v} assigned twice")
        _FEATURE_CATEGORY[_v] = _cat

# pos code -> {category: allowed values (None = all of the category)}
POS_CODES = {
    "SUB": {USAGE: ("EIG",), CASE: None, NUMBER: None, GENDER: None},
    "VER": {USAGE: ("AUX", "MOD"), NUMBER: None, PERSON: None, VFORM: None},
    "ADJ": {USAGE: ("ATT", "PRD"), DEGREE: None, CASE: None, NUMBER: None,
            GENDER: None},
    "ART": {USAGE: ("DEF", "IND"), CASE: None, NUMBER: None, GENDER: None},
    "PRO": {USAGE: ("PER", "POS", "DEM", "REL", "REF", "INT", "IND"),
            CASE: None, NUMBER: None, GENDER: None, PERSON: None},
    "POS": {USAGE: ("ATT", "PRD"), CASE: None, NUMBER: None, GENDER: None},
    "PRP": {},
    "KON": {USAGE: ("UNT", "VGL")},
    "ADV": {},
    "INJ": {},
    "ZAL": {USAGE: ("KRD", "ORD"), CASE: None, NUMBER: None, GENDER: None},
    "NEG": {},
    "ABK": {},
    "SZE": {},
    "FRM": {},
    "PTK": {USAGE: ("ZU", "ANT", "VRB")},
    # Reserved sentence-boundary tag used internally by the tagger.
    "BND": {},
}

_CATEGORY_RANK = {cat: i for i, cat in enumerate(CATEGORY_ORDER)}


@dataclass(frozen=True, order=True)
class Tag:
    """One morphological tag: pos code plus canonically ordered features."""

    pos: str
    features: tuple[str, ...] = ()

    def render(self) -> str:
        return " ".join((self.pos,) + self.features)

    def __str__(self) -> str:
        return self.render()

    def has(self, feature: str) -> bool:
        return feature in self.features

    def feature(self, category: str) -> str | None:
        """The tag's value in `category`, or None when unmarked."""
        for f in self.features:
            if _FEATURE_CATEGORY[f] == category:
                return f
        return None


def parse_tag(text: str) -> Tag:
    """Parse a whitespace-separated tag rendering into a canonical Tag.

    Feature order in the input is irrelevant; the canonical order is
    restored. Raises UnknownCode / IllegalFeatureForPos on bad input.
    """
    parts = text.split()
    if not parts:
        raise UnknownCode("empty tag")
    pos = parts[0]
    if pos not in POS_CODES:
        raise UnknownCode(f"unknown part-of-speech code: {pos!r}")
    allowed = POS_CODES[pos]
    seen: dict[str, str] = {}
    for code in parts[1:]:
        cat = _FEATURE_CATEGORY.get(code)
        if cat is None:
            raise UnknownCode(f"unknown feature code: {code!r}")
        if cat not in allowed:
            raise IllegalFeatureForPos(f"{code} not legal for {pos}")
        legal = allowed[cat]
        if legal is not None and code not in legal:
            raise IllegalFeatureForPos(f"{code} not legal for {pos}")
        if cat in seen and seen[cat] != code:
            raise IllegalFeatureForPos(
                f"conflicting {cat} features {seen[cat]}/{code} on {pos}")
        seen[cat] = code
    features = tuple(seen[cat] for cat in CATEGORY_ORDER if cat in seen)
    return Tag(pos, features)


def is_valid_tag_text(text: str) -> bool:
    try:
        parse_tag(text)
    except Exception:
        return False
    return True


BOUNDARY = Tag("BND")


# --- large -> small mapping -------------------------------------------------

@dataclass(frozen=True)
class MappingRule:
    pos: str
    required: frozenset[str]
    small: Tag


class TagsetMapping:
    """Ordered first-match-wins rules from large tags onto the small set.

    A rule line `VER AUX INF<TAB>VER AUX INF` matches every tag whose pos is
    VER and whose features include AUX and INF. Every pos must end with a
    bare catch-all rule, which makes the mapping total.
    """

    def __init__(self, rules: list[MappingRule]):
        self.rules = rules
        self.small_inventory = {r.small for r in rules}
        covered = {r.pos for r in rules if not r.required}
        missing = [p for p in POS_CODES if p != "BND" and p not in covered]
        if missing:
            raise RegistryError(
                f"mapping lacks a catch-all rule for: {', '.join(missing)}")

    def map(self, tag: Tag) -> Tag:
        if tag.pos == "BND":
            return tag
        feats = set(tag.features)
        for rule in self.rules:
            if rule.pos == tag.pos and rule.required <= feats:
                return rule.small
        raise RegistryError(f"no mapping rule matched {tag!r}")


def map_large_to_small(tag: Tag, mapping: TagsetMapping) -> Tag:
    return mapping.map(tag)


def load_mapping(path) -> TagsetMapping:
    """Read a `large-pattern<TAB>small-tag` mapping file."""
    rules = []
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith("#morphkit-v1"):
            raise RegistryError(f"{path}: missing #morphkit-v1 header")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            try:
                pattern, small_text = line.split("\t")
            except ValueError:
                raise RegistryError(f"{path}:{lineno}: expected 2 columns")
            big = parse_tag(pattern)
            rules.append(MappingRule(big.pos, frozenset(big.features),
                                     parse_tag(small_text)))
    return TagsetMapping(rules)


# --- tag space enumeration (reporting only) ---------------------------------

def enumerate_valid_tags() -> list[Tag]:
    """All complete feature bundles the analyzer can emit.

    Used by the eval report to contrast the theoretical tag count with the
    corpus-attested one. Partial bundles (e.g. bare `SUB NOM`) parse fine
    but are not counted here.
    """
    tags: list[Tag] = []

    def noun_like(pos, usages):
        for u in usages:
            for c, n, g in itertools.product(FEATURES[CASE], FEATURES[NUMBER],
                                             FEATURES[GENDER]):
                tags.append(parse_tag(" ".join(filter(None, (pos, u, c, n, g)))))

    noun_like("SUB", ("", "EIG"))
    noun_like("ART", ("DEF", "IND"))
    noun_like("POS", ("ATT",))
    tags.append(parse_tag("POS PRD"))
    for u in ("PER", "POS", "DEM", "REL", "REF", "INT", "IND"):
        for c, n, g in itertools.product(FEATURES[CASE], FEATURES[NUMBER],
                                         FEATURES[GENDER]):
            tags.append(parse_tag(f"PRO {u} {c} {n} {g}"))
        if u == "PER":
            for c, n, p in itertools.product(FEATURES[CASE], FEATURES[NUMBER],
                                             FEATURES[PERSON]):
                tags.append(parse_tag(f"PRO PER {c} {n} {p}"))
    for u in ("", "AUX", "MOD"):
        for n, p, vf in itertools.product(FEATURES[NUMBER], FEATURES[PERSON],
                                          ("PRÄ", "PRT", "KJ1", "KJ2")):
            tags.append(parse_tag(" ".join(filter(None, ("VER", u, n, p, vf)))))
        for n in FEATURES[NUMBER]:
            tags.append(parse_tag(" ".join(filter(None, ("VER", u, n, "IMP")))))
        for vf in ("INF", "IZU", "PA1", "PA2"):
            tags.append(parse_tag(" ".join(filter(None, ("VER", u, vf)))))
    for d in ("", "KOM", "SUP"):
        tags.append(parse_tag(" ".join(filter(None, ("ADJ", "PRD", d)))))
        for c, n, g in itertools.product(FEATURES[CASE], FEATURES[NUMBER],
                                         FEATURES[GENDER]):
            tags.append(parse_tag(" ".join(filter(None, ("ADJ", "ATT", d, c, n, g)))))
    for u in ("KRD", "ORD"):
        tags.append(parse_tag(f"ZAL {u}"))
    for bare in ("PRP", "KON", "KON UNT", "KON VGL", "ADV", "INJ", "NEG",
                 "ABK", "SZE", "FRM", "PTK", "PTK ZU", "PTK ANT", "PTK VRB"):
        tags.append(parse_tag(bare))
    return sorted(set(tags), key=Tag.render)
