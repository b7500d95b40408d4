"""Noun-feature extraction: tokenize, POS-tag, and count document and
pair (co-occurrence) frequencies over cleaned summaries.

Co-occurrence is document-level presence: a pair is counted once per
document containing both features, regardless of distance or repetition.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from importlib import resources
from itertools import combinations
from typing import Iterable, Sequence

NOUN_TAGS = frozenset({"NN", "NNS", "NNP", "NNPS"})
NON_NOUN_SUFFIXES = ("ing", "ed", "ly", "ous", "ful")

_SPLIT_RE = re.compile(r"[^a-zA-Z0-9_-]+")
_DIGITS_RE = re.compile(r"^[0-9]+$")


class TaggingError(Exception):
    """Malformed pretagged input (a token without a token_TAG shape)."""


@dataclass(frozen=True)
class TaggedToken:
    surface: str
    tag: str  # NN/NNS/NNP/NNPS or OTHER


@dataclass(frozen=True)
class DocumentFeatures:
    doc_id: str
    features: frozenset[str]


@dataclass(frozen=True)
class UnigramCounts:
    counts: dict[str, int]
    n_docs: int


@dataclass(frozen=True)
class PairCounts:
    counts: dict[tuple[str, str], int]  # keys in lexicographic order
    n_docs: int


def tokenize(text: str) -> list[str]:
    """Lowercase and split on anything outside [a-zA-Z0-9_-]; drop tokens
    shorter than 2 characters and digits-only tokens."""
    tokens = []
    for tok in _SPLIT_RE.split(text.lower()):
        if len(tok) < 2 or _DIGITS_RE.match(tok):
            continue
        tokens.append(tok)
    return tokens


def _load_wordlist(name: str) -> frozenset[str]:
    text = resources.files("reqnet.data").joinpath(name).read_text()
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def default_stopwords() -> frozenset[str]:
    return _load_wordlist("stopwords.txt")


def default_verbs() -> frozenset[str]:
    return _load_wordlist("verbs.txt")


def load_stopwords(path: str) -> frozenset[str]:
    with open(path, "r", encoding="utf-8") as fh:
        return frozenset(w.strip().lower() for w in fh if w.strip())


class HeuristicTagger:
    """Rule-based noun tagger.

    Order of rules: stopword -> OTHER; verb-lexicon hit (surface or with a
    plural/participle suffix stripped) -> OTHER; non-noun suffix
    (-ing/-ed/-ly/-ous/-ful) -> OTHER; plural -s/-es whose stem also occurs
    in the same token list -> NNS; everything else -> NN.
    """

    def __init__(self, stopwords: frozenset[str] | None = None,
                 verbs: frozenset[str] | None = None):
        self.stopwords = stopwords if stopwords is not None else default_stopwords()
        self.verbs = verbs if verbs is not None else default_verbs()

    def _is_verb(self, token: str) -> bool:
        if token in self.verbs:
            return True
        for suffix in ("s", "es", "ing", "ed"):
            if token.endswith(suffix) and len(token) > len(suffix):
                stem = token[: -len(suffix)]
                if stem in self.verbs or stem + "e" in self.verbs:
                    return True
        return False

    def tag(self, tokens: Sequence[str]) -> list[TaggedToken]:
        present = set(tokens)
        tagged = []
        for tok in tokens:
            if tok in self.stopwords or self._is_verb(tok):
                tagged.append(TaggedToken(tok, "OTHER"))
            elif tok.endswith(NON_NOUN_SUFFIXES):
                tagged.append(TaggedToken(tok, "OTHER"))
            elif any(stem in present for stem in _plural_stems(tok)):
                tagged.append(TaggedToken(tok, "NNS"))
            else:
                tagged.append(TaggedToken(tok, "NN"))
        return tagged


def _plural_stems(token: str) -> tuple[str, ...]:
    stems = []
    if token.endswith("es") and len(token) > 3:
        stems.append(token[:-2])
    if token.endswith("s") and not token.endswith("ss") and len(token) > 2:
        stems.append(token[:-1])
    return tuple(stems)


class PretaggedTagger:
    """Passthrough for already-tagged ``token_TAG`` input.

    Noun tags (NN/NNS/NNP/NNPS) survive; every other tag collapses to
    OTHER. Tokens without an underscore-separated tag raise TaggingError.
    """

    def tag(self, tokens: Sequence[str]) -> list[TaggedToken]:
        tagged = []
        for tok in tokens:
            surface, sep, tag = tok.rpartition("_")
            if not sep or not surface or not tag:
                raise TaggingError("malformed token_TAG pair: %r" % tok)
            tag = tag.upper()
            tagged.append(TaggedToken(
                surface.lower(), tag if tag in NOUN_TAGS else "OTHER"))
        return tagged


def tag_tokens(tokens: Sequence[str], tagger) -> list[TaggedToken]:
    return tagger.tag(tokens)


def read_pretagged(lines: Iterable[str]) -> tuple[list[tuple[str, list[str]]], list[str]]:
    """Read pretagged corpus lines: ``#doc <id>`` sentinels followed by
    whitespace-separated token_TAG pairs. Returns (docs, errors); a doc is
    (doc_id, raw token_TAG list)."""
    docs: list[tuple[str, list[str]]] = []
    errors: list[str] = []
    current_id: str | None = None
    current: list[str] = []
    implicit = 0
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#doc"):
            if current_id is not None:
                docs.append((current_id, current))
            current_id = line[4:].strip() or str(len(docs))
            current = []
            continue
        if current_id is None:
            implicit += 1
            current_id = "doc%d" % implicit
        for tok in line.split():
            if "_" not in tok:
                errors.append("malformed token_TAG pair: %r (doc %s)" % (tok, current_id))
            else:
                current.append(tok)
    if current_id is not None:
        docs.append((current_id, current))
    return docs, errors


def extract_features(tagged: Sequence[TaggedToken], doc_id: str) -> DocumentFeatures:
    nouns = frozenset(t.surface for t in tagged if t.tag in NOUN_TAGS)
    return DocumentFeatures(doc_id, nouns)


def _check_unique_ids(docs: Sequence[DocumentFeatures]) -> None:
    ids = [d.doc_id for d in docs]
    if len(set(ids)) != len(ids):
        raise ValueError("doc_ids are not unique")


def unigram_document_frequency(docs: Sequence[DocumentFeatures]) -> UnigramCounts:
    _check_unique_ids(docs)
    counts: dict[str, int] = {}
    for doc in docs:
        for feat in doc.features:
            counts[feat] = counts.get(feat, 0) + 1
    return UnigramCounts(counts, len(docs))


def pair_document_frequency(docs: Sequence[DocumentFeatures]) -> PairCounts:
    _check_unique_ids(docs)
    counts: dict[tuple[str, str], int] = {}
    for doc in docs:
        for a, b in combinations(sorted(doc.features), 2):
            counts[(a, b)] = counts.get((a, b), 0) + 1
    return PairCounts(counts, len(docs))


def pmi_score(pairs: PairCounts, unigrams: UnigramCounts) -> dict[tuple[str, str], float]:
    """Pointwise mutual information over document frequencies:
    pmi(a,b) = log2( p(a,b) / (p(a) p(b)) ). Zero-count pairs never appear."""
    if pairs.n_docs <= 0:
        raise ValueError("n_docs must be positive")
    n = float(pairs.n_docs)
    scores = {}
    for (a, b), joint in pairs.counts.items():
        if joint <= 0:
            continue
        ca = unigrams.counts[a]
        cb = unigrams.counts[b]
        scores[(a, b)] = math.log2((joint / n) / ((ca / n) * (cb / n)))
    return scores


def write_unigrams_csv(unigrams: UnigramCounts, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["feature", "count"])
    for feat in sorted(unigrams.counts):
        writer.writerow([feat, unigrams.counts[feat]])


def write_pairs_csv(pairs: PairCounts, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["feature_a", "feature_b", "count"])
    for a, b in sorted(pairs.counts):
        writer.writerow([a, b, pairs.counts[(a, b)]])


def read_unigrams_csv(fh, n_docs: int = 0) -> UnigramCounts:
    reader = csv.reader(fh)
    header = next(reader, None)
    counts = {row[0]: int(row[1]) for row in reader if row}
    return UnigramCounts(counts, n_docs)


def read_pairs_csv(fh, n_docs: int = 0) -> PairCounts:
    reader = csv.reader(fh)
    header = next(reader, None)
    counts = {}
    for row in reader:
        if not row:
            continue
        a, b, c = row[0], row[1], int(row[2])
        key = (a, b) if a <= b else (b, a)
        counts[key] = c
    return PairCounts(counts, n_docs)
