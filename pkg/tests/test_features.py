import io
import math
import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from reqnet import features
from reqnet.features import (
    DocumentFeatures,
    HeuristicTagger,
    PretaggedTagger,
    TaggedToken,
    extract_features,
    pair_document_frequency,
    pmi_score,
    tokenize,
    unigram_document_frequency,
)


class TestTokenize:
    def test_basic_split(self):
        assert tokenize("the Search feature freezes") == \
            ["the", "search", "feature", "freezes"]

    def test_empty(self):
        assert tokenize("") == []

    def test_drop_rules(self):
        # len-1 and digits-only drop; mixed alphanumerics survive
        assert tokenize("GPS v2 fix-it 99") == ["gps", "v2", "fix-it"]

    def test_punctuation_split(self):
        assert tokenize("email/sms: sync!") == ["email", "sms", "sync"]

    @given(st.text())
    def test_token_alphabet(self, text):
        for tok in tokenize(text):
            assert len(tok) >= 2
            assert all(c in "abcdefghijklmnopqrstuvwxyz0123456789_-" for c in tok)
            assert not tok.isdigit()


class TestHeuristicTagger:
    def test_verb_and_noun(self):
        tagged = HeuristicTagger().tag(["search", "freezes"])
        assert tagged == [TaggedToken("search", "NN"),
                          TaggedToken("freezes", "OTHER")]

    def test_stopword(self):
        tagged = HeuristicTagger().tag(["the", "map"])
        assert tagged[0].tag == "OTHER" and tagged[1].tag == "NN"

    def test_suffix_rules(self):
        tagger = HeuristicTagger()
        for word in ["loading", "crashed", "quickly", "famous", "useful"]:
            assert tagger.tag([word])[0].tag == "OTHER", word

    def test_plural_with_known_stem(self):
        tagged = HeuristicTagger().tag(["widget", "widgets"])
        assert tagged[1].tag == "NNS"

    def test_empty(self):
        assert HeuristicTagger().tag([]) == []

    def test_custom_stopwords(self):
        tagger = HeuristicTagger(stopwords=frozenset({"map"}))
        assert tagger.tag(["map"])[0].tag == "OTHER"
        assert tagger.tag(["the"])[0].tag == "NN"


class TestPretaggedTagger:
    def test_passthrough(self):
        tagged = PretaggedTagger().tag(["gps_NN", "fails_VBZ"])
        assert tagged == [TaggedToken("gps", "NN"), TaggedToken("fails", "OTHER")]

    def test_all_noun_tags_kept(self):
        tagged = PretaggedTagger().tag(["a1_NN", "a2_NNS", "a3_NNP", "a4_NNPS"])
        assert all(t.tag in features.NOUN_TAGS for t in tagged)

    def test_malformed(self):
        with pytest.raises(features.TaggingError):
            PretaggedTagger().tag(["gps"])

    def test_read_pretagged(self):
        text = "#doc a\ngps_NN fails_VBZ\n#doc b\nmap_NN\n"
        docs, errors = features.read_pretagged(io.StringIO(text))
        assert [d[0] for d in docs] == ["a", "b"]
        assert docs[0][1] == ["gps_NN", "fails_VBZ"]
        assert not errors

    def test_read_pretagged_malformed_token(self):
        docs, errors = features.read_pretagged(io.StringIO("#doc a\ngps map_NN\n"))
        assert len(errors) == 1
        assert docs[0][1] == ["map_NN"]


class TestExtractFeatures:
    def test_dedup(self):
        tagged = [TaggedToken("search", "NN"), TaggedToken("map", "NN"),
                  TaggedToken("search", "NN")]
        assert extract_features(tagged, "d").features == {"search", "map"}

    def test_all_other(self):
        tagged = [TaggedToken("the", "OTHER")] * 3
        assert extract_features(tagged, "d").features == frozenset()

    def test_mixed_hand_tagged(self):
        tagger = HeuristicTagger()
        tokens = tokenize("the camera app should save raw photos and "
                          "open the gallery quickly after capture")
        tagged = tagger.tag(tokens)
        got = extract_features(tagged, "d").features
        # hand-applied rules: stopwords/verbs/suffix words drop, photos is
        # a plural without its stem present so it defaults to NN
        assert got == {"camera", "app", "raw", "photos", "gallery", "capture"}

    def test_idempotent_under_retokenize(self):
        tagger = HeuristicTagger()
        tagged = tagger.tag(tokenize("please fix the search map widget widgets"))
        first = extract_features(tagged, "d").features
        again = extract_features(
            tagger.tag(tokenize(" ".join(sorted(first)))), "d").features
        assert again == first


class TestCounts:
    def _docs(self, entries):
        return [DocumentFeatures(doc_id, frozenset(feats))
                for doc_id, feats in entries]

    def test_worked_unigram_example(self):
        # "sms" present in 20 of 25 documents
        docs = self._docs([("d%d" % i, ["sms", "x%d" % i]) for i in range(20)] +
                          [("e%d" % i, ["map"]) for i in range(5)])
        counts = unigram_document_frequency(docs)
        assert counts.counts["sms"] == 20
        assert counts.n_docs == 25

    def test_absent_feature_absent_key(self):
        counts = unigram_document_frequency(self._docs([("a", ["x"])]))
        assert "y" not in counts.counts

    def test_worked_pair_example(self):
        docs = self._docs([("r1", ["search", "map", "feature"]),
                           ("r2", ["search", "map", "app"])])
        pairs = pair_document_frequency(docs)
        assert pairs.counts[("map", "search")] == 2

    def test_single_feature_no_pairs(self):
        pairs = pair_document_frequency(self._docs([("a", ["x"])]))
        assert pairs.counts == {}

    def test_duplicate_doc_ids_rejected(self):
        with pytest.raises(ValueError):
            unigram_document_frequency(self._docs([("a", ["x"]), ("a", ["y"])]))

    def test_brute_force_equivalence(self):
        rng = random.Random(5)
        vocab = ["f%d" % i for i in range(12)]
        docs = self._docs([
            ("d%d" % i, rng.sample(vocab, rng.randint(0, 6)))
            for i in range(50)])
        counts = unigram_document_frequency(docs)
        for f in vocab:
            expected = sum(1 for d in docs if f in d.features)
            assert counts.counts.get(f, 0) == expected

        pairs = pair_document_frequency(docs[:30])
        for a, b in combinations(vocab, 2):
            expected = sum(1 for d in docs[:30]
                           if a in d.features and b in d.features)
            key = (a, b) if a < b else (b, a)
            assert pairs.counts.get(key, 0) == expected

    def test_pair_bounded_by_unigrams(self):
        rng = random.Random(9)
        vocab = ["f%d" % i for i in range(10)]
        docs = self._docs([("d%d" % i, rng.sample(vocab, rng.randint(0, 5)))
                           for i in range(40)])
        uni = unigram_document_frequency(docs)
        pairs = pair_document_frequency(docs)
        for (a, b), c in pairs.counts.items():
            assert c <= min(uni.counts[a], uni.counts[b])


class TestPmi:
    def _counts(self, pair_counts, uni_counts, n):
        pairs = features.PairCounts(pair_counts, n)
        unigrams = features.UnigramCounts(uni_counts, n)
        return pairs, unigrams

    def test_positive_dependence(self):
        pairs, unigrams = self._counts({("a", "b"): 2}, {"a": 2, "b": 2}, 4)
        assert pmi_score(pairs, unigrams)[("a", "b")] == pytest.approx(1.0)

    def test_independence_is_zero(self):
        pairs, unigrams = self._counts({("a", "b"): 1}, {"a": 2, "b": 2}, 4)
        assert pmi_score(pairs, unigrams)[("a", "b")] == pytest.approx(0.0)

    def test_negative_dependence(self):
        pairs, unigrams = self._counts({("a", "b"): 1}, {"a": 4, "b": 4}, 4)
        assert pmi_score(pairs, unigrams)[("a", "b")] == pytest.approx(-2.0)

    def test_symmetric_by_construction(self):
        # stored once in canonical order; value independent of orientation
        pairs, unigrams = self._counts({("a", "b"): 3}, {"a": 5, "b": 4}, 10)
        val = pmi_score(pairs, unigrams)[("a", "b")]
        flipped = math.log2((3 / 10) / ((4 / 10) * (5 / 10)))
        assert val == pytest.approx(flipped)


class TestCsvRoundTrip:
    def test_unigrams(self):
        uni = features.UnigramCounts({"b": 2, "a": 5}, 7)
        buf = io.StringIO()
        features.write_unigrams_csv(uni, buf)
        buf.seek(0)
        again = features.read_unigrams_csv(buf, n_docs=7)
        assert again.counts == uni.counts

    def test_pairs_lexicographic(self):
        pairs = features.PairCounts({("a", "b"): 2, ("a", "c"): 1}, 7)
        buf = io.StringIO()
        features.write_pairs_csv(pairs, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "feature_a,feature_b,count"
        assert lines[1] == "a,b,2"
        buf.seek(0)
        assert features.read_pairs_csv(buf).counts == pairs.counts
