import pytest

from termnet import Vocabulary
from termnet.denoise import (
    BUNDLED_STOPLISTS,
    CorpusCleaner,
    Lemmatizer,
    StopList,
    denoise_corpus,
    filter_numeric_and_rare,
    load_bundled_stoplist,
    load_bundled_stoplists,
    load_lemma_lexicon,
    load_stoplist,
    remove_stopwords,
)


@pytest.fixture(scope="module")
def lemmatizer():
    return Lemmatizer()


class TestLemmatizer:
    def test_verb_hint_strips_ing(self, lemmatizer):
        assert lemmatizer.lemmatize("learning", "verb") == "learn"

    def test_noun_hint_preserves_ing(self, lemmatizer):
        assert lemmatizer.lemmatize("learning", "noun") == "learning"

    def test_phrase_lemmatizes_final_word_only(self, lemmatizer):
        assert lemmatizer.lemmatize("autonomous_vehicles") == \
            "autonomous_vehicle"
        assert lemmatizer.lemmatize("heats_pumps") == "heats_pump"

    @pytest.mark.parametrize("token,lemma", [
        ("valves", "valve"),
        ("boxes", "box"),
        ("branches", "branch"),
        ("processes", "process"),
        ("classes", "class"),
        ("bodies", "body"),
        ("gases", "gas"),
        ("gas", "gas"),
        ("status", "status"),
        ("analysis", "analysis"),
        ("analyses", "analysis"),
        ("lens", "lens"),
        ("series", "series"),
        ("using", "use"),
        ("making", "make"),
        ("computing", "compute"),
        ("cooling", "cool"),
        ("running", "run"),
        ("controlled", "control"),
        ("controlling", "control"),
        ("falling", "fall"),
        ("coupling", "couple"),
        ("sampling", "sample"),
        ("limiting", "limit"),
        ("opening", "open"),
        ("modeling", "model"),
        ("applied", "apply"),
        ("needed", "need"),
        ("speed", "speed"),
        ("used", "use"),
        ("formed", "form"),
        ("fixed", "fix"),
        ("charging", "charge"),
        ("housing", "housing"),
        ("bearing", "bearing"),
        ("made", "make"),
        ("thing", "thing"),
        ("spring", "spring"),
        ("pump", "pump"),
    ])
    def test_rule_table(self, lemmatizer, token, lemma):
        assert lemmatizer.lemmatize(token) == lemma

    def test_noun_hint_keeps_plural_rules(self, lemmatizer):
        assert lemmatizer.lemmatize("valves", "noun") == "valve"

    def test_user_lexicon_overrides(self):
        custom = Lemmatizer(extra_lexicon={"corpora": "corpus",
                                           "housing": "house"})
        assert custom.lemmatize("corpora") == "corpus"
        assert custom.lemmatize("housing") == "house"

    def test_invalid_pos_hint(self, lemmatizer):
        with pytest.raises(ValueError):
            lemmatizer.lemmatize("x", "adverb")

    def test_lexicon_loader(self, tmp_path):
        path = tmp_path / "lex.txt"
        path.write_text("# comment\nfoos foo\n\nbars bar  # trailing\n")
        assert load_lemma_lexicon(path) == {"foos": "foo", "bars": "bar"}

    def test_lexicon_loader_rejects_bad_lines(self, tmp_path):
        path = tmp_path / "lex.txt"
        path.write_text("one two three\n")
        with pytest.raises(ValueError):
            load_lemma_lexicon(path)


class TestStopLists:
    def test_bundled_lists_exist_and_are_nonempty(self):
        lists = load_bundled_stoplists()
        assert [sl.name for sl in lists] == list(BUNDLED_STOPLISTS)
        assert all(sl.terms for sl in lists)

    def test_patent_jargon_seed_terms(self):
        jargon = load_bundled_stoplist("patent_jargon").terms
        assert {"disclosure", "plurality", "thereof"} <= jargon

    def test_file_loader_strips_comments(self, tmp_path):
        path = tmp_path / "stop.txt"
        path.write_text("# header\nthe\nAnd  # inline\n\n")
        sl = load_stoplist(path)
        assert sl.terms == frozenset({"the", "and"})
        assert sl.name == "stop"

    def test_unknown_bundled_name(self):
        with pytest.raises(ValueError):
            load_bundled_stoplist("klingon")


class TestRemoveStopwords:
    LISTS = [StopList("test", frozenset({"the", "of", "a", "is"}))]

    def test_standalone_removal(self):
        out = remove_stopwords([["the", "pump", "rotates"]], self.LISTS)
        assert out == [["pump", "rotates"]]

    def test_phrase_components_are_stripped(self):
        out = remove_stopwords([["state_of_the_art"]], self.LISTS)
        assert out == [["state_art"]]

    def test_phrase_collapsing_to_one_word_becomes_plain(self):
        out = remove_stopwords([["of_the_pump", "the_a"]], self.LISTS)
        assert out == [["pump"]]

    def test_empty_stoplists_change_nothing(self):
        corpus = [["the", "pump"]]
        assert remove_stopwords(corpus, []) == corpus

    def test_idempotence(self):
        corpus = [["the", "state_of_the_art", "pump", "is", "a", "win"],
                  ["of", "the"]]
        once = remove_stopwords(corpus, self.LISTS)
        assert remove_stopwords(once, self.LISTS) == once

    def test_emptied_sentences_are_dropped(self):
        assert remove_stopwords([["the", "of"], ["pump"]], self.LISTS) == \
            [["pump"]]


class TestFilterNumericAndRare:
    def test_hand_traced_example(self):
        corpus = [["valve", "120", "closes"], ["valve", "opens"]]
        cleaned, vocab = filter_numeric_and_rare(corpus, min_count=2)
        assert cleaned == [["valve"], ["valve"]]
        assert set(vocab.id_to_term) == {"valve"}
        assert vocab["valve"].count == 2

    def test_min_count_one_keeps_rare_terms(self):
        corpus = [["valve", "120"], ["rotor"]]
        cleaned, vocab = filter_numeric_and_rare(corpus, min_count=1)
        assert cleaned == [["valve"], ["rotor"]]
        assert len(vocab) == 2

    def test_mixed_alphanumerics_survive(self):
        cleaned, vocab = filter_numeric_and_rare([["a1b2", "a1b2"]], 2)
        assert cleaned == [["a1b2", "a1b2"]]
        assert "a1b2" in vocab

    def test_digit_phrase_components_are_stripped(self):
        cleaned, vocab = filter_numeric_and_rare(
            [["valve_120"], ["valve_120"]], 2)
        assert cleaned == [["valve"], ["valve"]]

    def test_empty_result(self):
        cleaned, vocab = filter_numeric_and_rare([["42", "7"]], 1)
        assert cleaned == [] and len(vocab) == 0


class TestVocabulary:
    def test_ids_are_dense_by_count_then_lexicographic(self):
        vocab = Vocabulary({"b": 3, "a": 3, "c": 5})
        assert vocab.id_of("c") == 0
        assert vocab.id_of("a") == 1
        assert vocab.id_of("b") == 2
        assert sorted(e.id for e in vocab.entries.values()) == [0, 1, 2]

    def test_frequencies_sum_to_one(self):
        vocab = Vocabulary({"a": 7, "b": 11, "c": 2})
        assert abs(sum(e.frequency for e in vocab.entries.values()) - 1.0) \
            < 1e-9

    def test_file_round_trip(self, tmp_path):
        vocab = Vocabulary({"pump": 4, "valve": 2, "heat_pump": 2})
        path = tmp_path / "vocab.txt"
        vocab.save(path)
        header = path.read_text().splitlines()[0]
        assert header == "3 8"
        loaded = Vocabulary.load(path)
        assert loaded.entries == vocab.entries
        assert loaded.total_tokens == vocab.total_tokens

    def test_unknown_term_raises(self):
        vocab = Vocabulary({"a": 1})
        from termnet import UnknownTermError
        with pytest.raises(UnknownTermError):
            vocab["zz"]


class TestDenoisePipeline:
    def test_full_order(self):
        corpus = [
            ["the", "heat_pump", "cools", "rooms"],
            ["the", "heat_pump", "cools", "120"],
            ["a", "vane", "spins"],
        ]
        cleaned, vocab = denoise_corpus(corpus, min_count=2)
        # stop-words removed, "cools" lemmatized to "cool", digits dropped,
        # rare terms ("rooms"->"room", "vane", "spins"->"spin") filtered
        assert cleaned == [["heat_pump", "cool"], ["heat_pump", "cool"]]
        assert set(vocab.id_to_term) == {"heat_pump", "cool"}

    def test_lemmatization_pools_counts_before_rare_filter(self):
        corpus = [["valve", "closes"], ["valves", "closed"]]
        cleaned, vocab = denoise_corpus(corpus, stoplists=[], min_count=2)
        assert vocab["valve"].count == 2
        assert vocab["close"].count == 2


class TestCorpusCleaner:
    def test_fit_transform_learns_vocabulary(self):
        cleaner = CorpusCleaner(min_count=2)
        corpus = [["the", "pump", "cools"], ["a", "pump", "cools"]]
        cleaned = cleaner.fit_transform(corpus)
        assert cleaned == [["pump", "cool"], ["pump", "cool"]]
        assert set(cleaner.vocabulary_.id_to_term) == {"pump", "cool"}

    def test_transform_filters_to_known_terms(self):
        cleaner = CorpusCleaner(min_count=2)
        cleaner.fit([["the", "pump", "cools"], ["a", "pump", "cools"]])
        out = cleaner.transform([["the", "pump", "hisses"]])
        assert out == [["pump"]]

    def test_unfitted_transform_fails(self):
        with pytest.raises(RuntimeError):
            CorpusCleaner().transform([["a"]])
