import math

import numpy as np
import pytest

from termnet import (
    CooccurrenceTable,
    TrainConfig,
    UnknownTermError,
    Vocabulary,
    build_cooccurrence,
    subsample_probability,
    train_glove,
    train_skipgram,
)
from termnet.embedding import (
    EmbeddingMatrix,
    TrainStats,
    glove_initial_matrix,
    glove_total_loss,
    glove_weight,
    gradient_check,
    skipgram_initial_matrix,
    skipgram_step,
)
from termnet.embedding.skipgram import skipgram_gradients, skipgram_loss


@pytest.fixture(scope="module")
def vocab7():
    return Vocabulary({"a": 9, "b": 7, "c": 5, "d": 4, "e": 3, "f": 2,
                       "g": 2})


@pytest.fixture(scope="module")
def corpus7():
    return [["a", "b", "c"], ["a", "b", "d"], ["c", "d", "e"],
            ["a", "e", "f"], ["b", "g", "a"], ["c", "b", "a"],
            ["d", "e", "g"], ["a", "b", "c", "f"], ["a", "c"]]


class TestTrainConfig:
    def test_defaults_resolve_per_algorithm(self):
        assert TrainConfig(algorithm="skipgram").effective_learning_rate == 0.025
        assert TrainConfig(algorithm="glove").effective_learning_rate == 0.05

    @pytest.mark.parametrize("kwargs", [
        {"algorithm": "lda"},
        {"dim": 0},
        {"window": 0},
        {"downsample_d": 0.0},
        {"downsample_d": 1.5},
        {"negatives": 0},
        {"learning_rate": -0.1},
        {"precision": "float16"},
        {"cooccur_weighting": "triangular"},
        {"workers": 0},
    ])
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            TrainConfig(**kwargs)

    def test_from_dict_rejects_unknown_keys(self):
        with pytest.raises(ValueError, match="unknown"):
            TrainConfig.from_dict({"dim": 5, "turbo": True})


class TestSubsampleProbability:
    def test_at_threshold(self):
        assert subsample_probability(0.0039, 0.0039) == 0.0

    def test_quarter_ratio(self):
        assert subsample_probability(4 * 0.0039, 0.0039) == pytest.approx(
            0.5, abs=1e-15)

    def test_stated_threshold_value(self):
        assert subsample_probability(0.0156, 0.0039) == pytest.approx(
            0.5, abs=1e-12)

    def test_below_threshold_clamps_to_zero(self):
        assert subsample_probability(0.001, 0.0039) == 0.0

    def test_closed_form_grid(self):
        for d in (0.001, 0.0039, 0.05, 0.5, 1.0):
            for f in (0.0005, 0.001, 0.01, 0.2, 0.7, 1.0):
                expected = max(0.0, 1.0 - math.sqrt(d / f))
                assert subsample_probability(f, d) == pytest.approx(
                    expected, abs=1e-12)

    @pytest.mark.parametrize("f,d", [(0.0, 0.1), (-0.1, 0.1), (0.5, 0.0),
                                     (1.5, 0.1), (0.5, 1.5)])
    def test_argument_errors(self, f, d):
        with pytest.raises(ValueError):
            subsample_probability(f, d)


class TestBuildCooccurrence:
    def test_flat_pair(self):
        vocab = Vocabulary({"a": 1, "b": 1})
        table = build_cooccurrence([["a", "b"]], vocab, 10, "flat")
        assert table.get(vocab.id_of("a"), vocab.id_of("b")) == 1.0
        assert table.get(vocab.id_of("b"), vocab.id_of("a")) == 1.0

    def test_inverse_distance(self):
        vocab = Vocabulary({"a": 1, "b": 1, "c": 1})
        table = build_cooccurrence([["a", "b", "c"]], vocab, 10,
                                   "inverse_distance")
        assert table.get(vocab.id_of("a"), vocab.id_of("c")) == 0.5

    def test_empty_corpus(self):
        assert len(build_cooccurrence([], Vocabulary({"a": 1}), 5)) == 0

    def test_window_limits_pairs(self):
        vocab = Vocabulary({"a": 1, "b": 1, "c": 1})
        table = build_cooccurrence([["a", "b", "c"]], vocab, 1, "flat")
        assert table.get(vocab.id_of("a"), vocab.id_of("c")) == 0.0

    def test_unknown_tokens_occupy_positions(self):
        vocab = Vocabulary({"a": 1, "c": 1})
        table = build_cooccurrence([["a", "unknown", "c"]], vocab, 10,
                                   "inverse_distance")
        assert table.get(vocab.id_of("a"), vocab.id_of("c")) == 0.5

    def test_windows_do_not_cross_sentences(self):
        vocab = Vocabulary({"a": 1, "b": 1})
        table = build_cooccurrence([["a"], ["b"]], vocab, 10, "flat")
        assert len(table) == 0


class TestSkipgramStep:
    def test_zero_init_loss_is_log2_per_row(self):
        vocab = Vocabulary({t: 1 for t in "abcdefg"})
        model = EmbeddingMatrix(vocab, np.zeros((7, 4)), np.zeros((7, 4)))
        loss = skipgram_step(model, 0, 1, [2, 3, 4], 0.01)
        assert loss == pytest.approx(4 * math.log(2), abs=1e-12)

    def test_negatives_must_exclude_context(self):
        vocab = Vocabulary({t: 1 for t in "abc"})
        model = EmbeddingMatrix(vocab, np.zeros((3, 2)), np.zeros((3, 2)))
        with pytest.raises(ValueError):
            skipgram_step(model, 0, 1, [1], 0.01)

    def test_repeated_steps_strictly_decrease_loss(self):
        rng = np.random.default_rng(5)
        vocab = Vocabulary({f"t{i}": 1 for i in range(10)})
        model = EmbeddingMatrix(vocab,
                                rng.normal(scale=0.3, size=(10, 8)),
                                rng.normal(scale=0.3, size=(10, 8)))
        losses = [skipgram_step(model, 0, 1, [2, 3, 4], 0.1)
                  for _ in range(40)]
        assert all(b < a for a, b in zip(losses, losses[1:]))

    def test_updates_stay_finite(self):
        rng = np.random.default_rng(6)
        vocab = Vocabulary({f"t{i}": 1 for i in range(5)})
        model = EmbeddingMatrix(vocab,
                                rng.normal(size=(5, 3)).astype(np.float32),
                                rng.normal(size=(5, 3)).astype(np.float32))
        for _ in range(100):
            skipgram_step(model, 0, 1, [2, 2, 3], 0.5)
        model.check_finite()

    def test_gradient_at_zero_output_matrix(self):
        # with all-zero context rows every score is 0, so the context row
        # gradient is (sigmoid(0) - 1) * v and each noise row's is 0.5 * v
        rng = np.random.default_rng(4)
        v = rng.normal(size=6)
        u = np.zeros((3, 6))
        _, _, grad_u = skipgram_gradients(v, u)
        np.testing.assert_allclose(grad_u[0], -0.5 * v, atol=1e-12)
        np.testing.assert_allclose(grad_u[1], 0.5 * v, atol=1e-12)

    def test_loss_matches_direct_formula(self):
        rng = np.random.default_rng(11)
        v = rng.normal(size=4)
        u = rng.normal(size=(3, 4))
        def sig(x):
            return 1.0 / (1.0 + math.exp(-x))
        expected = -math.log(sig(float(u[0] @ v)))
        for row in u[1:]:
            expected -= math.log(sig(-float(row @ v)))
        assert skipgram_loss(v, u) == pytest.approx(expected, rel=1e-12)


class TestTrainSkipgram:
    def config(self, **kw):
        base = dict(algorithm="skipgram", dim=8, window=3, epochs=3,
                    negatives=2, seed=11)
        base.update(kw)
        return TrainConfig(**base)

    def test_epochs_zero_returns_seeded_init(self, corpus7, vocab7):
        config = self.config(epochs=0)
        out = train_skipgram(corpus7, vocab7, config)
        init = skipgram_initial_matrix(vocab7, config)
        assert np.array_equal(out.input_vectors, init.input_vectors)
        assert np.array_equal(out.output_vectors, init.output_vectors)
        assert np.all(out.output_vectors == 0.0)
        assert np.abs(out.input_vectors).max() <= 0.5 / config.dim

    def test_identical_seeds_are_bit_identical(self, corpus7, vocab7):
        m1 = train_skipgram(corpus7, vocab7, self.config())
        m2 = train_skipgram(corpus7, vocab7, self.config())
        assert np.array_equal(m1.input_vectors, m2.input_vectors)
        assert np.array_equal(m1.output_vectors, m2.output_vectors)

    def test_different_seeds_differ(self, corpus7, vocab7):
        m1 = train_skipgram(corpus7, vocab7, self.config(seed=1))
        m2 = train_skipgram(corpus7, vocab7, self.config(seed=2))
        assert not np.array_equal(m1.input_vectors, m2.input_vectors)

    def test_target_positions_conserved(self, corpus7, vocab7):
        stats = TrainStats()
        config = self.config(epochs=4, downsample_d=0.01)  # heavy dropping
        train_skipgram(corpus7, vocab7, config, stats=stats)
        tokens = sum(len(s) for s in corpus7)
        assert stats.target_positions == 4 * tokens

    def test_empty_vocabulary_rejected(self):
        with pytest.raises(ValueError):
            train_skipgram([], Vocabulary({}), self.config())

    def test_tiny_vocabulary_rejected(self):
        vocab = Vocabulary({"a": 1, "b": 1})
        with pytest.raises(ValueError, match="too small"):
            train_skipgram([["a", "b"]], vocab, self.config(negatives=5))

    def test_unknown_corpus_token_rejected(self, vocab7):
        with pytest.raises(UnknownTermError):
            train_skipgram([["a", "zz"]], vocab7, self.config())

    def test_adjacent_tokens_align(self):
        rng = np.random.default_rng(3)
        sentences = []
        for _ in range(300):
            filler = f"x{rng.integers(0, 30)}"
            sentences.append(["a", "b", filler])
        vocab = Vocabulary.from_corpus(sentences, 1)
        config = TrainConfig(algorithm="skipgram", dim=16, window=2,
                             epochs=10, negatives=3, seed=2)
        matrix = train_skipgram(sentences, vocab, config)
        vecs = matrix.term_vectors("input")

        def cos(x, y):
            return float(x @ y / (np.linalg.norm(x) * np.linalg.norm(y)))

        va = vecs[vocab.id_of("a")]
        vb = vecs[vocab.id_of("b")]
        vx = vecs[vocab.id_of("x7")]
        assert cos(va, vb) > cos(va, vx)

    def test_hogwild_mode_runs_and_stays_finite(self, corpus7, vocab7):
        config = self.config(deterministic=False, workers=2)
        matrix = train_skipgram(corpus7, vocab7, config)
        matrix.check_finite()


class TestGloveWeight:
    def test_cap_and_continuity(self):
        assert glove_weight(100.0, 100.0, 0.75) == 1.0
        assert glove_weight(150.0, 100.0, 0.75) == 1.0
        below = glove_weight(100.0 - 1e-9, 100.0, 0.75)
        assert below == pytest.approx(1.0, abs=1e-10)

    def test_power_law_below_cap(self):
        assert glove_weight(25.0, 100.0, 0.75) == pytest.approx(
            0.25 ** 0.75, abs=1e-15)


class TestTrainGlove:
    def config(self, **kw):
        base = dict(algorithm="glove", dim=4, epochs=50, seed=9)
        base.update(kw)
        return TrainConfig(**base)

    def test_empty_table_rejected(self, vocab7):
        with pytest.raises(ValueError):
            train_glove(CooccurrenceTable({}), vocab7, self.config())

    def test_single_entry_converges_to_log_x(self):
        vocab = Vocabulary({"a": 1, "b": 1})
        table = CooccurrenceTable({(0, 1): math.e})
        config = self.config(dim=1, epochs=2000, precision="float64")
        m = train_glove(table, vocab, config)
        fit = float(m.input_vectors[0] @ m.output_vectors[1]
                    + m.input_bias[0] + m.output_bias[1])
        assert fit == pytest.approx(1.0, abs=1e-3)

    def test_loss_decreases_from_initialization(self, corpus7, vocab7):
        table = build_cooccurrence(corpus7, vocab7, 3)
        config = self.config()
        init_loss = glove_total_loss(table, glove_initial_matrix(vocab7, config),
                                     config.x_max, config.alpha_weight)
        trained = train_glove(table, vocab7, config)
        final_loss = glove_total_loss(table, trained, config.x_max,
                                      config.alpha_weight)
        assert final_loss < init_loss

    def test_identical_seeds_are_bit_identical(self, corpus7, vocab7):
        table = build_cooccurrence(corpus7, vocab7, 3)
        m1 = train_glove(table, vocab7, self.config())
        m2 = train_glove(table, vocab7, self.config())
        assert np.array_equal(m1.input_vectors, m2.input_vectors)
        assert np.array_equal(m1.output_bias, m2.output_bias)

    def test_epochs_zero_returns_seeded_init(self, vocab7):
        table = CooccurrenceTable({(0, 1): 2.0})
        config = self.config(epochs=0)
        m = train_glove(table, vocab7, config)
        init = glove_initial_matrix(vocab7, config)
        assert np.array_equal(m.input_vectors, init.input_vectors)


class TestGradientCheck:
    def test_skipgram_under_tolerance(self):
        report = gradient_check("skipgram", trial_count=30, seed=7)
        assert report.max_rel_error < 1e-4

    def test_glove_under_tolerance(self):
        report = gradient_check("glove", trial_count=30, seed=7)
        assert report.max_rel_error < 1e-4

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            gradient_check("word2vec")


class TestEq2Statistics:
    def test_empirical_context_drop_rate(self):
        # four equally frequent terms with d = f/4, so every context
        # survives a fair coin: p = 1 - sqrt(1/4) = 0.5; each two-token
        # sentence contributes exactly two (target, context) pairs
        n = 20_000
        corpus = [["a", "b"] if k % 2 == 0 else ["c", "d"] for k in range(n)]
        vocab = Vocabulary.from_corpus(corpus, 1)
        config = TrainConfig(algorithm="skipgram", dim=2, window=2, epochs=1,
                             negatives=1, seed=123, downsample_d=0.0625,
                             min_count=1)
        stats = TrainStats()
        train_skipgram(corpus, vocab, config, stats=stats)
        assert stats.target_positions == 2 * n
        drop_rate = 1.0 - stats.steps / (2 * n)
        assert drop_rate == pytest.approx(0.5, abs=0.02)
