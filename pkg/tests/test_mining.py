import math
import random

import pytest

from moralframe.foundations import MoralFoundation, PipelineConfig
from moralframe.index import build_topic_queries, retrieve
from moralframe.mining import (
    DEFAULT_CLAIM_WEIGHTS,
    DEFAULT_EVIDENCE_WEIGHTS,
    DISCOURSE_CONNECTIVES,
    FeatureWeights,
    MiningConfig,
    Stance,
    extract_claim_span,
    load_mining_config,
    score_argumentativeness,
    score_stance,
    select_units,
    sentence_features,
)
from moralframe.morals import LexiconMoralScorer, filter_by_target_morals

from .conftest import make_sentence
from .oracles import logistic as oracle_logistic

CLAIMISH = dict(sentiment=["terrible"], causality=["because"])


def claimish_sentence():
    return make_sentence(
        "Globalization is terrible because it cheats workers badly.", **CLAIMISH
    )


class TestArgumentativeness:
    def test_claim_likelihood_for_full_claim_pattern(self):
        # Oracle first: closed-form logistic over the published default weights.
        # Active features: topic, causality, sentiment, length. z = -3 + 2.2 + 1.4 + 0.8 + 0.6
        expected = oracle_logistic(2.0)
        sentence = claimish_sentence()
        claim, _, _ = score_argumentativeness(sentence, ("globalization",))
        assert claim == pytest.approx(expected, abs=1e-12)
        assert round(claim, 2) == 0.88

    def test_all_features_false_hits_bias(self):
        expected = oracle_logistic(-3.0)  # ~0.047
        # Four tokens: even the length feature is off.
        sentence = make_sentence("Plain short words here.")
        claim, _, _ = score_argumentativeness(sentence, ("missing",))
        assert claim == pytest.approx(expected, abs=1e-12)
        assert claim == pytest.approx(0.047, abs=5e-4)

    def test_evidence_likelihood_for_cue_pattern(self):
        # topic + evidence cue + length: z = -3 + 1.8 + 2.4 + 0.8 = 2.0
        sentence = make_sentence("Surveys show globalization cheats workers badly.")
        _, evidence, _ = score_argumentativeness(sentence, ("globalization",))
        assert evidence == pytest.approx(oracle_logistic(2.0), abs=1e-12)

    def test_true_positive_feature_never_lowers_likelihood(self):
        base = make_sentence("Globalization moves jobs around the planet now.")
        with_marker = make_sentence(
            "Globalization moves jobs around the planet now.", causality=["moves"]
        )
        for weights in (DEFAULT_CLAIM_WEIGHTS, DEFAULT_EVIDENCE_WEIGHTS):
            assert weights.causality > 0
            config = MiningConfig(claim_weights=weights, evidence_weights=weights)
            lo, _, _ = score_argumentativeness(base, ("globalization",), config)
            hi, _, _ = score_argumentativeness(with_marker, ("globalization",), config)
            assert hi >= lo

    def test_features_computed_from_sentence(self):
        sentence = claimish_sentence()
        features = sentence_features(sentence, ("globalization",))
        assert features == {
            "topic": True, "causality": True, "sentiment": True,
            "evidence": False, "length": True, "connective": False,
        }

    def test_deterministic(self):
        sentence = claimish_sentence()
        assert score_argumentativeness(sentence, ("globalization",)) == score_argumentativeness(
            sentence, ("globalization",)
        )


class TestClaimSpan:
    def test_starts_at_first_topic_token(self):
        sentence = make_sentence("Many say globalization cheats workers badly.")
        span = extract_claim_span(sentence, ("globalization",))
        assert span == (2, len(sentence.tokens))
        assert sentence.span_text(*span) == "globalization cheats workers badly"

    def test_leading_connectives_trimmed(self):
        sentence = make_sentence("However, therefore nothing topical appears here.")
        span = extract_claim_span(sentence, ("missing",))
        assert sentence.tokens[span[0]] not in DISCOURSE_CONNECTIVES

    def test_span_never_empty(self):
        sentence = make_sentence("However and so.")
        start, end = extract_claim_span(sentence, ("missing",))
        assert start < end == len(sentence.tokens)


class TestStance:
    def test_hand_computed_negative(self):
        # -0.8 over a 4-token span = -0.2
        sentence = make_sentence("Globalization is a threat.")
        assert score_stance(sentence, {"threat": -0.8}) == pytest.approx(-0.2)

    def test_polarity_free_span_is_zero(self):
        sentence = make_sentence("Globalization moves jobs around.")
        assert score_stance(sentence, {"threat": -0.8}) == 0.0

    def test_negation_flips_sign(self):
        sentence = make_sentence("Uniforms are not harmful today.")
        score = score_stance(sentence, {"harmful": -0.7})
        assert score == pytest.approx(0.7 / 5)

    def test_negation_window_is_three_tokens(self):
        far = make_sentence("Not every single policy is harmful.")
        # "not" sits 5 tokens before "harmful": no flip.
        assert score_stance(far, {"harmful": -0.7}) < 0

    def test_clipped_to_unit_interval(self):
        sentence = make_sentence("Bad bad bad.")
        assert score_stance(sentence, {"bad": -1.0}) == -1.0

    def test_antisymmetric_under_weight_negation(self):
        rng = random.Random(11)
        words = ["alpha", "beta", "gamma", "delta"]
        for _ in range(30):
            text = " ".join(rng.choice(words + ["not", "filler"]) for _ in range(8)) + "."
            sentence = make_sentence(text.capitalize())
            polarity = {w: round(rng.uniform(-1, 1), 3) for w in words}
            flipped = {w: -v for w, v in polarity.items()}
            assert score_stance(sentence, polarity) == pytest.approx(
                -score_stance(sentence, flipped)
            )

    def test_claim_units_score_their_span(self):
        sentence = make_sentence("Critics claim globalization is a threat.")
        span = extract_claim_span(sentence, ("globalization",))
        whole = score_stance(sentence, {"threat": -0.8})
        on_span = score_stance(sentence, {"threat": -0.8}, span)
        assert on_span == pytest.approx(-0.8 / 4)
        assert abs(on_span) > abs(whole)


class TestWeightConfig:
    def test_ini_roundtrip(self):
        text = """
[claim_weights]
bias = -2.0
topic = 1.0
causality = 0.5
sentiment = 0.25
evidence = 0.0
length = 0.1
connective = 0.0

[polarity_lexicon]
threat = -0.8
helpful = 0.5
"""
        config = load_mining_config(text)
        assert config.claim_weights.bias == -2.0
        assert config.claim_weights.topic == 1.0
        assert config.evidence_weights == DEFAULT_EVIDENCE_WEIGHTS
        assert config.polarity == {"threat": -0.8, "helpful": 0.5}

    def test_polarity_range_enforced(self):
        with pytest.raises(ValueError):
            load_mining_config("[polarity_lexicon]\nthreat = -1.5\n")


def lexicon_scorer():
    from moralframe.foundations import load_moral_lexicon

    return LexiconMoralScorer(
        load_moral_lexicon(
            "\n".join(
                [
                    "cheats,fairness,1.0", "unfair,fairness,1.0", "injustice,fairness,1.0",
                    "rights,fairness,1.0", "obedience,authority,1.0", "tradition,authority,1.0",
                    "discipline,authority,1.0", "order,authority,1.0",
                ]
            )
        )
    )


class TestSelectUnits:
    CONFIG = PipelineConfig()

    def _mining(self):
        return MiningConfig(polarity={"terrible": -0.8, "great": 0.8, "cheats": -0.6})

    def test_moral_filter_precedes_likelihoods(self):
        # Authority-dense sentence under an individualizing target: dropped
        # even though its claim likelihood clears the threshold.
        sentence = make_sentence(
            "Uniforms demand obedience because tradition, discipline and order are terrible.",
            **CLAIMISH,
        )
        units = select_units(
            [sentence], ("uniforms",), Stance.CON,
            frozenset({MoralFoundation.CARE, MoralFoundation.FAIRNESS}),
            lexicon_scorer(), self.CONFIG, self._mining(),
        )
        assert units == []

    def test_claim_below_threshold_excluded(self):
        # Custom weights pin the likelihoods at 0.79 and 0.30 exactly.
        claim_bias = math.log(0.79 / 0.21)
        evidence_bias = math.log(0.30 / 0.70)
        mining = MiningConfig(
            claim_weights=FeatureWeights(claim_bias, 0, 0, 0, 0, 0, 0),
            evidence_weights=FeatureWeights(evidence_bias, 0, 0, 0, 0, 0, 0),
            polarity={"terrible": -0.8},
        )
        sentence = make_sentence(
            "Globalization is terrible because it cheats workers badly.", **CLAIMISH
        )
        claim, evidence, _ = score_argumentativeness(sentence, ("globalization",), mining)
        assert round(claim, 2) == 0.79 and round(evidence, 2) == 0.30
        units = select_units(
            [sentence], ("globalization",), Stance.CON, None,
            lexicon_scorer(), self.CONFIG, mining,
        )
        assert units == []

    def test_claim_takes_precedence_over_evidence(self):
        sentence = make_sentence(
            "Surveys show globalization is terrible because it cheats workers.",
            **CLAIMISH,
        )
        mining = MiningConfig(
            claim_weights=FeatureWeights(2.0, 0, 0, 0, 0, 0, 0),
            evidence_weights=FeatureWeights(2.0, 0, 0, 0, 0, 0, 0),
            polarity={"terrible": -0.8},
        )
        units = select_units(
            [sentence], ("globalization",), Stance.CON, None,
            lexicon_scorer(), self.CONFIG, mining,
        )
        assert len(units) == 1 and units[0].kind == "claim"
        assert units[0].claim_span is not None

    def test_neutral_stance_dropped(self):
        sentence = make_sentence(
            "Globalization is large because trade moved everywhere recently.",
            causality=["because"], sentiment=["large"],
        )
        for stance in (Stance.PRO, Stance.CON):
            assert (
                select_units(
                    [sentence], ("globalization",), stance, None,
                    lexicon_scorer(), self.CONFIG, MiningConfig(polarity={}),
                )
                == []
            )

    def test_stance_partition_disjoint(self, fixture_index, scorer, mining_config):
        query = build_topic_queries("globalization", fixture_index.config)[0]
        sentences = retrieve(fixture_index, query)
        pro = select_units(sentences, ("globalization",), Stance.PRO, None,
                           scorer, fixture_index.config, mining_config)
        con = select_units(sentences, ("globalization",), Stance.CON, None,
                           scorer, fixture_index.config, mining_config)
        assert {u.sentence.id for u in pro}.isdisjoint({u.sentence.id for u in con})

    def test_raising_thresholds_shrinks_output(self, fixture_index, scorer, mining_config):
        query = build_topic_queries("immigration", fixture_index.config)[0]
        sentences = retrieve(fixture_index, query)
        base = PipelineConfig()
        stricter = PipelineConfig(claim_threshold=0.9, evidence_threshold=0.9)
        loose = {
            u.sentence.id
            for u in select_units(sentences, ("immigration",), Stance.CON, None,
                                  scorer, base, mining_config)
        }
        tight = {
            u.sentence.id
            for u in select_units(sentences, ("immigration",), Stance.CON, None,
                                  scorer, stricter, mining_config)
        }
        assert tight <= loose

    def test_matches_predicate_composition_oracle(self, fixture_index, scorer, mining_config):
        """Brute-force re-application of the four predicates over 20 sentences."""
        config = fixture_index.config
        topic = ("globalization",)
        query = build_topic_queries("globalization", config)[0]
        sentences = retrieve(fixture_index, query)[:20]
        target = frozenset({MoralFoundation.LOYALTY, MoralFoundation.AUTHORITY,
                            MoralFoundation.PURITY})

        expected_ids = []
        for s in sentences:
            profile = scorer.score(s)
            morals = {f for f in MoralFoundation if profile.score(f) > 0.5}
            if not (morals and morals <= target):
                continue
            features = {
                "topic": all(t in s.tokens for t in topic),
                "causality": bool(s.markers.causality_positions),
                "sentiment": bool(s.markers.sentiment_positions),
                "evidence": bool(s.markers.evidence_cue_positions),
                "length": config.min_len <= len(s.tokens) <= config.max_len,
                "connective": s.tokens[0] in DISCOURSE_CONNECTIVES,
            }
            z_claim = mining_config.claim_weights.bias + sum(
                getattr(mining_config.claim_weights, k) for k, v in features.items() if v
            )
            z_evidence = mining_config.evidence_weights.bias + sum(
                getattr(mining_config.evidence_weights, k) for k, v in features.items() if v
            )
            if oracle_logistic(z_claim) > config.claim_threshold:
                kind = "claim"
            elif oracle_logistic(z_evidence) > config.evidence_threshold:
                kind = "evidence"
            else:
                continue
            span = extract_claim_span(s, topic) if kind == "claim" else None
            stance_value = score_stance(s, mining_config.polarity, span)
            if stance_value < 0:
                expected_ids.append(s.id)

        got = select_units(sentences, topic, Stance.CON, target, scorer, config, mining_config)
        assert [u.sentence.id for u in got] == expected_ids

    def test_output_units_satisfy_invariants(self, fixture_index, scorer, mining_config):
        config = fixture_index.config
        query = build_topic_queries("vaccination", config)[0]
        sentences = retrieve(fixture_index, query)
        units = select_units(sentences, ("vaccination",), Stance.PRO, None,
                             scorer, config, mining_config)
        assert units, "fixture corpus should yield pro units"
        for unit in units:
            if unit.kind == "claim":
                assert unit.claim_likelihood > config.claim_threshold
                assert unit.claim_span is not None
                start, end = unit.claim_span
                assert 0 <= start < end <= len(unit.sentence.tokens)
            else:
                assert unit.evidence_likelihood > config.evidence_threshold
            assert unit.stance_score > 0
            assert filter_by_target_morals(unit.morals, None)

    def test_preserves_retrieval_order(self, fixture_index, scorer, mining_config):
        config = fixture_index.config
        query = build_topic_queries("recycling", config)[0]
        sentences = retrieve(fixture_index, query)
        units = select_units(sentences, ("recycling",), Stance.CON, None,
                             scorer, config, mining_config)
        positions = {s.id: i for i, s in enumerate(sentences)}
        order = [positions[u.sentence.id] for u in units]
        assert order == sorted(order)
