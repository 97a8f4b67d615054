import random

import pytest

from moralframe.foundations import FOUNDATIONS, Framing, MoralFoundation
from moralframe.evaluation import (
    FramingRankSummary,
    RankingRecord,
    cohens_kappa,
    framing_moral_distribution,
    kendalls_w,
    mean_rank,
    multilabel_prf,
    rank_stats,
    relation_for,
    student_t_test,
)

from .oracles import confusion_counts

CARE = MoralFoundation.CARE
FAIRNESS = MoralFoundation.FAIRNESS


def random_label_sets(rng: random.Random, n: int) -> list[set]:
    return [
        {f for f in FOUNDATIONS if rng.random() < 0.4}
        for _ in range(n)
    ]


class TestMultilabelPRF:
    def test_perfect_prediction_all_ones(self):
        gold = [{CARE}, {FAIRNESS, CARE}, set()]
        report = multilabel_prf(gold, gold)
        for f in (CARE, FAIRNESS):
            prf = report.per_foundation[f]
            assert (prf.precision, prf.recall, prf.f1) == (1.0, 1.0, 1.0)
        assert report.macro.f1 <= 1.0  # absent foundations score 0 under the 0/0 rule

    def test_hand_enumerated_confusion(self):
        gold = [{CARE}, {FAIRNESS}]
        pred = [{CARE, FAIRNESS}, {FAIRNESS}]
        report = multilabel_prf(gold, pred)
        fairness = report.per_foundation[FAIRNESS]
        assert fairness.precision == pytest.approx(0.5)
        assert fairness.recall == pytest.approx(1.0)
        assert fairness.f1 == pytest.approx(2 / 3)
        care = report.per_foundation[CARE]
        assert (care.precision, care.recall, care.f1) == (1.0, 1.0, 1.0)

    def test_matches_brute_force_oracle_on_random_instances(self):
        rng = random.Random(100)
        for _ in range(100):
            n = rng.randint(1, 50)
            gold = random_label_sets(rng, n)
            pred = random_label_sets(rng, n)
            report = multilabel_prf(gold, pred)
            expected = confusion_counts(gold, pred)
            for f in FOUNDATIONS:
                counts = report.counts[f]
                assert (counts.tp, counts.fp, counts.fn, counts.tn) == (
                    expected[f]["tp"], expected[f]["fp"], expected[f]["fn"], expected[f]["tn"],
                )
                prf = report.per_foundation[f]
                assert prf.precision == expected[f]["precision"]
                assert prf.recall == expected[f]["recall"]
                assert prf.f1 == expected[f]["f1"]

    def test_macro_is_unweighted_mean(self):
        rng = random.Random(7)
        gold, pred = random_label_sets(rng, 30), random_label_sets(rng, 30)
        report = multilabel_prf(gold, pred)
        assert report.macro.f1 == pytest.approx(
            sum(report.per_foundation[f].f1 for f in FOUNDATIONS) / 5, abs=1e-15
        )

    def test_zero_denominator_convention(self):
        report = multilabel_prf([set()], [set()])
        for f in FOUNDATIONS:
            prf = report.per_foundation[f]
            assert (prf.precision, prf.recall, prf.f1) == (0.0, 0.0, 0.0)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            multilabel_prf([set()], [set(), set()])

    def test_counts_total_to_example_count(self):
        rng = random.Random(5)
        gold, pred = random_label_sets(rng, 23), random_label_sets(rng, 23)
        report = multilabel_prf(gold, pred)
        for f in FOUNDATIONS:
            assert report.counts[f].total() == 23


class TestCohensKappa:
    def test_identical_vectors(self):
        labels = [True, False, True, True, False]
        assert cohens_kappa(labels, labels) == 1.0

    def test_hand_computed_counts(self):
        # (both-yes 20, a-only 5, b-only 10, both-no 15): p_o=0.7, p_e=0.5
        a = [True] * 20 + [True] * 5 + [False] * 10 + [False] * 15
        b = [True] * 20 + [False] * 5 + [True] * 10 + [False] * 15
        assert cohens_kappa(a, b) == pytest.approx(0.4, abs=1e-12)

    def test_independent_labelers_near_zero(self):
        rng = random.Random(42)
        n = 20_000
        a = [rng.random() < 0.5 for _ in range(n)]
        b = [rng.random() < 0.5 for _ in range(n)]
        assert abs(cohens_kappa(a, b)) < 0.03

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            cohens_kappa([], [])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            cohens_kappa([True], [True, False])

    def test_degenerate_perfect_marginals(self):
        assert cohens_kappa([True, True], [True, True]) == 1.0

    def test_in_range_on_random_inputs(self):
        rng = random.Random(9)
        for _ in range(200):
            n = rng.randint(1, 30)
            a = [rng.random() < 0.6 for _ in range(n)]
            b = [rng.random() < 0.3 for _ in range(n)]
            try:
                kappa = cohens_kappa(a, b)
            except ValueError:
                continue
            assert -1.0 <= kappa <= 1.0


class TestKendallsW:
    def test_identical_rows(self):
        assert kendalls_w([(1, 2, 3)] * 4 ) == 1.0

    def test_perfect_reversal_pair(self):
        assert kendalls_w([(1, 2, 3), (3, 2, 1)]) == 0.0

    def test_direct_formula_case(self):
        # S = 14, W = 12*14 / (9 * 24) = 168/216
        assert kendalls_w([(1, 2, 3), (1, 2, 3), (2, 1, 3)]) == pytest.approx(
            168 / 216, abs=1e-12
        )

    def test_rejects_ties(self):
        with pytest.raises(ValueError, match="permutation"):
            kendalls_w([(1, 1, 2)])

    def test_rejects_ragged_rows(self):
        with pytest.raises(ValueError):
            kendalls_w([(1, 2, 3), (1, 2)])

    def test_in_unit_interval_on_random_permutations(self):
        rng = random.Random(17)
        for _ in range(100):
            n = rng.randint(2, 6)
            m = rng.randint(1, 8)
            rows = []
            for _ in range(m):
                row = list(range(1, n + 1))
                rng.shuffle(row)
                rows.append(tuple(row))
            assert 0.0 <= kendalls_w(rows) <= 1.0 + 1e-12


class TestMeanRank:
    @pytest.mark.parametrize(
        "distribution,expected",
        [
            ((0.45, 0.38, 0.17), 1.72),
            ((0.24, 0.32, 0.44), 2.20),
            ((0.31, 0.30, 0.39), 2.08),
            ((0.40, 0.40, 0.20), 1.80),
            ((0.50, 0.37, 0.13), 1.63),
            ((0.23, 0.37, 0.40), 2.17),
            ((0.25, 0.27, 0.48), 2.23),
            ((0.37, 0.23, 0.40), 2.03),
        ],
    )
    def test_published_distributions(self, distribution, expected):
        assert round(mean_rank(distribution), 2) == expected

    def test_all_rank_one(self):
        assert mean_rank((1.0, 0.0, 0.0)) == 1.0

    def test_rejects_non_distribution(self):
        with pytest.raises(ValueError):
            mean_rank((0.5, 0.2, 0.2))


class TestRelationRule:
    def test_agreeing_pro_stance_is_empowering(self):
        assert relation_for("pro", 5) == "empowering"
        assert relation_for("pro", 4) == "empowering"

    def test_agreeing_con_stance_is_empowering(self):
        assert relation_for("con", 1) == "empowering"
        assert relation_for("con", 2) == "empowering"

    def test_disagreement_is_challenging(self):
        assert relation_for("pro", 1) == "challenging"
        assert relation_for("con", 5) == "challenging"

    def test_undecided_always_challenging(self):
        assert relation_for("pro", 3) == "challenging"
        assert relation_for("con", 3) == "challenging"

    def test_range_validated(self):
        with pytest.raises(ValueError):
            relation_for("pro", 6)


def record(participant, ideology, topic, stance, own, b, i, u):
    return RankingRecord(
        participant=participant,
        ideology=ideology,
        topic=topic,
        stance_presented=stance,
        participant_stance=own,
        ranks={Framing.BINDING: b, Framing.INDIVIDUALIZING: i, Framing.UNCONTROLLED: u},
    )


class TestRankingRecord:
    def test_non_permutation_rejected(self):
        with pytest.raises(ValueError, match="permutation"):
            record("p", "liberal", "t", "pro", 4, 1, 1, 2)

    def test_unknown_ideology_rejected(self):
        with pytest.raises(ValueError):
            record("p", "centrist", "t", "pro", 4, 1, 2, 3)

    def test_relation_derived(self):
        assert record("p", "liberal", "t", "pro", 5, 1, 2, 3).relation == "empowering"
        assert record("p", "liberal", "t", "pro", 3, 1, 2, 3).relation == "challenging"


class TestRankStats:
    def _records(self):
        rows = []
        rng = random.Random(23)
        for k in range(12):
            ranks = [1, 2, 3]
            rng.shuffle(ranks)
            rows.append(
                record(
                    f"p{k % 4}",
                    "liberal" if k % 2 == 0 else "conservative",
                    f"topic-{k % 3}",
                    "pro" if k % 2 == 0 else "con",
                    rng.randint(1, 5),
                    *ranks,
                )
            )
        return rows

    def test_unanimous_first_place(self):
        rows = [record(f"p{i}", "liberal", "t", "pro", 4, 2, 1, 3) for i in range(5)]
        stats = rank_stats(rows)["all"]
        summary = stats.per_framing[Framing.INDIVIDUALIZING]
        assert summary.distribution == (1.0, 0.0, 0.0)
        assert summary.mean_rank == 1.0

    def test_mean_equals_dot_product_of_own_distribution(self):
        stats = rank_stats(self._records())["all"]
        for summary in stats.per_framing.values():
            p1, p2, p3 = summary.distribution
            assert summary.mean_rank == pytest.approx(p1 + 2 * p2 + 3 * p3, abs=1e-9)

    def test_grouping_by_ideology_and_relation(self):
        stats = rank_stats(self._records(), by_ideology=True, by_relation=True)
        assert "all" in stats
        assert "liberal" in stats and "conservative" in stats
        assert any("/" in key for key in stats)

    def test_group_records_partition(self):
        records = self._records()
        stats = rank_stats(records, by_ideology=True)
        liberal = stats["liberal"].per_framing[Framing.BINDING].count
        conservative = stats["conservative"].per_framing[Framing.BINDING].count
        assert liberal + conservative == stats["all"].per_framing[Framing.BINDING].count

    def test_empty_group_warns_and_omitted(self):
        rows = [record(f"p{i}", "liberal", "t", "pro", 4, 1, 2, 3) for i in range(3)]
        with pytest.warns(UserWarning, match="conservative"):
            stats = rank_stats(rows, by_ideology=True)
        assert "conservative" not in stats

    def test_identical_samples_not_spuriously_significant(self):
        # Every participant gives the same permutation, so each framing's rank
        # sample is constant.
        rows = [record(f"p{i}", "liberal", "t", "pro", 4, 1, 2, 3) for i in range(4)]
        stats = rank_stats(rows)["all"]
        for comparison in stats.comparisons:
            if comparison.framing_a == Framing.BINDING and comparison.framing_b == Framing.INDIVIDUALIZING:
                # constant samples 1 vs 2: zero variance, nonzero difference
                assert comparison.note == "zero variance"
        summary = stats.per_framing[Framing.BINDING]
        assert summary.mean_rank == 1.0

    def test_empty_records_rejected(self):
        with pytest.raises(ValueError):
            rank_stats([])


class TestStudentT:
    def test_identical_samples(self):
        diff, t, p, lo, hi, note = student_t_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert diff == 0.0 and p == pytest.approx(1.0)

    def test_zero_variance_identical(self):
        diff, t, p, lo, hi, note = student_t_test([2.0, 2.0], [2.0, 2.0])
        assert (diff, t, p) == (0.0, 0.0, 1.0)
        assert "zero variance" in note

    def test_known_value_against_scipy(self):
        from scipy import stats as sps

        a = [1.0, 2.0, 3.0, 4.0]
        b = [2.0, 4.0, 4.0, 6.0]
        diff, t, p, lo, hi, note = student_t_test(a, b)
        expected = sps.ttest_ind(a, b, equal_var=True)
        assert t == pytest.approx(expected.statistic)
        assert p == pytest.approx(expected.pvalue)
        assert lo < diff < hi

    def test_ci_contains_difference(self):
        rng = random.Random(31)
        for _ in range(20):
            a = [rng.gauss(0, 1) for _ in range(8)]
            b = [rng.gauss(0.5, 1) for _ in range(9)]
            diff, t, p, lo, hi, note = student_t_test(a, b)
            assert lo <= diff <= hi
            assert 0.0 <= p <= 1.0


class TestFramingDistribution:
    def test_rows_sum_to_one_hundred(self, engine):
        from moralframe.mining import Stance
        from moralframe.pipeline import GenerationRequest

        arguments = []
        for framing in Framing:
            outcome = engine.generate(
                GenerationRequest(topic="vaccination", stance=Stance.CON, framing=framing)
            )
            assert outcome.ok
            arguments.append(outcome.argument)
        table = framing_moral_distribution(arguments, engine.scorer)
        assert set(table) == {f.value for f in Framing}
        for row in table.values():
            assert sum(row.values()) == pytest.approx(100.0, abs=0.5)

    def test_single_foundation_argument_gets_full_mass(self):
        from dataclasses import replace
        from itertools import count

        from moralframe.foundations import load_moral_lexicon
        from moralframe.mining import ArgumentUnit, Stance
        from moralframe.morals import LexiconMoralScorer
        from moralframe.narrative import assemble_argument, cluster_themes

        from .conftest import make_sentence

        counter = count(1000)
        sentence = replace(make_sentence("Harm and harm again everywhere."), id=next(counter))
        unit = ArgumentUnit(
            sentence=sentence, kind="claim", claim_likelihood=0.9,
            evidence_likelihood=0.5, stance_score=-0.5,
            morals=frozenset({CARE}), claim_span=(0, len(sentence.tokens)),
        )
        argument = assemble_argument(
            cluster_themes([unit], 4), "anything", Stance.CON, Framing.INDIVIDUALIZING
        )
        scorer = LexiconMoralScorer(load_moral_lexicon("harm,care,0.9"))
        table = framing_moral_distribution([argument], scorer)
        assert table["individualizing"]["care"] == pytest.approx(100.0)
        assert table["individualizing"]["purity"] == 0.0
