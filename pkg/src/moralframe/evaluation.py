"""Evaluation and study mathematics.

Multi-label precision/recall/F1 with macro averages, Cohen's kappa,
Kendall's W, rank distributions with Student t significance tests, and
per-framing moral distribution tables. Pure batch computations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from scipy import stats as _scipy_stats

from .foundations import FOUNDATIONS, Framing, MoralFoundation
from .morals import MoralScorer
from .narrative import MoralArgument


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    tn: int = 0

    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class MultilabelReport:
    per_foundation: Mapping[MoralFoundation, PRF]
    macro: PRF
    counts: Mapping[MoralFoundation, ConfusionCounts]


def _safe_div(numerator: float, denominator: float) -> float:
    # 0/0 convention: metrics are 0 when the denominator is 0.
    return numerator / denominator if denominator else 0.0


def multilabel_prf(
    gold: Sequence[Iterable[MoralFoundation]],
    pred: Sequence[Iterable[MoralFoundation]],
) -> MultilabelReport:
    """Per-foundation precision/recall/F1 plus unweighted macro averages."""
    if len(gold) != len(pred):
        raise ValueError(f"gold has {len(gold)} rows but pred has {len(pred)}")
    counts: dict[MoralFoundation, ConfusionCounts] = {}
    gold_sets = [set(g) for g in gold]
    pred_sets = [set(p) for p in pred]
    for f in FOUNDATIONS:
        tp = fp = fn = tn = 0
        for g, p in zip(gold_sets, pred_sets):
            in_gold, in_pred = f in g, f in p
            if in_gold and in_pred:
                tp += 1
            elif in_pred:
                fp += 1
            elif in_gold:
                fn += 1
            else:
                tn += 1
        counts[f] = ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn)
    per_foundation: dict[MoralFoundation, PRF] = {}
    for f, c in counts.items():
        precision = _safe_div(c.tp, c.tp + c.fp)
        recall = _safe_div(c.tp, c.tp + c.fn)
        f1 = _safe_div(2 * precision * recall, precision + recall)
        per_foundation[f] = PRF(precision=precision, recall=recall, f1=f1)
    macro = PRF(
        precision=sum(m.precision for m in per_foundation.values()) / len(FOUNDATIONS),
        recall=sum(m.recall for m in per_foundation.values()) / len(FOUNDATIONS),
        f1=sum(m.f1 for m in per_foundation.values()) / len(FOUNDATIONS),
    )
    return MultilabelReport(per_foundation=per_foundation, macro=macro, counts=counts)


def cohens_kappa(labels_a: Sequence[bool], labels_b: Sequence[bool]) -> float:
    """kappa = (p_o - p_e) / (1 - p_e), chance agreement from marginal products."""
    if len(labels_a) != len(labels_b):
        raise ValueError("label vectors must have equal length")
    n = len(labels_a)
    if n == 0:
        raise ValueError("label vectors must be nonempty")
    observed = sum(1 for a, b in zip(labels_a, labels_b) if bool(a) == bool(b)) / n
    pa = sum(map(bool, labels_a)) / n
    pb = sum(map(bool, labels_b)) / n
    expected = pa * pb + (1 - pa) * (1 - pb)
    if math.isclose(expected, 1.0):
        if math.isclose(observed, 1.0):
            return 1.0
        raise ValueError("chance agreement is 1 with imperfect observed agreement")
    return (observed - expected) / (1 - expected)


def kendalls_w(rankings: Sequence[Sequence[int]]) -> float:
    """Coefficient of concordance W = 12 S / (m^2 (n^3 - n)).

    Every row must be a complete permutation of 1..n; ties are rejected.
    """
    if not rankings:
        raise ValueError("need at least one ranking row")
    m = len(rankings)
    n = len(rankings[0])
    if n < 2:
        raise ValueError("rankings need at least two items")
    expected = set(range(1, n + 1))
    for row in rankings:
        if len(row) != n:
            raise ValueError("ranking rows must have equal length")
        if set(row) != expected:
            raise ValueError(f"row {list(row)} is not a permutation of 1..{n}")
    column_sums = [sum(row[j] for row in rankings) for j in range(n)]
    mean_sum = sum(column_sums) / n
    s = sum((r - mean_sum) ** 2 for r in column_sums)
    return 12.0 * s / (m * m * (n**3 - n))


# --- ranking study statistics -------------------------------------------------


IDEOLOGIES = ("liberal", "conservative", "unknown")
RELATIONS = ("empowering", "challenging")


def relation_for(stance_presented: str, participant_stance: int) -> str:
    """Empowering iff the participant's own stance agrees with the presented
    one; an undecided stance (3) always counts as challenging."""
    if not 1 <= participant_stance <= 5:
        raise ValueError(f"participant stance {participant_stance} outside 1..5")
    if stance_presented == "pro" and participant_stance >= 4:
        return "empowering"
    if stance_presented == "con" and participant_stance <= 2:
        return "empowering"
    return "challenging"


@dataclass(frozen=True)
class RankingRecord:
    """One participant's ranking of the three framings for one topic-stance item."""

    participant: str
    ideology: str
    topic: str
    stance_presented: str
    participant_stance: int
    ranks: Mapping[Framing, int]

    def __post_init__(self) -> None:
        if self.ideology not in IDEOLOGIES:
            raise ValueError(f"unknown ideology {self.ideology!r}")
        if self.stance_presented not in ("pro", "con"):
            raise ValueError(f"stance_presented must be pro or con")
        if set(self.ranks) != set(Framing):
            raise ValueError("ranks must cover exactly the three framings")
        if sorted(self.ranks.values()) != [1, 2, 3]:
            raise ValueError(f"ranks {dict(self.ranks)} are not a permutation of 1..3")
        relation_for(self.stance_presented, self.participant_stance)

    @property
    def relation(self) -> str:
        return relation_for(self.stance_presented, self.participant_stance)


@dataclass(frozen=True)
class FramingRankSummary:
    distribution: tuple[float, float, float]
    mean_rank: float
    count: int

    def __post_init__(self) -> None:
        if abs(sum(self.distribution) - 1.0) > 0.005:
            raise ValueError(f"rank distribution {self.distribution} does not sum to 1")
        if not 1.0 <= self.mean_rank <= 3.0:
            raise ValueError(f"mean rank {self.mean_rank} outside [1, 3]")


def mean_rank(distribution: Sequence[float]) -> float:
    """Mean rank implied by a (share at rank 1, 2, 3) distribution."""
    if len(distribution) != 3:
        raise ValueError("expected shares for ranks 1..3")
    if abs(sum(distribution) - 1.0) > 0.005:
        raise ValueError(f"distribution {tuple(distribution)} does not sum to 1")
    return sum((i + 1) * p for i, p in enumerate(distribution))


@dataclass(frozen=True)
class PairwiseTest:
    framing_a: Framing
    framing_b: Framing
    mean_difference: float
    t_statistic: float
    p_value: float
    ci_low: float
    ci_high: float
    note: str = ""


def student_t_test(
    sample_a: Sequence[float], sample_b: Sequence[float], confidence: float = 0.95
) -> tuple[float, float, float, float, float, str]:
    """Two-sample equal-variance Student t-test with a confidence interval.

    Returns (mean difference, t, p, ci_low, ci_high, note). Identical or
    zero-variance samples are reported explicitly instead of yielding NaNs.
    """
    n1, n2 = len(sample_a), len(sample_b)
    if n1 < 2 or n2 < 2:
        raise ValueError("both samples need at least two observations")
    m1 = sum(sample_a) / n1
    m2 = sum(sample_b) / n2
    diff = m1 - m2
    v1 = sum((x - m1) ** 2 for x in sample_a) / (n1 - 1)
    v2 = sum((x - m2) ** 2 for x in sample_b) / (n2 - 1)
    df = n1 + n2 - 2
    pooled = ((n1 - 1) * v1 + (n2 - 1) * v2) / df
    if pooled == 0.0:
        if diff == 0.0:
            return 0.0, 0.0, 1.0, 0.0, 0.0, "zero variance, identical samples"
        return diff, math.inf if diff > 0 else -math.inf, 0.0, diff, diff, "zero variance"
    se = math.sqrt(pooled * (1 / n1 + 1 / n2))
    t_stat = diff / se
    p_value = 2 * _scipy_stats.t.sf(abs(t_stat), df)
    t_crit = _scipy_stats.t.ppf(0.5 + confidence / 2, df)
    return diff, t_stat, p_value, diff - t_crit * se, diff + t_crit * se, ""


@dataclass(frozen=True)
class RankStats:
    group: str
    per_framing: Mapping[Framing, FramingRankSummary]
    comparisons: tuple[PairwiseTest, ...]


def _summarize_group(group: str, records: Sequence[RankingRecord]) -> RankStats:
    per_framing: dict[Framing, FramingRankSummary] = {}
    samples: dict[Framing, list[int]] = {f: [] for f in Framing}
    for record in records:
        for framing, rank in record.ranks.items():
            samples[framing].append(rank)
    for framing, ranks in samples.items():
        n = len(ranks)
        distribution = tuple(sum(1 for r in ranks if r == k) / n for k in (1, 2, 3))
        per_framing[framing] = FramingRankSummary(
            distribution=distribution, mean_rank=mean_rank(distribution), count=n
        )
    comparisons = []
    framings = list(Framing)
    for i in range(len(framings)):
        for j in range(i + 1, len(framings)):
            a, b = framings[i], framings[j]
            if len(samples[a]) < 2 or len(samples[b]) < 2:
                diff = per_framing[a].mean_rank - per_framing[b].mean_rank
                comparisons.append(
                    PairwiseTest(
                        framing_a=a, framing_b=b, mean_difference=diff,
                        t_statistic=math.nan, p_value=math.nan,
                        ci_low=math.nan, ci_high=math.nan,
                        note="insufficient data for a t-test",
                    )
                )
                continue
            diff, t_stat, p, lo, hi, note = student_t_test(samples[a], samples[b])
            comparisons.append(
                PairwiseTest(
                    framing_a=a, framing_b=b, mean_difference=diff,
                    t_statistic=t_stat, p_value=p, ci_low=lo, ci_high=hi, note=note,
                )
            )
    return RankStats(group=group, per_framing=per_framing, comparisons=tuple(comparisons))


def rank_stats(
    records: Sequence[RankingRecord],
    by_ideology: bool = False,
    by_relation: bool = False,
) -> dict[str, RankStats]:
    """Rank distributions, mean ranks, and pairwise significance per group.

    Always includes the pooled "all" group; grouping flags add per-ideology
    and/or per-relation slices (and their cross product when both are set).
    Requested groups with zero records are omitted with a warning.
    """
    if not records:
        raise ValueError("no ranking records supplied")
    ideology_values: list[str | None] = [None] + (
        ["liberal", "conservative"] if by_ideology else []
    )
    relation_values: list[str | None] = [None] + (list(RELATIONS) if by_relation else [])
    results: dict[str, RankStats] = {}
    for ideology in ideology_values:
        for relation in relation_values:
            group = "/".join(p for p in (ideology, relation) if p is not None) or "all"
            selected = [
                r
                for r in records
                if (ideology is None or r.ideology == ideology)
                and (relation is None or r.relation == relation)
            ]
            if not selected:
                warnings.warn(f"rank_stats: group {group!r} has no records")
                continue
            results[group] = _summarize_group(group, selected)
    return results


# --- framing distribution ------------------------------------------------------


def framing_moral_distribution(
    arguments: Sequence[MoralArgument], scorer: MoralScorer
) -> dict[str, dict[str, float]]:
    """Per-framing share (percent) of each foundation across output sentences.

    Every rendered sentence of every argument is re-scored; per framing the
    foundation masses are summed and normalized to a 100% row.
    """
    if not arguments:
        raise ValueError("no arguments supplied")
    mass: dict[str, dict[MoralFoundation, float]] = {}
    for argument in arguments:
        key = argument.framing.value if argument.framing else "custom"
        row = mass.setdefault(key, {f: 0.0 for f in FOUNDATIONS})
        for paragraph in argument.theme_paragraphs:
            for uid in paragraph.unit_ids:
                profile = scorer.score(argument.units[uid].sentence)
                for f in FOUNDATIONS:
                    row[f] += profile.score(f)
    result: dict[str, dict[str, float]] = {}
    for key, row in mass.items():
        total = sum(row.values())
        result[key] = {
            f.value: (100.0 * row[f] / total if total else 0.0) for f in FOUNDATIONS
        }
    return result
