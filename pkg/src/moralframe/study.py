"""Ranking-study sessions: state machine, blinding, and crash-safe persistence.

A session walks a queue of topic-stance items. For each item the participant
first records their own stance on the topic (Likert 1-5), then ranks the three
blinded arguments; after the last item comes the two-condition questionnaire.
Framing labels never appear in any payload sent to the participant: arguments
are shown under neutral keys in a per-item randomized order whose permutation
is stored server-side only.

The store is a single append-only JSONL journal plus periodic snapshots;
restarting replays the journal, so no acknowledged submission is ever lost.
All mutation is serialized through one writer lock; reads are pure.
"""

from __future__ import annotations

import json
import random
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .evaluation import RankingRecord
from .foundations import Framing
from .narrative import paragraph_connective

DISPLAY_KEYS = ("A", "B", "C")
SNAPSHOT_EVERY = 25

LIKERT_LABELS = {
    1: "strongly disagree",
    2: "disagree",
    3: "undecided",
    4: "support",
    5: "strongly support",
}

# The four questionnaire questions, asked once for challenging and once for
# empowering arguments; answers are option indices.
QUESTIONNAIRE_QUESTIONS: dict[str, tuple[str, ...]] = {
    "own_views": (
        "Arguments that matched your views",
        "Arguments that challenged your views",
        "Neither of those was important",
    ),
    "knowledge": (
        "Arguments based on views you already knew about",
        "Arguments that introduce views you were not familiar with",
        "Neither of those was important",
    ),
    "others_views": (
        "Arguments you saw as particularly convincing to people that share your views",
        "Arguments you saw as particularly convincing to people that rather oppose your views",
        "Neither of those was important",
    ),
    "effectiveness": ("Your views", "Your knowledge", "Others' views"),
}
QUESTIONNAIRE_CONDITIONS = ("challenging", "empowering")


class StudyStateError(RuntimeError):
    """A submission arrived out of order for the session's state machine."""


class UnknownSessionError(KeyError):
    pass


@dataclass(frozen=True)
class StudyItem:
    """One topic-stance pair with its three framed argument documents."""

    topic: str
    stance: str
    arguments: Mapping[str, dict]  # framing value -> structured argument document

    def __post_init__(self) -> None:
        if set(self.arguments) != {f.value for f in Framing}:
            raise ValueError(
                f"item {self.topic}/{self.stance} needs one argument per framing"
            )


def load_study_bundle(directory: str | Path) -> list[StudyItem]:
    """Collect batch-generate output files into study items.

    Every ``*.json`` argument document in the directory is grouped by
    (topic, stance); only groups with all three framings become items.
    """
    grouped: dict[tuple[str, str], dict[str, dict]] = {}
    for path in sorted(Path(directory).glob("*.json")):
        document = json.loads(path.read_text(encoding="utf-8"))
        framing = document.get("framing")
        if framing is None:
            continue
        grouped.setdefault((document["topic"], document["stance"]), {})[framing] = document
    items = [
        StudyItem(topic=topic, stance=stance, arguments=arguments)
        for (topic, stance), arguments in sorted(grouped.items())
        if len(arguments) == 3
    ]
    if not items:
        raise ValueError(f"no complete topic-stance argument triples under {directory}")
    return items


def blinded_view(document: dict) -> dict:
    """Strip an argument document down to displayable text only.

    Rebuilds the rendered paragraphs (connective plus verbatim sentences);
    no framing, moral, or scoring metadata survives.
    """
    themes = document["themes"]
    paragraphs = []
    for position, theme in enumerate(themes):
        opener = paragraph_connective(position, len(themes), theme["label"])
        body = " ".join(s["text"] for s in theme["sentences"])
        paragraphs.append(f"{opener} {body}")
    return {"intro": document["intro"], "paragraphs": paragraphs}


@dataclass
class SessionState:
    session_id: str
    participant: str
    ideology: str
    items: list[StudyItem]
    permutations: list[tuple[str, ...]]  # per item: framing value per display key
    position: int = 0
    awaiting: str = "stance"  # stance | ranking | questionnaire | done
    stances: dict[int, int] = field(default_factory=dict)
    rankings: dict[int, dict[str, int]] = field(default_factory=dict)  # framing -> rank
    questionnaire: dict | None = None

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "participant": self.participant,
            "ideology": self.ideology,
            "items": [
                {"topic": i.topic, "stance": i.stance, "arguments": dict(i.arguments)}
                for i in self.items
            ],
            "permutations": [list(p) for p in self.permutations],
            "position": self.position,
            "awaiting": self.awaiting,
            "stances": {str(k): v for k, v in self.stances.items()},
            "rankings": {str(k): v for k, v in self.rankings.items()},
            "questionnaire": self.questionnaire,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SessionState":
        return cls(
            session_id=data["session_id"],
            participant=data["participant"],
            ideology=data["ideology"],
            items=[
                StudyItem(topic=i["topic"], stance=i["stance"], arguments=i["arguments"])
                for i in data["items"]
            ],
            permutations=[tuple(p) for p in data["permutations"]],
            position=data["position"],
            awaiting=data["awaiting"],
            stances={int(k): v for k, v in data["stances"].items()},
            rankings={int(k): v for k, v in data["rankings"].items()},
            questionnaire=data.get("questionnaire"),
        )


class StudyStore:
    """Persistent collection of study sessions over one argument bundle."""

    def __init__(
        self,
        directory: str | Path,
        items: Sequence[StudyItem] | None = None,
        rng: random.Random | None = None,
    ) -> None:
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.journal_path = self.directory / "journal.jsonl"
        self.snapshot_path = self.directory / "snapshot.json"
        self.items = list(items) if items else []
        self._rng = rng or random.Random()
        self._lock = threading.Lock()
        self._sessions: dict[str, SessionState] = {}
        self._event_count = 0
        self._load()

    # -- persistence ----------------------------------------------------------

    def _load(self) -> None:
        start = 0
        if self.snapshot_path.exists():
            snapshot = json.loads(self.snapshot_path.read_text(encoding="utf-8"))
            self._sessions = {
                sid: SessionState.from_dict(s) for sid, s in snapshot["sessions"].items()
            }
            start = snapshot["event_count"]
        self._event_count = start
        if not self.journal_path.exists():
            return
        with open(self.journal_path, encoding="utf-8") as fh:
            for position, line in enumerate(fh):
                if position < start or not line.strip():
                    continue
                self._apply(json.loads(line))
                self._event_count += 1

    def _append(self, event: dict) -> None:
        with open(self.journal_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event, ensure_ascii=False) + "\n")
            fh.flush()
        self._apply(event)
        self._event_count += 1
        if self._event_count % SNAPSHOT_EVERY == 0:
            self._write_snapshot()

    def _write_snapshot(self) -> None:
        payload = {
            "event_count": self._event_count,
            "sessions": {sid: s.to_dict() for sid, s in self._sessions.items()},
        }
        tmp = self.snapshot_path.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload, ensure_ascii=False), encoding="utf-8")
        tmp.replace(self.snapshot_path)

    def _apply(self, event: dict) -> None:
        kind = event["type"]
        if kind == "session_created":
            state = SessionState.from_dict(event["session"])
            self._sessions[state.session_id] = state
            return
        state = self._sessions[event["session_id"]]
        if kind == "stance_submitted":
            state.stances[event["item_index"]] = event["value"]
            state.awaiting = "ranking"
        elif kind == "ranking_submitted":
            state.rankings[event["item_index"]] = event["framing_ranks"]
            state.position += 1
            state.awaiting = "stance" if state.position < len(state.items) else "questionnaire"
        elif kind == "questionnaire_submitted":
            state.questionnaire = event["answers"]
            state.awaiting = "done"
        else:  # pragma: no cover - future event kinds
            raise ValueError(f"unknown journal event type {kind!r}")

    # -- session lifecycle ------------------------------------------------------

    def _get(self, session_id: str) -> SessionState:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise UnknownSessionError(session_id)

    def create_session(self, participant: str, ideology: str) -> SessionState:
        if ideology not in ("liberal", "conservative", "unknown"):
            raise ValueError(f"ideology must be liberal, conservative, or unknown")
        if not self.items:
            raise ValueError("store has no study items configured")
        with self._lock:
            permutations = []
            for _ in self.items:
                order = [f.value for f in Framing]
                self._rng.shuffle(order)
                permutations.append(tuple(order))
            state = SessionState(
                session_id=uuid.uuid4().hex,
                participant=participant,
                ideology=ideology,
                items=list(self.items),
                permutations=permutations,
            )
            self._append({"type": "session_created", "session": state.to_dict()})
            return self._sessions[state.session_id]

    def next_step(self, session_id: str) -> dict:
        """Server-driven view of what the client should show next.

        Ranking payloads contain only neutral keys and argument text; the
        framing permutation stays server-side.
        """
        state = self._get(session_id)
        base = {
            "session_id": session_id,
            "step": state.awaiting,
            "items_total": len(state.items),
            "items_done": state.position,
        }
        if state.awaiting == "done":
            return base
        if state.awaiting == "questionnaire":
            base["questions"] = {
                name: list(options) for name, options in QUESTIONNAIRE_QUESTIONS.items()
            }
            base["conditions"] = list(QUESTIONNAIRE_CONDITIONS)
            return base
        item = state.items[state.position]
        base["item_index"] = state.position
        base["topic"] = item.topic
        if state.awaiting == "stance":
            base["scale"] = {str(k): v for k, v in LIKERT_LABELS.items()}
            return base
        # ranking step
        permutation = state.permutations[state.position]
        base["stance_presented"] = item.stance
        base["arguments"] = [
            {"key": key, **blinded_view(item.arguments[framing])}
            for key, framing in zip(DISPLAY_KEYS, permutation)
        ]
        return base

    def submit_stance(self, session_id: str, item_index: int, value: int) -> None:
        with self._lock:
            state = self._get(session_id)
            if state.awaiting != "stance" or item_index != state.position:
                raise StudyStateError(
                    f"expected {state.awaiting} for item {state.position}, "
                    f"got stance for item {item_index}"
                )
            if value not in LIKERT_LABELS:
                raise ValueError(f"stance value {value} outside 1..5")
            self._append(
                {
                    "type": "stance_submitted",
                    "session_id": session_id,
                    "item_index": item_index,
                    "value": value,
                }
            )

    def submit_ranking(self, session_id: str, item_index: int, ranks: Mapping[str, int]) -> None:
        with self._lock:
            state = self._get(session_id)
            if state.awaiting != "ranking" or item_index != state.position:
                raise StudyStateError(
                    f"expected {state.awaiting} for item {state.position}, "
                    f"got ranking for item {item_index}"
                )
            if set(ranks) != set(DISPLAY_KEYS) or sorted(ranks.values()) != [1, 2, 3]:
                raise ValueError(f"ranking {dict(ranks)} is not a permutation of the three cards")
            permutation = state.permutations[item_index]
            framing_ranks = {
                framing: int(ranks[key]) for key, framing in zip(DISPLAY_KEYS, permutation)
            }
            self._append(
                {
                    "type": "ranking_submitted",
                    "session_id": session_id,
                    "item_index": item_index,
                    "display_ranks": {k: int(v) for k, v in ranks.items()},
                    "framing_ranks": framing_ranks,
                }
            )

    def submit_questionnaire(self, session_id: str, answers: Mapping[str, Mapping[str, int]]) -> None:
        with self._lock:
            state = self._get(session_id)
            if state.awaiting != "questionnaire":
                raise StudyStateError(f"session is awaiting {state.awaiting}, not questionnaire")
            if set(answers) != set(QUESTIONNAIRE_CONDITIONS):
                raise ValueError(
                    f"answers must cover exactly the conditions {QUESTIONNAIRE_CONDITIONS}"
                )
            validated: dict[str, dict[str, int]] = {}
            for condition, chosen in answers.items():
                if set(chosen) != set(QUESTIONNAIRE_QUESTIONS):
                    raise ValueError(
                        f"{condition}: every question must be answered exactly once"
                    )
                for question, option in chosen.items():
                    options = QUESTIONNAIRE_QUESTIONS[question]
                    if not (isinstance(option, int) and 0 <= option < len(options)):
                        raise ValueError(
                            f"{condition}/{question}: option {option!r} out of range"
                        )
                validated[condition] = {q: int(o) for q, o in chosen.items()}
            self._append(
                {
                    "type": "questionnaire_submitted",
                    "session_id": session_id,
                    "answers": validated,
                }
            )

    # -- export -----------------------------------------------------------------

    def ranking_records(self) -> list[RankingRecord]:
        records = []
        for state in self._sessions.values():
            for item_index, framing_ranks in sorted(state.rankings.items()):
                item = state.items[item_index]
                records.append(
                    RankingRecord(
                        participant=state.participant,
                        ideology=state.ideology,
                        topic=item.topic,
                        stance_presented=item.stance,
                        participant_stance=state.stances[item_index],
                        ranks={Framing(f): r for f, r in framing_ranks.items()},
                    )
                )
        return records

    def export_jsonl(self) -> str:
        """JSON-lines export: one line per ranking record, then questionnaires."""
        lines = []
        for record in self.ranking_records():
            lines.append(
                json.dumps(
                    {
                        "kind": "ranking",
                        "participant": record.participant,
                        "ideology": record.ideology,
                        "topic": record.topic,
                        "stance_presented": record.stance_presented,
                        "participant_stance": record.participant_stance,
                        "relation": record.relation,
                        "ranks": {f.value: r for f, r in record.ranks.items()},
                    },
                    ensure_ascii=False,
                )
            )
        for state in self._sessions.values():
            if state.questionnaire is not None:
                lines.append(
                    json.dumps(
                        {
                            "kind": "questionnaire",
                            "participant": state.participant,
                            "ideology": state.ideology,
                            "answers": state.questionnaire,
                        },
                        ensure_ascii=False,
                    )
                )
        return "\n".join(lines) + ("\n" if lines else "")


def records_from_jsonl(text: str) -> list[RankingRecord]:
    """Parse an export stream back into ranking records (questionnaires skipped)."""
    records = []
    for line in text.splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        if obj.get("kind") != "ranking":
            continue
        records.append(
            RankingRecord(
                participant=obj["participant"],
                ideology=obj["ideology"],
                topic=obj["topic"],
                stance_presented=obj["stance_presented"],
                participant_stance=obj["participant_stance"],
                ranks={Framing(f): r for f, r in obj["ranks"].items()},
            )
        )
    return records
