"""Build, validate, split and (de)serialize SQuAD-v1-format QA datasets.

Answers are exact character spans of their paragraph context; the JSON
layout is the v1 structure ``{"version": ..., "data": [{"title", "paragraphs":
[{"context", "qas": [{"id", "question", "answers": [{"text",
"answer_start"}]}]}]}]}``.
"""

from __future__ import annotations

import copy
import csv
import hashlib
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

VIOLATION = "violation"
WARNING = "warning"


@dataclass
class Answer:
    text: str
    answer_start: int


@dataclass
class QA:
    id: str
    question: str
    answers: list[Answer]


@dataclass
class Paragraph:
    context: str
    qas: list[QA]


@dataclass
class Article:
    title: str
    paragraphs: list[Paragraph]


@dataclass
class SquadDataset:
    version: str
    articles: list[Article]

    def paragraphs(self) -> Iterator[Paragraph]:
        for article in self.articles:
            yield from article.paragraphs

    def qas(self) -> Iterator[tuple[Paragraph, QA]]:
        for paragraph in self.paragraphs():
            for qa in paragraph.qas:
                yield paragraph, qa

    @property
    def n_paragraphs(self) -> int:
        return sum(1 for _ in self.paragraphs())

    @property
    def n_questions(self) -> int:
        return sum(1 for _ in self.qas())


@dataclass
class QATableRow:
    """One collected (paragraph, question, answer) triple."""

    paragraph: str
    question: str
    answer: str


@dataclass
class Rejection:
    """A row or extra answer that could not be incorporated."""

    row: int
    question: str
    answer: str
    reason: str

    def to_dict(self) -> dict:
        return {"row": self.row, "question": self.question,
                "answer": self.answer, "reason": self.reason}


@dataclass
class Finding:
    severity: str
    qa_id: str | None
    message: str

    def to_dict(self) -> dict:
        return {"severity": self.severity, "qa_id": self.qa_id,
                "message": self.message}


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def violations(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == VIOLATION]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == WARNING]

    @property
    def ok(self) -> bool:
        return not self.violations


def make_qa_id(context: str, question: str) -> str:
    """Deterministic QA id: content hash of (context, question)."""
    digest = hashlib.sha1(f"{context}\x1f{question}".encode("utf-8"))
    return digest.hexdigest()[:24]


def from_table(rows: Sequence[QATableRow], version: str = "1.0",
               title: str = "") -> tuple[SquadDataset, list[Rejection]]:
    """Assemble a dataset from collected rows.

    Rows sharing an identical paragraph string collapse into one paragraph
    node. The answer offset is the first exact occurrence of the answer in
    the context; rows whose answer is not a substring (or with an empty
    field) become rejection records. A duplicated (paragraph, question) pair
    is an error.
    """
    paragraphs: dict[str, Paragraph] = {}
    seen_pairs: set[tuple[str, str]] = set()
    rejections: list[Rejection] = []
    for i, row in enumerate(rows):
        context = row.paragraph.strip()
        question = row.question.strip()
        answer = row.answer.strip()
        if not context or not question or not answer:
            rejections.append(Rejection(
                row=i, question=question, answer=answer,
                reason="empty paragraph, question, or answer",
            ))
            continue
        if (context, question) in seen_pairs:
            raise ValueError(
                f"row {i}: duplicate (paragraph, question) pair: {question!r}"
            )
        seen_pairs.add((context, question))
        start = context.find(answer)
        if start < 0:
            rejections.append(Rejection(
                row=i, question=question, answer=answer,
                reason="answer is not a substring of its paragraph",
            ))
            continue
        node = paragraphs.get(context)
        if node is None:
            node = Paragraph(context=context, qas=[])
            paragraphs[context] = node
        node.qas.append(QA(
            id=make_qa_id(context, question),
            question=question,
            answers=[Answer(text=answer, answer_start=start)],
        ))
    dataset = SquadDataset(
        version=version,
        articles=[Article(title=title, paragraphs=list(paragraphs.values()))],
    )
    return dataset, rejections


def validate(dataset: SquadDataset) -> ValidationReport:
    """Check the dataset invariants; findings are data, not failures.

    Violations: duplicate QA ids, answerless questions, and answers whose
    (text, answer_start) span does not reproduce the text. Answers occurring
    more than once in their context are flagged as warnings.
    """
    report = ValidationReport()
    seen_ids: dict[str, int] = {}
    for paragraph, qa in dataset.qas():
        seen_ids[qa.id] = seen_ids.get(qa.id, 0) + 1
        if not qa.answers:
            report.findings.append(Finding(
                VIOLATION, qa.id, "question has no answers"))
        for answer in qa.answers:
            span = paragraph.context[
                answer.answer_start:answer.answer_start + len(answer.text)]
            if span != answer.text:
                report.findings.append(Finding(
                    VIOLATION, qa.id,
                    f"span mismatch at offset {answer.answer_start}: "
                    f"expected {answer.text!r}, context holds {span!r}",
                ))
            if paragraph.context.count(answer.text) > 1:
                report.findings.append(Finding(
                    WARNING, qa.id,
                    f"answer {answer.text!r} occurs more than once in context",
                ))
    for qa_id, count in seen_ids.items():
        if count > 1:
            report.findings.append(Finding(
                VIOLATION, qa_id, f"qa id appears {count} times"))
    return report


def split(dataset: SquadDataset, dev_fraction: float, seed: int
          ) -> tuple[SquadDataset, SquadDataset]:
    """Seeded paragraph-level random partition into (train, dev).

    A paragraph and all its questions land on exactly one side. The dev side
    receives round(dev_fraction * n_paragraphs) paragraphs, clamped so both
    sides are non-empty.
    """
    if not 0 < dev_fraction < 1:
        raise ValueError(f"dev_fraction must lie in (0, 1), got {dev_fraction}")
    n = dataset.n_paragraphs
    if n < 2:
        raise ValueError(f"need at least 2 paragraphs to split, have {n}")
    n_dev = min(max(round(dev_fraction * n), 1), n - 1)
    order = list(range(n))
    random.Random(seed).shuffle(order)
    dev_positions = set(order[:n_dev])

    def _side(keep_dev: bool) -> SquadDataset:
        articles: list[Article] = []
        pos = 0
        for article in dataset.articles:
            kept: list[Paragraph] = []
            for paragraph in article.paragraphs:
                if (pos in dev_positions) == keep_dev:
                    kept.append(copy.deepcopy(paragraph))
                pos += 1
            if kept:
                articles.append(Article(title=article.title, paragraphs=kept))
        return SquadDataset(version=dataset.version, articles=articles)

    return _side(False), _side(True)


def merge_dev_answers(dev: SquadDataset,
                      extra: Iterable[tuple[str, str]]
                      ) -> tuple[SquadDataset, list[Rejection]]:
    """Append extra (qa_id, answer text) pairs to their questions.

    Offsets are computed by first occurrence, the same rule from_table uses.
    Unknown qa ids are errors; answers absent from their context become
    rejections.
    """
    merged = copy.deepcopy(dev)
    by_id: dict[str, tuple[Paragraph, QA]] = {
        qa.id: (paragraph, qa) for paragraph, qa in merged.qas()
    }
    rejections: list[Rejection] = []
    for i, (qa_id, text) in enumerate(extra):
        if qa_id not in by_id:
            raise ValueError(f"unknown qa id {qa_id!r}")
        paragraph, qa = by_id[qa_id]
        start = paragraph.context.find(text)
        if start < 0:
            rejections.append(Rejection(
                row=i, question=qa.question, answer=text,
                reason="answer is not a substring of its context",
            ))
            continue
        qa.answers.append(Answer(text=text, answer_start=start))
    return merged, rejections


def serialize(dataset: SquadDataset) -> bytes:
    """Encode as SQuAD v1 JSON (UTF-8 bytes)."""
    obj = {
        "version": dataset.version,
        "data": [
            {
                "title": article.title,
                "paragraphs": [
                    {
                        "context": paragraph.context,
                        "qas": [
                            {
                                "id": qa.id,
                                "question": qa.question,
                                "answers": [
                                    {"text": a.text,
                                     "answer_start": a.answer_start}
                                    for a in qa.answers
                                ],
                            }
                            for qa in paragraph.qas
                        ],
                    }
                    for paragraph in article.paragraphs
                ],
            }
            for article in dataset.articles
        ],
    }
    return json.dumps(obj, ensure_ascii=False).encode("utf-8")


def _require(obj: dict, key: str, kind: type, path: str):
    if not isinstance(obj, dict):
        raise ValueError(f"expected an object at {path}")
    if key not in obj:
        raise ValueError(f"missing {key!r} at {path}")
    value = obj[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise ValueError(
            f"{path}.{key}: expected {kind.__name__}, "
            f"got {type(value).__name__}"
        )
    return value


def parse(data: bytes | str) -> SquadDataset:
    """Decode SQuAD v1 JSON; malformed input errors name the JSON path."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed JSON: {exc}") from exc
    version = _require(obj, "version", str, "$")
    articles: list[Article] = []
    for ai, raw_article in enumerate(_require(obj, "data", list, "$")):
        apath = f"$.data[{ai}]"
        title = _require(raw_article, "title", str, apath)
        paragraphs: list[Paragraph] = []
        for pi, raw_para in enumerate(
                _require(raw_article, "paragraphs", list, apath)):
            ppath = f"{apath}.paragraphs[{pi}]"
            context = _require(raw_para, "context", str, ppath)
            qas: list[QA] = []
            for qi, raw_qa in enumerate(_require(raw_para, "qas", list, ppath)):
                qpath = f"{ppath}.qas[{qi}]"
                answers = [
                    Answer(
                        text=_require(raw_a, "text", str,
                                      f"{qpath}.answers[{ci}]"),
                        answer_start=_require(raw_a, "answer_start", int,
                                              f"{qpath}.answers[{ci}]"),
                    )
                    for ci, raw_a in enumerate(
                        _require(raw_qa, "answers", list, qpath))
                ]
                qas.append(QA(
                    id=_require(raw_qa, "id", str, qpath),
                    question=_require(raw_qa, "question", str, qpath),
                    answers=answers,
                ))
            paragraphs.append(Paragraph(context=context, qas=qas))
        articles.append(Article(title=title, paragraphs=paragraphs))
    return SquadDataset(version=version, articles=articles)


def read_qa_table_csv(source: str | Path) -> list[QATableRow]:
    """Read collected rows from a CSV with header paragraph,question,answer."""
    with open(source, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"paragraph", "question", "answer"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise ValueError(
                f"{source}: expected CSV header with columns {sorted(required)}"
            )
        return [
            QATableRow(paragraph=row["paragraph"], question=row["question"],
                       answer=row["answer"])
            for row in reader
        ]


def read_extra_answers_csv(source: str | Path) -> list[tuple[str, str]]:
    """Read extra dev answers from a CSV with header qa_id,answer."""
    with open(source, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"qa_id", "answer"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise ValueError(
                f"{source}: expected CSV header with columns {sorted(required)}"
            )
        return [(row["qa_id"], row["answer"]) for row in reader]
