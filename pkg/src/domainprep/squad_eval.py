"""Exact-match and token-F1 scoring of extractive-QA predictions.

Answer normalization follows the SQuAD v1 convention: lowercase, strip
punctuation, drop standalone articles, collapse whitespace.
"""

from __future__ import annotations

import json
import re
import string
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .squad_data import SquadDataset

_ARTICLE = re.compile(r"\b(a|an|the)\b")
_PUNCT = set(string.punctuation)


@dataclass
class EvalReport:
    """Aggregate scores as percentages, plus the ids that had no prediction."""

    exact_match: float
    f1: float
    n_evaluated: int
    missing_ids: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "exact_match": self.exact_match,
            "f1": self.f1,
            "n_evaluated": self.n_evaluated,
            "missing_ids": list(self.missing_ids),
        }


def normalize_answer(text: str) -> str:
    """Lowercase, remove punctuation and articles, collapse whitespace."""
    text = text.lower()
    text = "".join(ch for ch in text if ch not in _PUNCT)
    text = _ARTICLE.sub(" ", text)
    return " ".join(text.split())


def exact_match(pred: str, golds: Sequence[str]) -> int:
    """1 iff the normalized prediction equals some normalized gold answer."""
    if not golds:
        raise ValueError("golds must be non-empty")
    norm = normalize_answer(pred)
    return int(any(norm == normalize_answer(g) for g in golds))


def _f1_single(pred_tokens: list[str], gold_tokens: list[str]) -> float:
    if not pred_tokens and not gold_tokens:
        return 1.0
    common = Counter(pred_tokens) & Counter(gold_tokens)
    overlap = sum(common.values())
    if overlap == 0:
        return 0.0
    precision = overlap / len(pred_tokens)
    recall = overlap / len(gold_tokens)
    return 2 * precision * recall / (precision + recall)


def f1(pred: str, golds: Sequence[str]) -> float:
    """Max over golds of the token-multiset F1 between normalized answers."""
    if not golds:
        raise ValueError("golds must be non-empty")
    pred_tokens = normalize_answer(pred).split()
    return max(_f1_single(pred_tokens, normalize_answer(g).split())
               for g in golds)


def evaluate(dataset: SquadDataset, predictions: Mapping[str, str]
             ) -> EvalReport:
    """Average exact_match and f1 over every question in the dataset.

    Questions absent from the predictions score zero and are listed in
    ``missing_ids``. Percentages are reported to two decimals.
    """
    em_total = 0.0
    f1_total = 0.0
    n = 0
    missing: list[str] = []
    for _, qa in dataset.qas():
        n += 1
        if qa.id not in predictions:
            missing.append(qa.id)
            continue
        golds = [a.text for a in qa.answers]
        pred = predictions[qa.id]
        em_total += exact_match(pred, golds)
        f1_total += f1(pred, golds)
    if n == 0:
        return EvalReport(exact_match=0.0, f1=0.0, n_evaluated=0)
    return EvalReport(
        exact_match=round(100.0 * em_total / n, 2),
        f1=round(100.0 * f1_total / n, 2),
        n_evaluated=n,
        missing_ids=missing,
    )


def read_predictions(source: str | Path) -> dict[str, str]:
    """Load a predictions file: a JSON object mapping qa_id -> answer text."""
    obj = json.loads(Path(source).read_text(encoding="utf-8"))
    if not isinstance(obj, dict):
        raise ValueError(f"{source}: predictions must be a JSON object")
    for key, value in obj.items():
        if not isinstance(value, str):
            raise ValueError(
                f"{source}: prediction for {key!r} is not a string"
            )
    return dict(obj)
