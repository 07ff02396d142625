"""Fragmentation analysis of an induced vocabulary under a base vocabulary,
and the surgery that splices selected domain words into unused base slots.

The workflow: report how each induced word fragments under the base
vocabulary, segregate fragmented words into good/bad, club bad words that
share a root, rank one representative per club by corpus frequency, replace
``[unusedN]`` slots with the winners, and rebuild the replaced embedding
rows from subword means so the rest of the checkpoint stays untouched.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path
from typing import IO, Iterable, Mapping, Sequence

import numpy as np

from .bpe import CustomVocab
from .tokenizer import UNK, Vocab, is_unused_slot, wordpiece_tokenize

GOOD = "good"
BAD = "bad"
WHOLE = "whole"

FRAGMENTATION_CSV_HEADER = ("word", "tokenization", "classification")


@dataclass
class FragmentationRecord:
    """One induced word with its base-vocabulary tokenization.

    ``classification`` is ``"whole"`` for words the base vocabulary keeps
    intact, ``"good"``/``"bad"`` once classified, and None before
    classification.
    """

    word: str
    fragments: list[str]
    is_whole: bool
    classification: str | None
    corpus_frequency: int


@dataclass(frozen=True)
class RootGroup:
    """Words clubbed under a shared root, with the chosen representative."""

    members: tuple[str, ...]
    representative: str


def fragmentation_report(custom: CustomVocab, base: Vocab
                         ) -> list[FragmentationRecord]:
    """Tokenize every word-initial entry of the induced vocabulary with the
    base vocabulary.

    Continuation entries (``##...``) are skipped: they are not standalone
    words. Whole words are retained in the report but marked, so downstream
    classification can exclude them.
    """
    records: list[FragmentationRecord] = []
    for token, freq in custom:
        if token.startswith("##"):
            continue
        fragments = wordpiece_tokenize(token, base)
        is_whole = len(fragments) == 1 and fragments[0] == token
        records.append(FragmentationRecord(
            word=token,
            fragments=fragments,
            is_whole=is_whole,
            classification=WHOLE if is_whole else None,
            corpus_frequency=freq,
        ))
    return records


def overlap_stat(report: Sequence[FragmentationRecord]) -> float:
    """Fraction of report words that the base vocabulary holds whole."""
    if not report:
        raise ValueError("cannot compute overlap of an empty report")
    whole = sum(1 for r in report if r.is_whole)
    return whole / len(report)


def classify_words(report: Sequence[FragmentationRecord],
                   overrides: Mapping[str, str] | None = None
                   ) -> list[FragmentationRecord]:
    """Label every fragmented record good or bad.

    Default heuristic: bad when the word breaks into three or more fragments
    or the first fragment is at most two characters (a word reduced to [UNK]
    is also bad); otherwise good. Overrides take absolute precedence and are
    the channel for expert judgment.
    """
    overrides = dict(overrides or {})
    for word, label in overrides.items():
        if label not in (GOOD, BAD):
            raise ValueError(f"override for {word!r} has invalid label {label!r}")
    by_word = {r.word: r for r in report}
    unknown = sorted(set(overrides) - set(by_word))
    if unknown:
        raise ValueError(f"overrides name words absent from the report: {unknown}")
    whole_overridden = sorted(w for w in overrides if by_word[w].is_whole)
    if whole_overridden:
        raise ValueError(
            f"cannot override whole-word records: {whole_overridden}"
        )

    out: list[FragmentationRecord] = []
    for rec in report:
        if rec.is_whole:
            out.append(replace(rec, classification=WHOLE))
            continue
        label = overrides.get(rec.word)
        if label is None:
            bad = (
                len(rec.fragments) >= 3
                or len(rec.fragments[0]) <= 2
                or UNK in rec.fragments
            )
            label = BAD if bad else GOOD
        out.append(replace(rec, classification=label))
    return out


def _lcp_len(a: str, b: str) -> int:
    n = min(len(a), len(b))
    for i in range(n):
        if a[i] != b[i]:
            return i
    return n


def club_roots(bad_words: Iterable[str], min_prefix_len: int = 5,
               overrides: Mapping[str, str] | None = None) -> list[RootGroup]:
    """Partition bad words into root groups by greedy prefix agglomeration.

    Words are sorted; consecutive words whose common prefix reaches
    ``min_prefix_len`` join one group. The default representative is the
    longest common prefix of the group (the word itself for singletons);
    the override map (member word -> representative) renames a group.
    """
    if min_prefix_len < 3:
        raise ValueError(f"min_prefix_len must be >= 3, got {min_prefix_len}")
    overrides = dict(overrides or {})
    words = sorted(set(bad_words))
    if not words:
        return []

    chunks: list[list[str]] = [[words[0]]]
    for word in words[1:]:
        if _lcp_len(chunks[-1][-1], word) >= min_prefix_len:
            chunks[-1].append(word)
        else:
            chunks.append([word])

    groups: list[RootGroup] = []
    for members in chunks:
        if len(members) == 1:
            rep = members[0]
        else:
            rep = members[0]
            for m in members[1:]:
                rep = rep[:_lcp_len(rep, m)]
        renames = {overrides[m] for m in members if m in overrides}
        if len(renames) > 1:
            raise ValueError(
                f"conflicting representative overrides {sorted(renames)} "
                f"for group {members}"
            )
        if renames:
            rep = renames.pop()
        groups.append(RootGroup(members=tuple(members), representative=rep))
    return groups


def select_candidates(groups: Sequence[RootGroup],
                      frequencies: Mapping[str, int],
                      slot_budget: int,
                      base: Vocab | None = None) -> list[str]:
    """Rank one representative per group by summed member corpus frequency
    (descending, ties lexicographic) and keep at most ``slot_budget``.

    Duplicated representatives and words the base vocabulary already
    contains are dropped.
    """
    if slot_budget < 0:
        raise ValueError(f"slot_budget must be >= 0, got {slot_budget}")
    scored = sorted(
        ((-sum(frequencies.get(m, 0) for m in g.members), g.representative)
         for g in groups)
    )
    selected: list[str] = []
    seen: set[str] = set()
    for _, rep in scored:
        if rep in seen:
            continue
        if base is not None and rep in base:
            continue
        seen.add(rep)
        selected.append(rep)
        if len(selected) == slot_budget:
            break
    return selected


def apply_vocab_surgery(base: Vocab, selected: Sequence[str]) -> Vocab:
    """Replace unused slots with selected words, ascending slot id.

    The vocabulary size and every non-replaced id are preserved. Raises on
    duplicate selections, selections already present, and selections that
    exceed the unused-slot capacity.
    """
    seen: set[str] = set()
    for word in selected:
        if word in seen:
            raise ValueError(f"duplicate selected word {word!r}")
        seen.add(word)
        if word in base:
            raise ValueError(f"selected word {word!r} is already in the vocabulary")
    slots = base.unused_slot_ids()
    if len(selected) > len(slots):
        raise ValueError(
            f"capacity exceeded: {len(selected)} selected words but only "
            f"{len(slots)} unused slots"
        )
    tokens = list(base.tokens)
    for word, slot_id in zip(selected, slots):
        tokens[slot_id] = word
    return Vocab.from_tokens(tokens)


def embedding_surgery(emb: np.ndarray, base: Vocab, adapted: Vocab
                      ) -> np.ndarray:
    """Rebuild embedding rows for replaced slots; copy everything else.

    Each replaced slot's new word is tokenized with the ORIGINAL base
    vocabulary and its row becomes the arithmetic mean of the fragment rows.
    Words that tokenize to [UNK] keep the old slot row.
    """
    emb = np.asarray(emb)
    if emb.ndim != 2:
        raise ValueError(f"embedding matrix must be 2-D, got shape {emb.shape}")
    if emb.shape[0] != len(base):
        raise ValueError(
            f"embedding rows ({emb.shape[0]}) do not match the base "
            f"vocabulary size ({len(base)})"
        )
    if len(base) != len(adapted):
        raise ValueError(
            f"vocabulary sizes differ: base {len(base)}, adapted {len(adapted)}"
        )
    changed = [i for i, (b, a) in enumerate(zip(base.tokens, adapted.tokens))
               if b != a]
    not_slots = [i for i in changed if not is_unused_slot(base.tokens[i])]
    if not_slots:
        raise ValueError(
            f"vocabularies differ outside unused slots at ids {not_slots}"
        )
    out = emb.copy()
    for i in changed:
        fragments = wordpiece_tokenize(adapted.tokens[i], base)
        if UNK in fragments:
            continue
        rows = [base.index[f] for f in fragments]
        out[i] = emb[rows].mean(axis=0)
    return out


def write_fragmentation_csv(records: Sequence[FragmentationRecord],
                            sink: str | Path | IO[str]) -> None:
    """CSV report: word, space-joined tokenization, classification."""

    def _write(fh: IO[str]) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(FRAGMENTATION_CSV_HEADER)
        for rec in records:
            writer.writerow(
                (rec.word, " ".join(rec.fragments), rec.classification or "")
            )

    if isinstance(sink, (str, Path)):
        with open(sink, "w", encoding="utf-8", newline="") as fh:
            _write(fh)
    else:
        _write(sink)


def read_fragmentation_csv(source: str | Path) -> list[FragmentationRecord]:
    """Load a fragmentation CSV. Corpus frequencies are not stored in the
    CSV and come back as zero."""
    records: list[FragmentationRecord] = []
    with open(source, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != FRAGMENTATION_CSV_HEADER:
            raise ValueError(
                f"{source}: expected header {','.join(FRAGMENTATION_CSV_HEADER)}"
            )
        for row in reader:
            if len(row) != 3:
                raise ValueError(f"{source}: malformed row {row!r}")
            word, tokenization, classification = row
            fragments = tokenization.split(" ") if tokenization else []
            records.append(FragmentationRecord(
                word=word,
                fragments=fragments,
                is_whole=classification == WHOLE,
                classification=classification or None,
                corpus_frequency=0,
            ))
    return records


def read_classification_overrides(source: str | Path) -> dict[str, str]:
    """Parse ``word<TAB>label`` lines into an override map."""
    overrides: dict[str, str] = {}
    for lineno, line in enumerate(
            Path(source).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{source}:{lineno}: expected word<TAB>label")
        word, label = parts[0].strip(), parts[1].strip()
        if label not in (GOOD, BAD):
            raise ValueError(f"{source}:{lineno}: invalid label {label!r}")
        overrides[word] = label
    return overrides


def read_club_overrides(source: str | Path) -> dict[str, str]:
    """Parse ``representative<TAB>member,member,...`` lines into a
    member -> representative map."""
    overrides: dict[str, str] = {}
    for lineno, line in enumerate(
            Path(source).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(
                f"{source}:{lineno}: expected representative<TAB>members"
            )
        rep = parts[0].strip()
        members = [m.strip() for m in parts[1].split(",") if m.strip()]
        if not rep or not members:
            raise ValueError(f"{source}:{lineno}: empty representative or members")
        for member in members:
            overrides[member] = rep
    return overrides


def write_root_groups(groups: Sequence[RootGroup],
                      sink: str | Path) -> None:
    """Write groups in the same representative<TAB>members layout the club
    override files use."""
    lines = [f"{g.representative}\t{','.join(g.members)}" for g in groups]
    Path(sink).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_root_groups(source: str | Path) -> list[RootGroup]:
    groups: list[RootGroup] = []
    for lineno, line in enumerate(
            Path(source).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{source}:{lineno}: expected rep<TAB>members")
        members = tuple(m for m in parts[1].split(",") if m)
        groups.append(RootGroup(members=members, representative=parts[0]))
    return groups


def write_embedding_matrix(emb: np.ndarray, sink: str | Path | IO[str]) -> None:
    """Text format: first line ``<vocab_size> <dim>``, then one row per line
    of space-separated decimal floats."""
    emb = np.asarray(emb)
    if emb.ndim != 2:
        raise ValueError(f"embedding matrix must be 2-D, got shape {emb.shape}")
    lines = [f"{emb.shape[0]} {emb.shape[1]}"]
    lines.extend(" ".join(repr(float(v)) for v in row) for row in emb)
    text = "\n".join(lines) + "\n"
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(text, encoding="utf-8")
    else:
        sink.write(text)


def read_embedding_matrix(source: str | Path | IO[str]) -> np.ndarray:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    lines = text.splitlines()
    if not lines:
        raise ValueError("embedding matrix source is empty")
    try:
        n_rows, dim = (int(v) for v in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"malformed embedding header {lines[0]!r}") from exc
    body = [line for line in lines[1:] if line.strip()]
    if len(body) != n_rows:
        raise ValueError(f"expected {n_rows} embedding rows, found {len(body)}")
    rows = []
    for lineno, line in enumerate(body, start=2):
        values = line.split()
        if len(values) != dim:
            raise ValueError(f"line {lineno}: expected {dim} values, "
                             f"found {len(values)}")
        rows.append([float(v) for v in values])
    return np.array(rows, dtype=float)
