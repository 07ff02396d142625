"""Deterministic byte-pair-encoding vocabulary induction.

Words are split into single-character symbols (word-internal symbols carry
the ``##`` continuation mark) and the most frequent adjacent symbol pair is
merged repeatedly. Ties break on the lexicographic order of the merged
string, which makes the whole construction reproducible byte for byte.
"""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator

from .tokenizer import CONTINUATION_PREFIX, basic_tokenize


@dataclass(frozen=True)
class CustomVocab:
    """Induced subword vocabulary: ordered (token, support count) entries.

    The order is the construction order (sorted initial symbols followed by
    merges in merge order), so a vocabulary built with a smaller target is a
    prefix of one built with a larger target on the same corpus.
    """

    entries: tuple[tuple[str, int], ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[str, int]]:
        return iter(self.entries)

    def tokens(self) -> list[str]:
        return [tok for tok, _ in self.entries]


def word_frequencies(sentences: Iterable[str], lowercase: bool = True
                     ) -> Counter[str]:
    """Token counts over basic_tokenize output for every sentence."""
    counts: Counter[str] = Counter()
    for sentence in sentences:
        counts.update(basic_tokenize(sentence, lowercase=lowercase))
    return counts


def _symbolize(word: str) -> tuple[str, ...]:
    return tuple(
        ch if i == 0 else CONTINUATION_PREFIX + ch for i, ch in enumerate(word)
    )


def _merge_symbols(a: str, b: str) -> str:
    # Right-hand symbols are always word-internal, so strip their mark.
    return a + b[len(CONTINUATION_PREFIX):]


def train_bpe(sentences: Iterable[str], target_size: int = 30_000,
              min_pair_freq: int = 2) -> CustomVocab:
    """Induce a subword vocabulary of at most ``target_size`` tokens.

    Merging stops when the vocabulary reaches the target or no adjacent pair
    occurs at least ``min_pair_freq`` times. Initial symbols are recorded
    with their corpus occurrence counts; each merged token is recorded with
    the pair frequency at the time of its creation. All single-character
    symbols stay in the vocabulary, so any in-corpus word remains
    tokenizable without [UNK].
    """
    if min_pair_freq < 1:
        raise ValueError(f"min_pair_freq must be >= 1, got {min_pair_freq}")
    word_counts = word_frequencies(sentences)
    if not word_counts:
        raise ValueError("empty corpus: no words to train on")

    words = sorted(word_counts)
    counts = [word_counts[w] for w in words]
    symbol_seqs = [list(_symbolize(w)) for w in words]

    symbol_freq: Counter[str] = Counter()
    for seq, cnt in zip(symbol_seqs, counts):
        for sym in seq:
            symbol_freq[sym] += cnt
    initial = sorted(symbol_freq)
    if target_size < len(initial):
        raise ValueError(
            f"target_size {target_size} is below the initial symbol count "
            f"{len(initial)}"
        )
    entries: list[tuple[str, int]] = [(sym, symbol_freq[sym]) for sym in initial]
    vocab_members = set(initial)

    pair_counts: Counter[tuple[str, str]] = Counter()
    pair_words: dict[tuple[str, str], set[int]] = {}
    for idx, (seq, cnt) in enumerate(zip(symbol_seqs, counts)):
        for pair in zip(seq, seq[1:]):
            pair_counts[pair] += cnt
            pair_words.setdefault(pair, set()).add(idx)

    # Lazy max-heap keyed by (-count, merged string, pair); stale entries are
    # skipped when their stored count no longer matches the live count.
    heap: list[tuple[int, str, tuple[str, str]]] = [
        (-cnt, _merge_symbols(*pair), pair) for pair, cnt in pair_counts.items()
    ]
    heapq.heapify(heap)

    def push(pair: tuple[str, str]) -> None:
        cnt = pair_counts[pair]
        if cnt > 0:
            heapq.heappush(heap, (-cnt, _merge_symbols(*pair), pair))

    while len(entries) < target_size and heap:
        neg_cnt, merged, pair = heapq.heappop(heap)
        cnt = -neg_cnt
        if pair_counts.get(pair, 0) != cnt:
            continue
        if cnt < min_pair_freq:
            break

        if merged not in vocab_members:
            entries.append((merged, cnt))
            vocab_members.add(merged)

        touched: set[tuple[str, str]] = set()
        for widx in sorted(pair_words.get(pair, ())):
            seq = symbol_seqs[widx]
            cnt_w = counts[widx]
            for old_pair in zip(seq, seq[1:]):
                pair_counts[old_pair] -= cnt_w
                touched.add(old_pair)
                if pair_counts[old_pair] <= 0:
                    del pair_counts[old_pair]
                words_set = pair_words.get(old_pair)
                if words_set is not None:
                    words_set.discard(widx)
                    if not words_set:
                        del pair_words[old_pair]
            new_seq: list[str] = []
            j = 0
            while j < len(seq):
                if (j + 1 < len(seq) and seq[j] == pair[0]
                        and seq[j + 1] == pair[1]):
                    new_seq.append(merged)
                    j += 2
                else:
                    new_seq.append(seq[j])
                    j += 1
            symbol_seqs[widx] = new_seq
            for new_pair in zip(new_seq, new_seq[1:]):
                pair_counts[new_pair] += cnt_w
                touched.add(new_pair)
                pair_words.setdefault(new_pair, set()).add(widx)
        for changed in touched:
            push(changed)

    return CustomVocab(entries=tuple(entries))


def write_custom_vocab(custom: CustomVocab, vocab_path: str | Path,
                       freq_path: str | Path) -> None:
    """Write vocab.txt-format tokens plus a sibling (token, tab, count) TSV."""
    Path(vocab_path).write_text(
        "\n".join(custom.tokens()) + "\n", encoding="utf-8"
    )
    lines = [f"{tok}\t{cnt}" for tok, cnt in custom.entries]
    Path(freq_path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_custom_vocab(freq_path: str | Path) -> CustomVocab:
    """Load a CustomVocab from its frequency TSV."""
    entries: list[tuple[str, int]] = []
    for lineno, line in enumerate(
            Path(freq_path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line:
            continue
        try:
            token, count = line.split("\t")
            entries.append((token, int(count)))
        except ValueError as exc:
            raise ValueError(f"{freq_path}:{lineno}: malformed entry") from exc
    return CustomVocab(entries=tuple(entries))
