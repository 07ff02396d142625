"""Vocabulary file I/O and WordPiece-style tokenization.

The vocabulary format is the plain ``vocab.txt`` convention used by
BERT-family models: one token per line, token id = zero-based line index,
continuation pieces prefixed with ``##`` and reserved placeholder slots
written as ``[unusedN]``.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Sequence

PAD = "[PAD]"
UNK = "[UNK]"
CLS = "[CLS]"
SEP = "[SEP]"
MASK = "[MASK]"
SPECIAL_TOKENS = (PAD, UNK, CLS, SEP, MASK)

CONTINUATION_PREFIX = "##"
_UNUSED_RE = re.compile(r"\[unused\d+\]\Z")
_PUNCT = frozenset(string.punctuation)


def is_unused_slot(token: str) -> bool:
    """True for reserved placeholder tokens of the form ``[unusedN]``."""
    return _UNUSED_RE.match(token) is not None


@dataclass(frozen=True)
class Vocab:
    """An ordered subword vocabulary with token -> id lookup.

    ``tokens`` is the id-ordered token list; ``index`` maps each token to its
    id; ``specials`` holds the resolved ids of whichever of the standard
    special tokens are present. ``[UNK]`` is always present.
    """

    tokens: tuple[str, ...]
    index: dict[str, int]
    specials: dict[str, int]

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> "Vocab":
        toks = tuple(tokens)
        if not toks:
            raise ValueError("vocabulary is empty")
        index: dict[str, int] = {}
        for i, tok in enumerate(toks):
            if tok in index:
                raise ValueError(
                    f"duplicate token {tok!r} at lines {index[tok] + 1} and {i + 1}"
                )
            index[tok] = i
        if UNK not in index:
            raise ValueError(f"vocabulary lacks the required {UNK} token")
        specials = {t: index[t] for t in SPECIAL_TOKENS if t in index}
        return cls(tokens=toks, index=index, specials=specials)

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self.index

    @property
    def unk_id(self) -> int:
        return self.index[UNK]

    def unused_slot_ids(self) -> list[int]:
        """Ids of all ``[unusedN]`` placeholder tokens, ascending."""
        return [i for i, t in enumerate(self.tokens) if is_unused_slot(t)]


def load_vocab(source: str | Path | IO[bytes] | IO[str]) -> Vocab:
    """Load a vocab.txt-format vocabulary (one token per line, id = line index).

    Accepts a path or an open text/binary stream. A single trailing newline
    is tolerated; blank token lines, duplicates, a missing [UNK], and empty
    input are errors.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    if not text:
        raise ValueError("vocabulary source is empty")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    tokens: list[str] = []
    for lineno, line in enumerate(lines, start=1):
        token = line.rstrip("\r")
        if not token:
            raise ValueError(f"blank token at line {lineno}")
        tokens.append(token)
    return Vocab.from_tokens(tokens)


def write_vocab(vocab: Vocab, sink: str | Path | IO[str]) -> None:
    """Write a Vocab back to the one-token-per-line format."""
    text = "\n".join(vocab.tokens) + "\n"
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(text, encoding="utf-8")
    else:
        sink.write(text)


def basic_tokenize(text: str, lowercase: bool = True) -> list[str]:
    """Pre-split text into words: whitespace-separated, with every printable
    ASCII punctuation character emitted as its own token."""
    if lowercase:
        text = text.lower()
    out: list[str] = []
    buf: list[str] = []

    def flush() -> None:
        if buf:
            out.append("".join(buf))
            buf.clear()

    for ch in text:
        if ch.isspace():
            flush()
        elif ch in _PUNCT:
            flush()
            out.append(ch)
        else:
            buf.append(ch)
    flush()
    return out


def wordpiece_tokenize(word: str, vocab: Vocab, max_chars: int = 100) -> list[str]:
    """Greedy longest-match-first subword split of a single word.

    Repeatedly takes the longest prefix of the remaining suffix that is in
    the vocabulary (continuation positions are matched with the ``##``
    prefix). If any position has no match, or the word exceeds ``max_chars``,
    the result is exactly ``[UNK]``.
    """
    if len(word) > max_chars:
        return [UNK]
    fragments: list[str] = []
    start = 0
    n = len(word)
    while start < n:
        end = n
        match = None
        while start < end:
            piece = word[start:end]
            if start > 0:
                piece = CONTINUATION_PREFIX + piece
            if piece in vocab.index:
                match = piece
                break
            end -= 1
        if match is None:
            return [UNK]
        fragments.append(match)
        start = end
    return fragments


def tokenize(text: str, vocab: Vocab, lowercase: bool = True,
             max_chars: int = 100) -> list[str]:
    """basic_tokenize followed by wordpiece_tokenize on each word."""
    out: list[str] = []
    for word in basic_tokenize(text, lowercase=lowercase):
        out.extend(wordpiece_tokenize(word, vocab, max_chars=max_chars))
    return out


def detokenize_word(fragments: Sequence[str]) -> str:
    """Reassemble one word from its fragment sequence.

    Raises ValueError when the sequence contains [UNK] or is not shaped like
    a single word's tokenization (initial fragment bare, the rest ##-prefixed).
    """
    if not fragments:
        raise ValueError("empty fragment sequence")
    if UNK in fragments:
        raise ValueError(f"cannot reassemble a sequence containing {UNK}")
    first = fragments[0]
    if first.startswith(CONTINUATION_PREFIX):
        raise ValueError(f"initial fragment {first!r} must not carry '##'")
    parts = [first]
    for frag in fragments[1:]:
        if not frag.startswith(CONTINUATION_PREFIX):
            raise ValueError(f"non-initial fragment {frag!r} lacks '##'")
        parts.append(frag[len(CONTINUATION_PREFIX):])
    return "".join(parts)
