"""Raw-text cleaning and pretraining-corpus emission.

Turns page-wise extracted text into documents of clean, printable-ASCII
sentences and writes them in the one-sentence-per-line / blank-line-between-
documents layout that masked-LM pretraining readers expect.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Sequence

PAGE_SEPARATOR = "\x0c"

DEFAULT_ABBREVIATIONS = ("et al.", "e.g.", "i.e.", "Fig.", "Eq.", "Dr.", "No.", "vs.")

# Characters whose density marks a line as formula-like.
MATH_CHARS = frozenset("=+<>/^~|\\*_")

# Bracketed numeric citations: [12], [1, 2, 3], [4-7] (mixed forms included).
_BRACKET_CITATION = re.compile(r"\s*\[\d+(?:\s*[,-]\s*\d+)*\]")

# Parenthetical author-year citations: (Name, 1972), (Name and Name, 1972),
# (Name et al., 1972). Years restricted to 1900-2099.
_NAME = r"[A-Z][A-Za-z'.\-]*"
_AUTHOR_YEAR_CITATION = re.compile(
    r"\s*\(\s*" + _NAME +
    r"(?:\s+(?:and|&)\s+" + _NAME + r"|\s+et\s+al\.?)?"
    r"\s*,\s*(?:19|20)\d{2}\s*\)"
)

_MULTISPACE = re.compile(r" {2,}")


@dataclass
class RawDocument:
    """Extracted text of one source document, one string per page."""

    id: str
    pages: list[str]


@dataclass
class Document:
    """A cleaned document: non-empty single-line ASCII sentences."""

    id: str
    sentences: list[str]


@dataclass
class CleaningStats:
    """Counters accumulated by the cleaning pipeline; merging is commutative."""

    lines_in: int = 0
    lines_dropped_non_ascii: int = 0
    lines_dropped_formula: int = 0
    citations_removed: int = 0
    pages_dropped: int = 0
    warnings: list[str] = field(default_factory=list)

    def add(self, other: "CleaningStats") -> None:
        self.lines_in += other.lines_in
        self.lines_dropped_non_ascii += other.lines_dropped_non_ascii
        self.lines_dropped_formula += other.lines_dropped_formula
        self.citations_removed += other.citations_removed
        self.pages_dropped += other.pages_dropped
        self.warnings.extend(other.warnings)

    def to_dict(self) -> dict:
        return {
            "lines_in": self.lines_in,
            "lines_dropped_non_ascii": self.lines_dropped_non_ascii,
            "lines_dropped_formula": self.lines_dropped_formula,
            "citations_removed": self.citations_removed,
            "pages_dropped": self.pages_dropped,
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class CleaningConfig:
    """Tunables of the cleaning pipeline."""

    formula_density_threshold: float = 0.15
    formula_equals_limit: int = 2
    abbreviations: tuple[str, ...] = DEFAULT_ABBREVIATIONS


def drop_reference_pages(doc: RawDocument,
                         stats: CleaningStats | None = None) -> RawDocument:
    """Remove the trailing two pages (reference pages live there).

    Documents with two or fewer pages are returned unchanged, with a warning
    recorded, so that tiny documents are never emptied outright.
    """
    if len(doc.pages) <= 2:
        if stats is not None:
            stats.warnings.append(
                f"document {doc.id!r}: only {len(doc.pages)} page(s), "
                "reference-page dropping skipped"
            )
        return doc
    if stats is not None:
        stats.pages_dropped += 2
    return RawDocument(id=doc.id, pages=doc.pages[:-2])


def strip_citations(text: str) -> tuple[str, int]:
    """Remove in-text citations from one line; returns (line, removal count).

    Handles bracketed numeric forms and parenthetical author-year forms.
    Whitespace immediately before a citation is removed with it, and any
    doubled spaces left behind are collapsed.
    """
    count = 0

    def _drop(match: re.Match) -> str:
        nonlocal count
        count += 1
        return ""

    text = _BRACKET_CITATION.sub(_drop, text)
    text = _AUTHOR_YEAR_CITATION.sub(_drop, text)
    if count:
        text = _MULTISPACE.sub(" ", text)
    return text, count


def is_formula_line(line: str, config: CleaningConfig | None = None) -> bool:
    """Decide whether a line is formula-like and should be dropped.

    A line is dropped when its math-symbol density (count of MATH_CHARS over
    non-space characters) exceeds the configured threshold, or when it
    contains at least ``formula_equals_limit`` '=' characters.
    """
    config = config or CleaningConfig()
    if line.count("=") >= config.formula_equals_limit:
        return True
    non_space = [c for c in line if not c.isspace()]
    if not non_space:
        return False
    math = sum(1 for c in non_space if c in MATH_CHARS)
    return math / len(non_space) > config.formula_density_threshold


def is_printable_ascii(line: str) -> bool:
    """True when every character is printable ASCII (32-126) or a tab."""
    return all(32 <= ord(c) <= 126 or c == "\t" for c in line)


def filter_non_ascii_lines(lines: Iterable[str]) -> tuple[list[str], int]:
    """Keep only printable-ASCII lines; returns (kept lines, dropped count)."""
    kept: list[str] = []
    dropped = 0
    for line in lines:
        if is_printable_ascii(line):
            kept.append(line)
        else:
            dropped += 1
    return kept, dropped


def _ends_with_abbreviation(text: str, dot_index: int,
                            abbreviations: Sequence[str]) -> bool:
    for abbrev in abbreviations:
        if not abbrev.endswith("."):
            continue
        start = dot_index + 1 - len(abbrev)
        if start < 0:
            continue
        if text[start:dot_index + 1] != abbrev:
            continue
        if start == 0 or not text[start - 1].isalnum():
            return True
    return False


def segment_sentences(text: str,
                      abbreviations: Sequence[str] = DEFAULT_ABBREVIATIONS
                      ) -> list[str]:
    """Split cleaned text into sentences.

    A boundary is '.', '!' or '?' followed by whitespace and then an
    uppercase letter or digit, except when the terminator closes one of the
    configured abbreviations. Output sentences are whitespace-normalized and
    non-empty.
    """
    sentences: list[str] = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in ".!?":
            k = i + 1
            while k < n and text[k].isspace():
                k += 1
            follows_gap = k > i + 1
            if follows_gap and k < n and (text[k].isupper() or text[k].isdigit()):
                if ch != "." or not _ends_with_abbreviation(text, i, abbreviations):
                    sentences.append(text[start:i + 1])
                    start = k
                    i = k
                    continue
        i += 1
    sentences.append(text[start:])
    normalized = [" ".join(s.split()) for s in sentences]
    return [s for s in normalized if s]


def preprocess_document(doc: RawDocument,
                        config: CleaningConfig | None = None
                        ) -> tuple[Document, CleaningStats]:
    """Run the full cleaning pipeline on one document.

    Order: reference-page dropping, page concatenation, per-line citation
    stripping, formula-line dropping, non-ASCII-line dropping, sentence
    segmentation. Every line is either kept or dropped by exactly one filter,
    so ``lines_in == kept + lines_dropped_formula + lines_dropped_non_ascii``.
    """
    config = config or CleaningConfig()
    stats = CleaningStats()
    trimmed = drop_reference_pages(doc, stats)
    lines = "\n".join(trimmed.pages).split("\n") if trimmed.pages else []
    stats.lines_in = len(lines)
    kept: list[str] = []
    for line in lines:
        line, n_cites = strip_citations(line)
        stats.citations_removed += n_cites
        if is_formula_line(line, config):
            stats.lines_dropped_formula += 1
        elif not is_printable_ascii(line):
            stats.lines_dropped_non_ascii += 1
        else:
            kept.append(line)
    sentences = segment_sentences("\n".join(kept), config.abbreviations)
    if not sentences:
        stats.warnings.append(f"document {doc.id!r}: no sentences after cleaning")
    return Document(id=doc.id, sentences=sentences), stats


def preprocess_corpus(docs: Iterable[RawDocument],
                      config: CleaningConfig | None = None
                      ) -> tuple[list[Document], CleaningStats]:
    """preprocess_document over a batch, with summed stats."""
    total = CleaningStats()
    out: list[Document] = []
    for doc in docs:
        cleaned, stats = preprocess_document(doc, config)
        out.append(cleaned)
        total.add(stats)
    return out, total


def render_pretrain_corpus(docs: Iterable[Document]) -> str:
    """One sentence per line, one blank line between documents, no trailing
    blank line. Documents without sentences have no representation in this
    layout and are skipped."""
    blocks = ["\n".join(d.sentences) for d in docs if d.sentences]
    return "\n\n".join(blocks)


def emit_pretrain_corpus(docs: Sequence[Document], sink: IO[str]) -> None:
    """Write the pretraining layout to an open text sink.

    Write failures are re-raised as OSError naming the document being
    written at the time.
    """
    first = True
    for doc in docs:
        if not doc.sentences:
            continue
        try:
            if not first:
                sink.write("\n\n")
            sink.write("\n".join(doc.sentences))
        except OSError as exc:
            raise OSError(
                f"failed writing corpus for document {doc.id!r}: {exc}"
            ) from exc
        first = False


def parse_pretrain_corpus(text: str) -> list[list[str]]:
    """Inverse of render_pretrain_corpus: sentence lists per document."""
    if not text:
        return []
    return [block.split("\n") for block in text.split("\n\n")]


def read_raw_documents(directory: str | Path) -> list[RawDocument]:
    """Load every ``*.txt`` file in a directory as one RawDocument.

    The document id is the file stem; a form-feed character inside the file
    separates pages. Files are taken in sorted name order.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"corpus directory not found: {directory}")
    docs: list[RawDocument] = []
    for path in sorted(directory.glob("*.txt")):
        text = path.read_text(encoding="utf-8")
        docs.append(RawDocument(id=path.stem, pages=text.split(PAGE_SEPARATOR)))
    return docs
