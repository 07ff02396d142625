"""domainprep: data engineering for low-resource domain adaptation.

Cleans raw extracted text into a pretraining-ready corpus, induces a domain
subword vocabulary, analyzes how a base WordPiece vocabulary fragments it,
splices selected domain terms into unused base-vocabulary slots (with
matching embedding-row surgery), and builds, validates and scores
SQuAD-v1-format question-answering datasets.
"""

from .adaptation import (
    FragmentationRecord,
    RootGroup,
    apply_vocab_surgery,
    classify_words,
    club_roots,
    embedding_surgery,
    fragmentation_report,
    overlap_stat,
    select_candidates,
)
from .bpe import CustomVocab, train_bpe, word_frequencies
from .corpus import (
    CleaningConfig,
    CleaningStats,
    Document,
    RawDocument,
    preprocess_document,
    segment_sentences,
)
from .squad_data import QATableRow, SquadDataset, from_table, parse, serialize
from .squad_eval import EvalReport, evaluate, exact_match, f1, normalize_answer
from .tokenizer import (
    Vocab,
    basic_tokenize,
    detokenize_word,
    load_vocab,
    tokenize,
    wordpiece_tokenize,
)

__version__ = "0.1.0"

__all__ = [
    "CleaningConfig",
    "CleaningStats",
    "CustomVocab",
    "Document",
    "EvalReport",
    "FragmentationRecord",
    "QATableRow",
    "RawDocument",
    "RootGroup",
    "SquadDataset",
    "Vocab",
    "apply_vocab_surgery",
    "basic_tokenize",
    "classify_words",
    "club_roots",
    "detokenize_word",
    "embedding_surgery",
    "evaluate",
    "exact_match",
    "f1",
    "fragmentation_report",
    "from_table",
    "load_vocab",
    "normalize_answer",
    "overlap_stat",
    "parse",
    "preprocess_document",
    "segment_sentences",
    "select_candidates",
    "serialize",
    "tokenize",
    "train_bpe",
    "wordpiece_tokenize",
    "word_frequencies",
]
