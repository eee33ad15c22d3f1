"""Dataset loaders: dense CSV and UCI bag-of-words (docword + vocab)."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CapacityExceeded, InvalidInput, ParseError
from .linalg import as_square, gram_from_data

DENSE_BUDGET = 10**7
DATA = "data"
PSD = "psd"


@dataclass
class Dataset:
    """A named data matrix (n x d) or covariance (d x d) with optional labels.

    ``kind`` is ``"data"`` for sample-by-feature matrices and ``"psd"`` for
    matrices used directly as the covariance.
    """

    name: str
    matrix: np.ndarray
    kind: str = DATA
    vocabulary: list | None = None
    provenance: dict = field(default_factory=dict)
    center_default: bool = True

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        if self.kind not in (DATA, PSD):
            raise InvalidInput(f"unknown dataset kind {self.kind!r}")
        if self.vocabulary is not None and len(self.vocabulary) != self.dim:
            raise InvalidInput(f"vocabulary has {len(self.vocabulary)} entries for {self.dim} variables")

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def covariance(self, center: bool | None = None) -> np.ndarray:
        """Covariance used by the solvers; ``center=None`` picks the dataset default."""
        if self.kind == PSD:
            return as_square(self.matrix)
        if center is None:
            center = self.center_default
        return gram_from_data(self.matrix, center=center)


def load_dense_csv(path, has_header: bool = False, kind: str = DATA) -> Dataset:
    """Read a comma-separated numeric matrix.

    Blank lines are skipped. Line and column numbers in errors are 1-based.
    """
    path = Path(path)
    rows = []
    vocab = None
    width = None
    with open(path, newline="") as fh:
        for lineno, cells in enumerate(csv.reader(fh), start=1):
            if not cells or all(not c.strip() for c in cells):
                continue
            if has_header and vocab is None:
                vocab = [c.strip() for c in cells]
                width = len(vocab)
                continue
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise ParseError(f"expected {width} fields, found {len(cells)}", line=lineno)
            row = []
            for col, c in enumerate(cells, start=1):
                try:
                    row.append(float(c))
                except ValueError:
                    raise ParseError(f"non-numeric cell {c.strip()!r}", line=lineno, col=col) from None
            rows.append(row)
    if not rows:
        raise ParseError("no data rows", line=1)
    M = np.array(rows, dtype=float)
    if not np.all(np.isfinite(M)):
        raise InvalidInput("CSV contains non-finite values")
    return Dataset(path.stem, M, kind, vocab, {"path": str(path), "format": "csv"}, center_default=True)


def _header_int(fh, lineno, label):
    line = fh.readline()
    try:
        return int(line.strip())
    except ValueError:
        raise ParseError(f"expected integer {label} header", line=lineno, col=1) from None


def load_uci_bow(docword_path, vocab_path=None, budget: int = DENSE_BUDGET) -> Dataset:
    """Read a UCI docword file (header D, W, NNZ then 1-indexed ``doc word count`` lines).

    The documents x words count matrix is materialized densely. Cooccurrence
    inputs are not centered by default.
    """
    docword_path = Path(docword_path)
    with open(docword_path) as fh:
        n = _header_int(fh, 1, "D")
        d = _header_int(fh, 2, "W")
        nnz = _header_int(fh, 3, "NNZ")
        if n < 1 or d < 1 or nnz < 0:
            raise ParseError("header sizes must be positive", line=1)
        if n * d > budget:
            raise CapacityExceeded(f"{n} x {d} dense matrix exceeds {budget} entries", count=n * d)
        M = np.zeros((n, d))
        seen = 0
        for lineno, line in enumerate(fh, start=4):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 3:
                raise ParseError(f"expected 3 fields, found {len(parts)}", line=lineno)
            try:
                doc, word = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError("non-integer id", line=lineno) from None
            try:
                count = float(parts[2])
            except ValueError:
                raise ParseError(f"non-numeric count {parts[2]!r}", line=lineno, col=3) from None
            if not 1 <= doc <= n:
                raise ParseError(f"docID {doc} outside 1..{n}", line=lineno, col=1)
            if not 1 <= word <= d:
                raise ParseError(f"wordID {word} outside 1..{d}", line=lineno, col=2)
            M[doc - 1, word - 1] += count
            seen += 1
    if seen != nnz:
        raise ParseError(f"header declares {nnz} entries, found {seen}", line=3)
    vocab = None
    if vocab_path is not None:
        with open(vocab_path) as fh:
            vocab = [w.strip() for w in fh if w.strip()]
        if len(vocab) != d:
            raise ParseError(f"vocabulary has {len(vocab)} words, header declares {d}", line=len(vocab))
    prov = {"path": str(docword_path), "format": "uci-bow"}
    if vocab_path is not None:
        prov["vocab"] = str(vocab_path)
    return Dataset(docword_path.stem, M, DATA, vocab, prov, center_default=False)


def synthetic_counts(n: int = 200, d: int = 50, topics: int = 5, seed: int = 0) -> Dataset:
    """Seeded document x word count matrix with planted topics.

    Each topic owns a block of ``d // topics`` words; documents draw Poisson
    counts from one or two topics plus light background noise.
    """
    rng = np.random.default_rng(seed)
    block = d // topics
    rates = np.full((topics, d), 0.05)
    for t in range(topics):
        w = rng.gamma(2.0, 1.0, size=block)
        rates[t, t * block:(t + 1) * block] += 3.0 * w / w.max()
    mix = rng.dirichlet(np.full(topics, 0.3), size=n)
    counts = rng.poisson(mix @ rates * 4.0).astype(float)
    vocab = [f"w{j:02d}" for j in range(d)]
    return Dataset(f"synthetic-{n}x{d}-s{seed}", counts, DATA, vocab,
                   {"format": "synthetic", "seed": seed}, center_default=False)
