"""Suffix-array index over a sentence-segmented corpus.

The corpus is sorted once (suffix array by prefix doubling) and queried by
binary search. Positions are Unicode code points, never bytes, so a match
cannot split a multi-byte character.
"""

from __future__ import annotations

import bisect
import os
import struct
import tempfile
import unicodedata
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SENTENCE_SEPARATORS = frozenset("。！？\n")
MAGIC = b"VELIDX01"
_MAGIC_PREFIX = b"VELIDX"


class CorpusDecodeError(ValueError):
    def __init__(self, offset: int, reason: str):
        super().__init__(f"invalid UTF-8 at byte offset {offset}: {reason}")
        self.offset = offset


class IndexLoadError(Exception):
    """Base class for index file errors."""


class IndexFormatError(IndexLoadError):
    """The file is not an index file (bad magic) or is internally inconsistent."""


class IndexVersionError(IndexLoadError):
    """Index file from an unsupported format version."""


class IndexTruncatedError(IndexLoadError):
    """The file ends before the declared content."""


@dataclass(frozen=True)
class Occurrence:
    sentence_index: int
    match_start: int
    match_end: int
    latter_part: str


def trim_latter(s: str) -> str:
    """Strip surrounding whitespace and trailing punctuation."""
    s = s.strip()
    end = len(s)
    while end and (s[end - 1].isspace() or unicodedata.category(s[end - 1]).startswith("P")):
        end -= 1
    return s[:end]


def split_sentences(text: str) -> list[tuple[int, int]]:
    bounds = []
    start = 0
    for i, ch in enumerate(text):
        if ch in SENTENCE_SEPARATORS:
            if i > start:
                bounds.append((start, i))
            start = i + 1
    if len(text) > start:
        bounds.append((start, len(text)))
    return bounds


def suffix_array(text: str) -> np.ndarray:
    """Suffix array over code points by prefix doubling, O(n log^2 n)."""
    n = len(text)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    codes = np.frombuffer(text.encode("utf-32-le"), dtype=np.uint32).astype(np.int64)
    # dense ranks of single characters
    _, rank = np.unique(codes, return_inverse=True)
    rank = rank.astype(np.int64)
    sa = np.argsort(rank, kind="stable")
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        sa = np.lexsort((second, rank))
        r1, r2 = rank[sa], second[sa]
        changed = np.empty(n, dtype=bool)
        changed[0] = False
        changed[1:] = (r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1])
        new_rank = np.empty(n, dtype=np.int64)
        new_rank[sa] = np.cumsum(changed)
        rank = new_rank
        if rank[sa[-1]] == n - 1 or k >= n:
            break
        k *= 2
    return sa


class CorpusIndex:
    """Immutable after construction; safe for concurrent readers."""

    def __init__(self, text: str, sentence_bounds: list[tuple[int, int]], sa: np.ndarray):
        self.text = text
        self.sentence_bounds = list(sentence_bounds)
        self.suffix_array = np.asarray(sa, dtype=np.int64)
        self._starts = [b[0] for b in self.sentence_bounds]
        self._sa_list = self.suffix_array.tolist()

    def __len__(self) -> int:
        return len(self.text)

    @property
    def n_sentences(self) -> int:
        return len(self.sentence_bounds)

    def sentence(self, i: int) -> str:
        a, b = self.sentence_bounds[i]
        return self.text[a:b]

    def find(self, pattern: str) -> list[int]:
        """All start positions of `pattern` in the text, ascending."""
        m = len(pattern)
        if m == 0 or m > len(self.text):
            return []
        text = self.text
        key = lambda i: text[i:i + m]  # noqa: E731
        lo = bisect.bisect_left(self._sa_list, pattern, key=key)
        hi = bisect.bisect_right(self._sa_list, pattern, lo=lo, key=key)
        return sorted(self._sa_list[lo:hi])

    def count(self, pattern: str) -> int:
        return len(self.find(pattern))

    def occurrences(self, pattern: str) -> list[Occurrence]:
        """Occurrences lying wholly inside one sentence span."""
        m = len(pattern)
        out = []
        for pos in self.find(pattern):
            si = bisect.bisect_right(self._starts, pos) - 1
            if si < 0:
                continue
            a, b = self.sentence_bounds[si]
            if pos + m > b:
                continue
            out.append(Occurrence(si, pos - a, pos + m - a, trim_latter(self.text[pos + m:b])))
        return out

    def longest_suffix_matches(
        self, query: str, min_len: int = 2, max_window: int = 30
    ) -> tuple[int, list[Occurrence]]:
        """Longest suffix of the query's final window found inside a corpus sentence."""
        if min_len < 1:
            raise ValueError("min_len must be >= 1")
        window = query[-max_window:] if max_window < len(query) else query
        for k in range(len(window), min_len - 1, -1):
            occs = self.occurrences(window[len(window) - k:])
            if occs:
                return k, occs
        return 0, []


def build_index(corpus: str) -> CorpusIndex:
    return CorpusIndex(corpus, split_sentences(corpus), suffix_array(corpus))


def decode_corpus(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusDecodeError(exc.start, exc.reason) from exc


def build_index_from_file(path: str | os.PathLike) -> CorpusIndex:
    return build_index(decode_corpus(Path(path).read_bytes()))


def latter_part_frequencies(occs: list[Occurrence]) -> Counter[str]:
    return Counter(t for t in (trim_latter(o.latter_part) for o in occs) if t)


def save_index(idx: CorpusIndex, path: str | os.PathLike) -> None:
    """Write the index atomically (temp file, then rename)."""
    raw = idx.text.encode("utf-8")
    bounds = np.asarray(idx.sentence_bounds, dtype="<u4").reshape(-1)
    parts = [
        MAGIC,
        struct.pack("<I", len(raw)),
        raw,
        struct.pack("<I", idx.n_sentences),
        bounds.tobytes(),
        idx.suffix_array.astype("<u4").tobytes(),
    ]
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            for part in parts:
                fh.write(part)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_index(path: str | os.PathLike) -> CorpusIndex:
    data = Path(path).read_bytes()
    head = data[: len(MAGIC)]
    if head != MAGIC:
        if len(head) < len(MAGIC) and MAGIC.startswith(head):
            raise IndexTruncatedError("file ends inside the magic header")
        if head.startswith(_MAGIC_PREFIX):
            raise IndexVersionError(f"unsupported index version {head[6:]!r}")
        raise IndexFormatError("bad magic; not a VELIDX index file")
    off = len(MAGIC)

    def take(nbytes: int, what: str) -> bytes:
        nonlocal off
        if off + nbytes > len(data):
            raise IndexTruncatedError(f"file truncated while reading {what}")
        chunk = data[off:off + nbytes]
        off += nbytes
        return chunk

    (nbytes,) = struct.unpack("<I", take(4, "text length"))
    try:
        text = take(nbytes, "text").decode("utf-8")
    except UnicodeDecodeError as exc:
        raise IndexFormatError(f"corrupt text section at byte {exc.start}") from exc
    (nsent,) = struct.unpack("<I", take(4, "sentence count"))
    bounds = np.frombuffer(take(8 * nsent, "sentence bounds"), dtype="<u4").reshape(-1, 2)
    sa = np.frombuffer(take(4 * len(text), "suffix array"), dtype="<u4").astype(np.int64)
    if off != len(data):
        raise IndexFormatError(f"{len(data) - off} trailing bytes after suffix array")
    if len(text) and not np.array_equal(np.sort(sa), np.arange(len(text))):
        raise IndexFormatError("suffix array is not a permutation of text positions")
    return CorpusIndex(text, [(int(a), int(b)) for a, b in bounds], sa)
