"""Normalization, tokenization and corpus indexing.

Every line of a corpus file is NFC-composed and lowercased, then split into
tokens.  Tokens carry ``(file_id, line, position)`` coordinates; lines and
positions are 1-based, and punctuation never occupies a position, so the
distance between two tokens is the number of words separating them.
"""

from __future__ import annotations

import unicodedata
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import CorpusError

# Apostrophes (ASCII, right single quote, modifier letter) and hyphens survive
# inside a word; everywhere else they are stripped like other punctuation.
INTERNAL_MARKS = frozenset("'\u2019\u02bc-\u2010")


def normalize(raw: str) -> str:
    """Return `raw` canonically composed (NFC) and lowercased.

    >>> normalize("Ми Тут Працюєм")
    'ми тут працюєм'
    """
    return unicodedata.normalize("NFC", unicodedata.normalize("NFC", raw).lower())


def _is_separator(ch: str) -> bool:
    if ch.isspace():
        return True
    if ch in INTERNAL_MARKS:
        return False
    return unicodedata.category(ch)[0] in "PSC"


def split_words(line: str) -> list[str]:
    """Split a normalized line into word surfaces.

    Whitespace and punctuation separate words; apostrophes and hyphens are
    kept only when both neighbours belong to the same word.
    """
    words = []
    buf: list[str] = []
    for ch in line:
        if _is_separator(ch):
            if buf:
                words.append("".join(buf))
                buf = []
        else:
            buf.append(ch)
    if buf:
        words.append("".join(buf))
    marks = "".join(INTERNAL_MARKS)
    return [w for w in (w.strip(marks) for w in words) if w]


@dataclass(frozen=True)
class Token:
    file_id: str
    line: int
    position: int
    surface: str

    @property
    def char_len(self) -> int:
        # str length is the number of code points, independent of encoding
        return len(self.surface)


@dataclass(frozen=True)
class Document:
    """A corpus file as an ordered tuple of lines (line 1 is ``lines[0]``)."""

    file_id: str
    lines: tuple[str, ...]

    @classmethod
    def from_text(cls, file_id: str, text: str) -> "Document":
        text = text.replace("\r\n", "\n").replace("\r", "\n")
        if text.startswith("\ufeff"):
            text = text[1:]
        lines = text.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        return cls(file_id, tuple(normalize(line) for line in lines))


def tokenize(doc: Document) -> list[Token]:
    tokens = []
    for lineno, line in enumerate(doc.lines, start=1):
        for pos, word in enumerate(split_words(normalize(line)), start=1):
            tokens.append(Token(doc.file_id, lineno, pos, word))
    return tokens


@dataclass(frozen=True)
class CorpusIndex:
    """Tokens grouped by ``(file_id, line)``.

    Groups iterate by file id (lexicographic), then line number.  Lines
    without tokens have no group, but their text is still available through
    :meth:`line_text` for building context.
    """

    documents: dict[str, tuple[str, ...]] = field(default_factory=dict)
    groups: dict[tuple[str, int], tuple[Token, ...]] = field(default_factory=dict)

    @classmethod
    def from_documents(cls, docs: Iterable[Document]) -> "CorpusIndex":
        docs = sorted(docs, key=lambda d: d.file_id)
        seen: set[str] = set()
        for doc in docs:
            if doc.file_id in seen:
                raise ValueError(f"duplicate file id {doc.file_id!r}")
            seen.add(doc.file_id)
        return cls.from_tokens(docs, [tokenize(d) for d in docs])

    @classmethod
    def from_tokens(
        cls, docs: Sequence[Document], token_lists: Sequence[Sequence[Token]]
    ) -> "CorpusIndex":
        documents = {d.file_id: d.lines for d in docs}
        grouped: dict[tuple[str, int], list[Token]] = {}
        for tokens in token_lists:
            for tok in tokens:
                grouped.setdefault((tok.file_id, tok.line), []).append(tok)
        groups = {
            key: tuple(sorted(grouped[key], key=lambda t: t.position))
            for key in sorted(grouped)
        }
        return cls(dict(sorted(documents.items())), groups)

    def __iter__(self) -> Iterator[tuple[tuple[str, int], tuple[Token, ...]]]:
        return iter(self.groups.items())

    def __len__(self) -> int:
        return len(self.groups)

    def tokens(self) -> list[Token]:
        return [tok for group in self.groups.values() for tok in group]

    def line_text(self, file_id: str, line: int) -> str:
        return self.documents[file_id][line - 1]

    def line_count(self, file_id: str) -> int:
        return len(self.documents[file_id])


def read_document(path: str | Path, file_id: str | None = None) -> Document:
    """Read one UTF-8 corpus file; decode errors report the byte offset."""
    path = Path(path)
    file_id = path.as_posix() if file_id is None else file_id
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise CorpusError(str(path), exc.strerror or str(exc)) from exc
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorpusError(str(path), f"invalid UTF-8: {exc.reason}", offset=exc.start) from exc
    return Document.from_text(file_id, text)


def collect_paths(paths: Iterable[str | Path]) -> list[tuple[str, Path]]:
    """Expand files and directories into ``(file_id, path)`` pairs.

    Directories are walked for ``*.txt`` files whose ids are relative to the
    directory; plain files keep the path they were given as their id.
    """
    found = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            for sub in sorted(p.rglob("*.txt")):
                if sub.is_file():
                    found.append((sub.relative_to(p).as_posix(), sub))
        elif p.exists():
            found.append((p.as_posix(), p))
        else:
            raise CorpusError(str(p), "no such file or directory")
    counts = Counter(fid for fid, _ in found)
    dupes = sorted(fid for fid, n in counts.items() if n > 1)
    if dupes:
        raise CorpusError(dupes[0], "file id appears more than once in the input")
    return sorted(found)


def _load(item: tuple[str, Path]) -> tuple[Document, list[Token]]:
    doc = read_document(item[1], item[0])
    return doc, tokenize(doc)


def index_corpus(paths: Iterable[str | Path], workers: int = 1) -> CorpusIndex:
    """Read, normalize and tokenize every file under `paths`.

    With ``workers > 1`` files are loaded in worker processes; the result is
    identical to the sequential one because groups are sorted after merging.
    """
    items = collect_paths(paths)
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            loaded = list(pool.map(_load, items))
    else:
        loaded = [_load(item) for item in items]
    return CorpusIndex.from_tokens([d for d, _ in loaded], [t for _, t in loaded])
