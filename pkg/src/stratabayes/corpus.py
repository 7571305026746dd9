"""Corpus ingestion: split tagged archive files into documents.

Files are read permissively as 8-bit text (latin-1 by default, so every
byte decodes and character offsets equal byte offsets).  Documents are the
regions between configurable open/close markers; the corpus index stores
only spans and metadata, re-reading large document bodies from disk on
demand.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

log = logging.getLogger(__name__)

OPEN_TAG = "<DOC>"
CLOSE_TAG = "</DOC>"

DEFAULT_ENCODING = "latin-1"

# Documents larger than this keep no inline text; the index stays small
# even for a corpus of tens of thousands of documents.
INLINE_TEXT_LIMIT = 65536

SCHEMA_VERSION = 1


@dataclass
class Document:
    """One tagged region of a source file."""

    doc_id: str
    source_file: str
    ordinal: int
    byte_span: tuple[int, int]
    line_count: int
    truncated: bool = False
    encoding: str = DEFAULT_ENCODING
    _text: str | None = field(default=None, repr=False)

    @property
    def text(self) -> str:
        if self._text is None:
            start, end = self.byte_span
            with open(self.source_file, "rb") as fh:
                fh.seek(start)
                raw = fh.read(end - start)
            return raw.decode(self.encoding, errors="replace")
        return self._text

    def first_lines(self, n: int = 50) -> str:
        return "\n".join(self.text.splitlines()[:n])


def make_doc_id(source_file, ordinal: int) -> str:
    return f"{Path(source_file).name}#{ordinal}"


def split_documents(
    raw_text: str,
    source_file,
    open_tag: str = OPEN_TAG,
    close_tag: str = CLOSE_TAG,
    encoding: str = DEFAULT_ENCODING,
) -> list[Document]:
    """Split file text into the regions between open/close markers.

    Matching is literal and case-sensitive.  Text between a close tag and
    the next open tag is ignored.  An unclosed open tag yields a document
    flagged truncated; a stray close tag is skipped.  Both are logged.
    """
    docs: list[Document] = []
    pos = 0
    while True:
        o = raw_text.find(open_tag, pos)
        c = raw_text.find(close_tag, pos)
        if c != -1 and (o == -1 or c < o):
            log.warning(
                "%s: close tag at offset %d with no open document; ignored",
                source_file,
                c,
            )
            pos = c + len(close_tag)
            continue
        if o == -1:
            break
        start = o + len(open_tag)
        c = raw_text.find(close_tag, start)
        ordinal = len(docs)
        if c == -1:
            span = (start, len(raw_text))
            text = raw_text[start:]
            log.warning(
                "%s: open tag at offset %d never closed; emitting truncated document",
                source_file,
                o,
            )
            docs.append(
                Document(
                    doc_id=make_doc_id(source_file, ordinal),
                    source_file=str(source_file),
                    ordinal=ordinal,
                    byte_span=span,
                    line_count=len(text.splitlines()),
                    truncated=True,
                    encoding=encoding,
                    _text=text,
                )
            )
            break
        text = raw_text[start:c]
        docs.append(
            Document(
                doc_id=make_doc_id(source_file, ordinal),
                source_file=str(source_file),
                ordinal=ordinal,
                byte_span=(start, c),
                line_count=len(text.splitlines()),
                encoding=encoding,
                _text=text,
            )
        )
        pos = c + len(close_tag)
    return docs


@dataclass
class Corpus:
    corpus_id: str
    files: list[str]
    documents: list[Document]
    encoding: str = DEFAULT_ENCODING
    open_tag: str = OPEN_TAG
    close_tag: str = CLOSE_TAG

    @property
    def total_count(self) -> int:
        return len(self.documents)

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def get(self, doc_id: str) -> Document:
        doc = self._by_id().get(doc_id)
        if doc is None:
            raise KeyError(f"unknown doc_id {doc_id!r}")
        return doc

    def _by_id(self) -> dict[str, Document]:
        if not hasattr(self, "_index"):
            self._index = {d.doc_id: d for d in self.documents}
        return self._index

    def doc_ids(self) -> list[str]:
        return [d.doc_id for d in self.documents]

    # -- index file ----------------------------------------------------

    def to_json_dict(self) -> dict:
        file_pos = {name: i for i, name in enumerate(self.files)}
        return {
            "schema_version": SCHEMA_VERSION,
            "corpus_id": self.corpus_id,
            "encoding": self.encoding,
            "open_tag": self.open_tag,
            "close_tag": self.close_tag,
            "files": list(self.files),
            "total_count": self.total_count,
            "documents": [
                {
                    "doc_id": d.doc_id,
                    "file": file_pos[d.source_file],
                    "ordinal": d.ordinal,
                    "span": list(d.byte_span),
                    "line_count": d.line_count,
                    "truncated": d.truncated,
                }
                for d in self.documents
            ],
        }

    def save_index(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=1))

    @classmethod
    def load_index(cls, path) -> "Corpus":
        data = json.loads(Path(path).read_text())
        files = data["files"]
        encoding = data.get("encoding", DEFAULT_ENCODING)
        documents = [
            Document(
                doc_id=entry["doc_id"],
                source_file=files[entry["file"]],
                ordinal=entry["ordinal"],
                byte_span=tuple(entry["span"]),
                line_count=entry["line_count"],
                truncated=entry.get("truncated", False),
                encoding=encoding,
            )
            for entry in data["documents"]
        ]
        return cls(
            corpus_id=data["corpus_id"],
            files=files,
            documents=documents,
            encoding=encoding,
            open_tag=data.get("open_tag", OPEN_TAG),
            close_tag=data.get("close_tag", CLOSE_TAG),
        )


def ingest_corpus(
    file_list,
    corpus_id: str | None = None,
    encoding: str = DEFAULT_ENCODING,
    open_tag: str = OPEN_TAG,
    close_tag: str = CLOSE_TAG,
    inline_text_limit: int = INLINE_TEXT_LIMIT,
) -> Corpus:
    """Split every file and concatenate the documents in file order.

    Deterministic: the same file list always produces the same corpus
    metadata and doc ids.  Unreadable files and an empty overall result
    are hard errors.
    """
    files = [str(f) for f in file_list]
    documents: list[Document] = []
    for name in files:
        try:
            raw = Path(name).read_bytes()
        except OSError as exc:
            raise OSError(f"cannot read corpus file {name}: {exc}") from exc
        text = raw.decode(encoding, errors="replace")
        docs = split_documents(
            text, name, open_tag=open_tag, close_tag=close_tag, encoding=encoding
        )
        for doc in docs:
            # Large bodies are re-read from disk via their span on demand.
            if doc._text is not None and len(doc._text) > inline_text_limit:
                doc._text = None
        documents.extend(docs)
    if not documents:
        raise ValueError(f"no documents found in {len(files)} file(s)")
    if corpus_id is None:
        digest = hashlib.sha1("\n".join(Path(f).name for f in files).encode())
        corpus_id = digest.hexdigest()[:12]
    return Corpus(
        corpus_id=corpus_id,
        files=files,
        documents=documents,
        encoding=encoding,
        open_tag=open_tag,
        close_tag=close_tag,
    )
