"""Vectors over step descriptions and exact cosine top-k search.

The built-in embedder is deterministic lexical TF-IDF: lowercase, split on
non-alphanumerics and camelCase boundaries, weight each term by
ln((1+N)/(1+df)) + 1 over the corpus's descriptions, L2-normalize. A client
for an external embedding service (the prevailing JSON wire format) restores
fidelity to learned embedders where one is available; retrieval itself is an
exact scan, which is plenty at thousands of blocks.
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Protocol

from .analyzer import TestCodeBlock
from .errors import EmbeddingError, GraphFormatError, NotFoundError
from .transport import EMBEDDING_API_KEY_VAR, RetryPolicy, bearer_headers, post_json, retry_call

log = logging.getLogger(__name__)

INDEX_SCHEMA_VERSION = "1.0"

_TOKEN = re.compile(r"[A-Z]+(?![a-z])|[A-Z][a-z0-9]*|[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    return [t.lower() for t in _TOKEN.findall(text)]


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.values)

    @property
    def is_zero(self) -> bool:
        return all(v == 0.0 for v in self.values)


def normalize(values: Iterable[float]) -> EmbeddingVector:
    vals = tuple(float(v) for v in values)
    norm = math.sqrt(sum(v * v for v in vals))
    if norm == 0.0:
        return EmbeddingVector(vals)  # zero stays zero; is_zero flags it
    return EmbeddingVector(tuple(v / norm for v in vals))


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    if a.dim != b.dim:
        raise EmbeddingError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.is_zero or b.is_zero:
        log.debug("cosine against a zero vector defined as 0.0")
        return 0.0
    return sum(x * y for x, y in zip(a.values, b.values))


@dataclass(frozen=True)
class LexicalVocab:
    """Sorted corpus terms with their inverse document frequencies."""

    terms: tuple[str, ...]
    idf: tuple[float, ...]

    @classmethod
    def from_documents(cls, docs: Iterable[str]) -> "LexicalVocab":
        doc_tokens = [set(tokenize(d)) for d in docs]
        n = len(doc_tokens)
        terms = sorted({t for toks in doc_tokens for t in toks})
        idf = tuple(
            math.log((1 + n) / (1 + sum(1 for toks in doc_tokens if t in toks))) + 1.0
            for t in terms
        )
        return cls(terms=tuple(terms), idf=idf)

    @property
    def digest(self) -> str:
        blob = json.dumps([self.terms, [repr(v) for v in self.idf]]).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


class Embedder(Protocol):  # pragma: no cover - typing aid
    embedder_id: str

    def embed(self, text: str) -> EmbeddingVector: ...


class LexicalEmbedder:
    def __init__(self, vocab: LexicalVocab):
        self.vocab = vocab
        self._index = {t: i for i, t in enumerate(vocab.terms)}
        self.embedder_id = f"lexical-tfidf-v1:{len(vocab.terms)}d:{vocab.digest}"

    @classmethod
    def from_corpus(cls, docs: Iterable[str]) -> "LexicalEmbedder":
        return cls(LexicalVocab.from_documents(docs))

    def embed(self, text: str) -> EmbeddingVector:
        weights = [0.0] * len(self.vocab.terms)
        for tok in tokenize(text):
            i = self._index.get(tok)
            if i is not None:  # unknown terms are ignored
                weights[i] += self.vocab.idf[i]
        vec = normalize(weights)
        if vec.is_zero:
            log.warning("text embedded to the zero vector: %r", text[:60])
        return vec


@dataclass(frozen=True)
class EmbeddingServiceConfig:
    base_url: str
    model: str
    timeout_s: float = 30.0
    retry: RetryPolicy = field(default_factory=RetryPolicy)
    dim: int | None = None  # enforced when known


class ExternalEmbedder:
    """Client for an embeddings endpoint: request {model, input: [...]},
    response {data: [{embedding: [...]}]}; bearer token from the environment."""

    def __init__(self, config: EmbeddingServiceConfig):
        self.config = config
        self.embedder_id = f"external:{config.model}"

    def embed(self, text: str) -> EmbeddingVector:
        return self.embed_batch([text])[0]

    def embed_batch(self, texts: list[str]) -> list[EmbeddingVector]:
        if not texts:
            raise EmbeddingError("empty embedding batch")
        body = {"model": self.config.model, "input": list(texts)}

        def send() -> tuple[int, object]:
            return post_json(
                self.config.base_url,
                body,
                self.config.timeout_s,
                headers=bearer_headers(EMBEDDING_API_KEY_VAR),
            )

        payload, attempts = retry_call(send, self.config.retry)
        if attempts > 1:
            log.info("embedding batch succeeded after %d attempts", attempts)
        try:
            rows = payload["data"]
            raw = [row["embedding"] for row in rows]
        except (TypeError, KeyError) as exc:
            raise EmbeddingError(f"malformed embedding response: {exc!r}")
        if len(raw) != len(texts):
            raise EmbeddingError(f"expected {len(texts)} vectors, got {len(raw)}")
        want = self.config.dim if self.config.dim is not None else len(raw[0])
        for i, values in enumerate(raw):
            if len(values) != want:
                raise EmbeddingError(
                    f"dimension mismatch at input {i}: expected {want}, got {len(values)}"
                )
        return [normalize(values) for values in raw]


def embed_external(texts: list[str], endpoint: EmbeddingServiceConfig) -> list[EmbeddingVector]:
    return ExternalEmbedder(endpoint).embed_batch(texts)


# ---------------------------------------------------------------------------
# Index
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IndexEntry:
    block_id: str
    tcbd: str
    vector: EmbeddingVector
    body_vector: EmbeddingVector | None = None  # stored for parity, unused by search


@dataclass
class VectorIndex:
    embedder_id: str
    dim: int
    entries: list[IndexEntry] = field(default_factory=list)
    lexical_vocab: LexicalVocab | None = None

    def entry(self, block_id: str) -> IndexEntry:
        for e in self.entries:
            if e.block_id == block_id:
                return e
        raise NotFoundError(f"block not in index: {block_id}")

    def query_embedder(self) -> LexicalEmbedder:
        if self.lexical_vocab is None:
            raise EmbeddingError(
                "index was built with an external embedder; configure it for queries"
            )
        return LexicalEmbedder(self.lexical_vocab)


def build_index(
    blocks: Iterable[TestCodeBlock],
    embedder: LexicalEmbedder | ExternalEmbedder | None = None,
    include_body_vectors: bool = True,
) -> VectorIndex:
    """Embed each block's description (and, by default, its body) into a
    deterministic index sorted by block id."""
    ordered = sorted(blocks, key=lambda b: b.block_id)
    seen = {b.block_id for b in ordered}
    if len(seen) != len(ordered):
        raise EmbeddingError("duplicate block ids in index input")
    if embedder is None:
        embedder = LexicalEmbedder.from_corpus(b.tcbd for b in ordered)
    entries = [
        IndexEntry(
            block_id=b.block_id,
            tcbd=b.tcbd,
            vector=embedder.embed(b.tcbd),
            body_vector=embedder.embed(b.body) if include_body_vectors else None,
        )
        for b in ordered
    ]
    dim = entries[0].vector.dim if entries else 0
    vocab = embedder.vocab if isinstance(embedder, LexicalEmbedder) else None
    return VectorIndex(
        embedder_id=embedder.embedder_id, dim=dim, entries=entries, lexical_vocab=vocab
    )


def top_k(
    index: VectorIndex,
    query_vector: EmbeddingVector,
    k: int,
    exclude: frozenset[str] | set[str] = frozenset(),
) -> list[tuple[str, float]]:
    """Exact scan: descending score, ties broken by ascending block id."""
    if k <= 0:
        return []
    scored = [
        (e.block_id, cosine(query_vector, e.vector))
        for e in index.entries
        if e.block_id not in exclude
    ]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:k]


def leakage_exclusion(index: VectorIndex, block_id: str) -> set[str]:
    """The query block plus every block with a byte-identical description."""
    tcbd = index.entry(block_id).tcbd
    return {e.block_id for e in index.entries if e.block_id == block_id or e.tcbd == tcbd}


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def save_index(index: VectorIndex, path: str | Path) -> None:
    doc = {
        "schema_version": INDEX_SCHEMA_VERSION,
        "embedder_id": index.embedder_id,
        "dim": index.dim,
        "entries": [
            {
                "block_id": e.block_id,
                "tcbd": e.tcbd,
                "values": list(e.vector.values),
                "body_values": list(e.body_vector.values) if e.body_vector else None,
            }
            for e in index.entries
        ],
        "lexical_vocab": (
            {"terms": list(index.lexical_vocab.terms), "idf": list(index.lexical_vocab.idf)}
            if index.lexical_vocab
            else None
        ),
    }
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def load_index(path: str | Path) -> VectorIndex:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise NotFoundError(f"index file not found: {path}")
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise GraphFormatError(f"corrupt index file {path}: {exc}")
    if not isinstance(doc, dict) or "schema_version" not in doc:
        raise GraphFormatError(f"corrupt index file {path}: missing schema_version")
    major = str(doc["schema_version"]).split(".")[0]
    if not major.isdigit() or int(major) > int(INDEX_SCHEMA_VERSION.split(".")[0]):
        raise GraphFormatError(f"unsupported index schema_version {doc['schema_version']}")
    try:
        vocab = None
        if doc.get("lexical_vocab"):
            vocab = LexicalVocab(
                terms=tuple(doc["lexical_vocab"]["terms"]),
                idf=tuple(doc["lexical_vocab"]["idf"]),
            )
        entries = [
            IndexEntry(
                block_id=e["block_id"],
                tcbd=e["tcbd"],
                vector=EmbeddingVector(tuple(e["values"])),
                body_vector=(
                    EmbeddingVector(tuple(e["body_values"])) if e.get("body_values") else None
                ),
            )
            for e in doc["entries"]
        ]
        return VectorIndex(
            embedder_id=doc["embedder_id"], dim=doc["dim"], entries=entries, lexical_vocab=vocab
        )
    except (KeyError, TypeError) as exc:
        raise GraphFormatError(f"corrupt index file {path}: {exc!r}")
