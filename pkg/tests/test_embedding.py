import math
import random

import pytest

from tcgen.analyzer import TestCodeBlock
from tcgen.embedding import (
    EmbeddingServiceConfig,
    EmbeddingVector,
    ExternalEmbedder,
    LexicalEmbedder,
    LexicalVocab,
    build_index,
    cosine,
    leakage_exclusion,
    load_index,
    normalize,
    save_index,
    tokenize,
    top_k,
)
from tcgen.errors import AuthError, EmbeddingError, GraphFormatError
from tcgen.transport import RetryPolicy

# Toy corpus values computed once from the documented formula by a standalone
# script (ln((1+N)/(1+df)) + 1 idf, raw tf, L2 norm) and frozen here.
TOY_DOCS = ["Check power enabled", "Verify line disabled", "Check line status"]
TOY_D1_VECTOR = (
    0.4736296010332684,  # check
    0.0,  # disabled
    0.6227660078332259,  # enabled
    0.0,  # line
    0.6227660078332259,  # power
    0.0,  # status
    0.0,  # verify
)
TOY_COS_D1_D2 = 0.0
TOY_COS_D1_D3 = 0.24527198569314443

FIVE_BLOCK_TCBDS = {
    "b1": "Check power enabled",
    "b2": "Check power disabled",
    "b3": "Check power enabled twice",
    "b4": "Verify connection status",
    "b5": "Reset network element",
}
FIVE_BLOCK_COS = {"b2": 0.5234694698561838, "b3": 0.7794399373966557, "b4": 0.0, "b5": 0.0}


def test_tokenizer_splits_camel_case_and_separators():
    assert tokenize("Check powerEnabled on-device") == [
        "check",
        "power",
        "enabled",
        "on",
        "device",
    ]
    assert tokenize("HTTPServer ipv4") == ["http", "server", "ipv4"]
    assert tokenize("") == []


def test_identical_strings_embed_identically():
    emb = LexicalEmbedder.from_corpus(TOY_DOCS)
    a, b = emb.embed("Check power enabled"), emb.embed("Check power enabled")
    assert a == b
    assert cosine(a, b) == pytest.approx(1.0, abs=1e-12)


def test_frozen_toy_vector_and_cosines():
    emb = LexicalEmbedder.from_corpus(TOY_DOCS)
    v1 = emb.embed(TOY_DOCS[0])
    assert v1.values == pytest.approx(TOY_D1_VECTOR, abs=1e-15)
    assert cosine(v1, emb.embed(TOY_DOCS[1])) == pytest.approx(TOY_COS_D1_D2, abs=1e-15)
    assert cosine(v1, emb.embed(TOY_DOCS[2])) == pytest.approx(TOY_COS_D1_D3, abs=1e-15)


def test_norm_is_unit_or_zero():
    emb = LexicalEmbedder.from_corpus(TOY_DOCS)
    for text in TOY_DOCS:
        v = emb.embed(text)
        assert math.sqrt(sum(x * x for x in v.values)) == pytest.approx(1.0, abs=1e-6)


def test_empty_text_gives_flagged_zero_vector():
    emb = LexicalEmbedder.from_corpus(TOY_DOCS)
    v = emb.embed("")
    assert v.is_zero
    assert cosine(v, emb.embed("Check power enabled")) == 0.0


def test_unknown_terms_are_ignored():
    emb = LexicalEmbedder.from_corpus(TOY_DOCS)
    assert emb.embed("Check power enabled zzz qqq") == emb.embed("Check power enabled")


def test_cosine_hand_example():
    a, b = EmbeddingVector((0.6, 0.8)), EmbeddingVector((0.8, 0.6))
    assert cosine(a, b) == pytest.approx(0.96, abs=1e-12)


def test_cosine_orthogonal_and_self():
    e1, e2 = EmbeddingVector((1.0, 0.0)), EmbeddingVector((0.0, 1.0))
    assert cosine(e1, e2) == 0.0
    assert cosine(e1, e1) == 1.0


def test_cosine_dim_mismatch():
    with pytest.raises(EmbeddingError):
        cosine(EmbeddingVector((1.0,)), EmbeddingVector((1.0, 0.0)))


def test_cosine_symmetry_property():
    rng = random.Random(11)
    for _ in range(50):
        a = normalize([rng.uniform(-1, 1) for _ in range(8)])
        b = normalize([rng.uniform(-1, 1) for _ in range(8)])
        assert abs(cosine(a, b) - cosine(b, a)) < 1e-9


def test_scaling_raw_weights_keeps_ordering():
    vocab = LexicalVocab.from_documents(FIVE_BLOCK_TCBDS.values())
    scaled = LexicalVocab(vocab.terms, tuple(3.0 * v for v in vocab.idf))
    base, tripled = LexicalEmbedder(vocab), LexicalEmbedder(scaled)
    blocks = _five_blocks()
    i1 = build_index(blocks, base, include_body_vectors=False)
    i2 = build_index(blocks, tripled, include_body_vectors=False)
    q1, q2 = base.embed(FIVE_BLOCK_TCBDS["b1"]), tripled.embed(FIVE_BLOCK_TCBDS["b1"])
    r1 = [bid for bid, _ in top_k(i1, q1, 4, exclude={"b1"})]
    r2 = [bid for bid, _ in top_k(i2, q2, 4, exclude={"b1"})]
    assert r1 == r2


def _five_blocks():
    return [
        TestCodeBlock(
            block_id=bid,
            tcbd=tcbd,
            body=f'TestBegin("{tcbd}");\nwork();\nTestEnd();',
            owner_method="t.T#m()",
            owner_class="t.T",
            invocations=frozenset(),
            line_count=3,
        )
        for bid, tcbd in FIVE_BLOCK_TCBDS.items()
    ]


def test_top_k_hand_ranked_five_block_corpus():
    index = build_index(_five_blocks())
    query = index.entry("b1").vector
    hits = top_k(index, query, 2, exclude={"b1"})
    assert [bid for bid, _ in hits] == ["b3", "b2"]
    assert hits[0][1] == pytest.approx(FIVE_BLOCK_COS["b3"], abs=1e-12)
    assert hits[1][1] == pytest.approx(FIVE_BLOCK_COS["b2"], abs=1e-12)


def test_top_k_edges():
    index = build_index(_five_blocks())
    query = index.entry("b1").vector
    assert top_k(index, query, 0) == []
    assert len(top_k(index, query, 99, exclude={"b1"})) == 4
    all_hits = top_k(index, query, 99)
    assert all_hits[0] == ("b1", pytest.approx(1.0))


def test_top_k_ties_break_by_block_id():
    index = build_index(_five_blocks())
    query = index.entry("b1").vector
    tail = [bid for bid, score in top_k(index, query, 99, exclude={"b1"}) if score == 0.0]
    assert tail == ["b4", "b5"]


def test_leakage_exclusion_includes_identical_tcbds():
    blocks = _five_blocks()
    twin = TestCodeBlock(
        block_id="b9",
        tcbd=FIVE_BLOCK_TCBDS["b1"],  # byte-identical description
        body="TestBegin(\"Check power enabled\");\nTestEnd();",
        owner_method="t.T#m()",
        owner_class="t.T",
        invocations=frozenset(),
        line_count=2,
    )
    index = build_index(blocks + [twin])
    assert leakage_exclusion(index, "b1") == {"b1", "b9"}


def test_query_never_in_own_topk(corpus_index):
    for entry in corpus_index.entries:
        exclude = leakage_exclusion(corpus_index, entry.block_id)
        hits = top_k(corpus_index, entry.vector, 5, exclude=frozenset(exclude))
        assert entry.block_id not in {bid for bid, _ in hits}


def test_index_round_trip_and_determinism(corpus_index, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    save_index(corpus_index, a)
    save_index(corpus_index, b)
    assert a.read_bytes() == b.read_bytes()
    loaded = load_index(a)
    assert loaded == corpus_index
    assert loaded.query_embedder().embedder_id == corpus_index.embedder_id


def test_index_corrupt_and_version(tmp_path):
    p = tmp_path / "i.json"
    p.write_text("{broken")
    with pytest.raises(GraphFormatError):
        load_index(p)
    p.write_text('{"schema_version": "9.0", "embedder_id": "x", "dim": 0, "entries": []}')
    with pytest.raises(GraphFormatError):
        load_index(p)


def test_duplicate_block_ids_rejected():
    b = _five_blocks()[0]
    with pytest.raises(EmbeddingError):
        build_index([b, b])


# ---------------------------------------------------------------------------
# external embedding service (mock server via patched HTTP)
# ---------------------------------------------------------------------------


class FakeResponse:
    def __init__(self, status_code, payload):
        self.status_code = status_code
        self._payload = payload

    def json(self):
        if isinstance(self._payload, str):
            raise ValueError("not json")
        return self._payload


def service(attempts=3):
    return EmbeddingServiceConfig(
        base_url="https://emb.example/v1/embeddings",
        model="text-emb-1",
        retry=RetryPolicy(max_attempts=attempts, backoff_s=0.0),
    )


def test_external_normalized_passthrough(monkeypatch):
    seen = {}

    def fake_post(url, json=None, timeout=None, headers=None):
        seen["body"] = json
        return FakeResponse(200, {"data": [{"embedding": [3.0, 4.0]}, {"embedding": [0.0, 2.0]}]})

    monkeypatch.setattr("tcgen.transport.requests.post", fake_post)
    vectors = ExternalEmbedder(service()).embed_batch(["first", "second"])
    assert vectors[0].values == pytest.approx((0.6, 0.8))
    assert vectors[1].values == pytest.approx((0.0, 1.0))
    assert seen["body"] == {"model": "text-emb-1", "input": ["first", "second"]}


def test_external_retries_then_succeeds(monkeypatch, caplog):
    calls = {"n": 0}

    def fake_post(url, json=None, timeout=None, headers=None):
        calls["n"] += 1
        if calls["n"] == 1:
            return FakeResponse(503, {"error": "busy"})
        return FakeResponse(200, {"data": [{"embedding": [1.0, 0.0]}, {"embedding": [0.0, 1.0]}]})

    monkeypatch.setattr("tcgen.transport.requests.post", fake_post)
    monkeypatch.setattr("tcgen.transport.time.sleep", lambda s: None)
    with caplog.at_level("INFO", logger="tcgen.embedding"):
        vectors = ExternalEmbedder(service()).embed_batch(["a", "b"])
    assert len(vectors) == 2 and calls["n"] == 2
    assert any("2 attempts" in r.message for r in caplog.records)


def test_external_wrong_dimension_mid_batch(monkeypatch):
    def fake_post(url, json=None, timeout=None, headers=None):
        return FakeResponse(200, {"data": [{"embedding": [1.0, 0.0]}, {"embedding": [1.0]}]})

    monkeypatch.setattr("tcgen.transport.requests.post", fake_post)
    with pytest.raises(EmbeddingError) as err:
        ExternalEmbedder(service()).embed_batch(["a", "b"])
    assert "input 1" in str(err.value)


def test_external_auth_failure_is_fatal(monkeypatch):
    calls = {"n": 0}

    def fake_post(url, json=None, timeout=None, headers=None):
        calls["n"] += 1
        return FakeResponse(401, {"error": "no"})

    monkeypatch.setattr("tcgen.transport.requests.post", fake_post)
    with pytest.raises(AuthError):
        ExternalEmbedder(service()).embed_batch(["a"])
    assert calls["n"] == 1


def test_external_empty_batch():
    with pytest.raises(EmbeddingError):
        ExternalEmbedder(service()).embed_batch([])


def test_external_bearer_token_from_env(monkeypatch):
    seen = {}

    def fake_post(url, json=None, timeout=None, headers=None):
        seen["headers"] = headers
        return FakeResponse(200, {"data": [{"embedding": [1.0]}]})

    monkeypatch.setattr("tcgen.transport.requests.post", fake_post)
    monkeypatch.setenv("EMBEDDING_API_KEY", "sekret")
    ExternalEmbedder(service()).embed_batch(["a"])
    assert seen["headers"]["Authorization"] == "Bearer sekret"
