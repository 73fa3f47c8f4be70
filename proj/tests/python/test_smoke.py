"""Smoke tests for the _reta extension module."""

import math

import pytest

import _reta


def test_tokenizer_round_trip():
    tok = _reta.WordTokenizer()
    tokens = tok.tokenize("ORR (52%) in DLBCL.")
    assert tokens == ["ORR", "(", "52", "%", ")", "in", "DLBCL", "."]
    assert tok.detokenize(tokens) == "ORR ( 52 % ) in DLBCL ."
    assert _reta.count_tokens("one two three") == 3


def test_segmentation():
    body = " ".join(["word"] * 25)
    segments = _reta.segment_document("PMC1", body, max_tokens=10)
    assert [s.token_count for s in segments] == [10, 10, 5]
    assert all(s.pmc_id == "PMC1" for s in segments)
    assert [s.index for s in segments] == [0, 1, 2]


def test_preprocess_filters_noise():
    xml = (
        "<article><body>"
        "<p>Keep me.</p>"
        "<fig><caption><p>DROP_ME</p></caption></fig>"
        "<p>Keep me too.</p>"
        "</body></article>"
    )
    doc = _reta.preprocess("PMC2", xml)
    assert doc.body == "Keep me.\n\nKeep me too."
    assert "DROP_ME" not in doc.body


def test_default_queries():
    queries = _reta.default_queries()
    assert len(queries) == 6
    assert ("epcoritamab", 500) in queries


def test_embedding_and_retrieval():
    v = _reta.embed("glofitamab response rate")
    assert len(v) == 256
    assert math.isclose(_reta.cosine(v, v), 1.0, abs_tol=1e-12)

    store = _reta.EmbeddingStore()
    texts = {
        ("PMC1", 0): "Follicular lymphoma is indolent.",
        ("PMC2", 0): "The overall response rate of glofitamab was 52%.",
        ("PMC3", 0): "Circulating tumor DNA monitoring.",
    }
    for (pmc_id, idx), text in texts.items():
        store.upsert(pmc_id, idx, text, _reta.embed(text))
    assert len(store) == 3

    hits = store.top_k(_reta.embed("glofitamab overall response rate"), 2)
    assert len(hits) == 2
    assert hits[0][0] == "PMC2"
    assert hits[0][2] >= hits[1][2]


def test_persistence_round_trip(tmp_path):
    store = _reta.EmbeddingStore()
    store.upsert("PMC1", 0, "alpha beta", _reta.embed("alpha beta"))
    path = str(tmp_path / "index.bin")
    store.persist(path)
    loaded = _reta.EmbeddingStore.load(path)
    assert len(loaded) == 1


def test_prompt_rendering():
    one = _reta.render_stage_one("CONTEXT", "QUERY")
    assert "You are a truthful AI assistant." in one
    assert one.endswith("Answer:")
    assert "CONTEXT" in one and "QUERY" in one

    two = _reta.render_stage_two(["a1", "a2"])
    assert two.startswith("Please combine the following paper's summaries.")
    assert two.index("Paper #1: a1") < two.index("Paper #2: a2")

    assert "{segment of article}" in _reta.stage_one_template()


def test_answer_query_end_to_end():
    store = _reta.EmbeddingStore()
    texts = [
        "Follicular lymphoma is an indolent malignancy.",
        "The overall response rate of DLBCL patients treated with glofitamab was 52%.",
        "Circulating tumor DNA enables noninvasive monitoring.",
    ]
    for i, text in enumerate(texts):
        store.upsert("PMC%d" % (100 + i), 0, text, _reta.embed(text))

    answer, provenance = _reta.answer_query(
        "What is the overall response rate of DLBCL patients treated with glofitamab?",
        store,
        k=2,
    )
    assert "52" in answer
    assert ("PMC101", 0) in provenance


def test_question_set_and_audit():
    questions = _reta.question_set()
    assert len(questions) == 19
    groups = [q.group for q in questions]
    assert groups.count("clinical-information") == 9
    assert groups.count("drug-information") == 6
    assert groups.count("disease-biology") == 4

    feasible, c2, _reason = _reta.feasibility_audit(19, 12, 3, 47)
    assert feasible and c2 == 4
    feasible, _c2, reason = _reta.feasibility_audit(19, 8, 1, 43)
    assert not feasible
    assert "45" in reason

    assert _reta.score_total([3] * 12 + [2] * 4 + [1] * 3) == 47
    with pytest.raises(_reta.RetaError):
        _reta.score_total([5])
