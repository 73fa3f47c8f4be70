#include <doctest.h>

#include <fstream>
#include <sstream>

#include "reta/errors.hpp"
#include "reta/synth.hpp"

using namespace reta;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Segment make_segment(const std::string& pmc_id, std::size_t index,
                     const std::string& text) {
    Segment seg;
    seg.pmc_id = pmc_id;
    seg.index = index;
    seg.text = text;
    return seg;
}

EmbeddingStore planted_store() {
    HashedEmbeddingProvider embedder(64);
    EmbeddingStore store;
    const std::vector<std::string> texts = {
        "Follicular lymphoma is an indolent malignancy. It can transform over time.",
        "The overall response rate (ORR) of DLBCL patients treated with glofitamab "
        "was 52%. The trial enrolled relapsed patients.",
        "Circulating tumor DNA enables noninvasive monitoring of response.",
    };
    for (std::size_t i = 0; i < texts.size(); ++i) {
        EmbeddingRecord rec;
        rec.key = {"PMC" + std::to_string(100 + i), 0};
        rec.text = texts[i];
        rec.vector = embedder.embed(texts[i]);
        store.upsert(std::move(rec));
    }
    return store;
}

}  // namespace

TEST_CASE("stage-one prompt layout") {
    const Segment seg = make_segment("PMC1", 0, "S");
    const std::string prompt = render_stage_one(seg, "Q");

    CHECK(prompt.find("You are a truthful AI assistant.") != std::string::npos);
    CHECK(prompt.rfind("Answer:") == prompt.size() - 7);
    CHECK(prompt.find("Context: S\n") != std::string::npos);
    CHECK(prompt.find("Question: Q\n") != std::string::npos);
    // both slot values appear exactly once, no markers remain
    CHECK(prompt.find('{') == std::string::npos);
    CHECK(prompt.find("S") == prompt.rfind("S\n"));
    CHECK_THROWS_AS(render_stage_one(seg, ""), std::invalid_argument);
    CHECK_THROWS_AS(render_stage_one(make_segment("PMC1", 0, ""), "Q"),
                    std::invalid_argument);
}

TEST_CASE("prompt templates match the versioned assets byte for byte") {
    const std::string assets = std::string(RETA_REPO_DIR) + "/assets/prompts";
    CHECK(stage_one_template() == read_file(assets + "/stage_one.txt"));
    CHECK(stage_two_template() == read_file(assets + "/stage_two.txt"));

    // rendering is exactly the template with the slots substituted
    std::string expected = stage_one_template();
    expected.replace(expected.find("{segment of article}"), 20, "seg text");
    expected.replace(expected.find("{user query}"), 12, "query text");
    CHECK(render_stage_one(make_segment("PMC1", 0, "seg text"), "query text") ==
          expected);
}

TEST_CASE("stage-two prompt numbering") {
    const std::string two = render_stage_two({"first answer", "second answer"});
    const auto p1 = two.find("Paper #1: first answer");
    const auto p2 = two.find("Paper #2: second answer");
    CHECK(p1 != std::string::npos);
    CHECK(p2 != std::string::npos);
    CHECK(p1 < p2);
    CHECK(two.rfind("Please combine the following paper's summaries.", 0) == 0);
    CHECK(two.find("Only use the context below and not incorporate any prior "
                   "knowledge.") != std::string::npos);

    const std::string one = render_stage_two({"only"});
    CHECK(one.find("Paper #1:") != std::string::npos);
    CHECK(one.find("Paper #2:") == std::string::npos);

    std::vector<std::string> five(5, "x");
    const std::string rendered = render_stage_two(five);
    std::size_t markers = 0;
    for (auto pos = rendered.find("Paper #"); pos != std::string::npos;
         pos = rendered.find("Paper #", pos + 1)) {
        ++markers;
    }
    CHECK(markers == 5);

    CHECK_THROWS_AS(render_stage_two({}), std::invalid_argument);
}

TEST_CASE("mock provider stage one picks the highest-overlap sentence") {
    MockLLMProvider mock;
    const Segment seg = make_segment(
        "PMC1", 0,
        "Epcoritamab binds CD3 and CD20. The overall response rate of glofitamab "
        "was high. Unrelated housekeeping sentence here.");
    // question shares 3+ tokens with the middle sentence only
    const std::string answer = mock.complete(
        render_stage_one(seg, "What was the overall response rate of glofitamab?"),
        {});
    CHECK(answer == "The overall response rate of glofitamab was high.");

    const std::string refusal = mock.complete(
        render_stage_one(make_segment("PMC1", 0, "Completely unrelated botany text."),
                         "What is the capital of France?"),
        {});
    CHECK(refusal == MockLLMProvider::kRefusal);
}

TEST_CASE("mock provider stage two collapses duplicate bodies") {
    MockLLMProvider mock;
    const std::string out =
        mock.complete(render_stage_two({"same answer", "same answer", "other"}), {});
    CHECK(out == "same answer other");
}

TEST_CASE("answer_query on an empty store returns the fallback") {
    HashedEmbeddingProvider embedder(64);
    MockLLMProvider mock;
    EmbeddingStore store;
    const auto ans = answer_query("anything at all", store, {4}, embedder, mock);
    CHECK(ans.answer == SynthConfig{}.fallback_text);
    CHECK(ans.provenance.empty());
    CHECK(mock.stage_one_calls() == 0);
}

TEST_CASE("answer_query finds the planted fact with provenance") {
    HashedEmbeddingProvider embedder(64);
    MockLLMProvider mock;
    const auto store = planted_store();
    const auto ans = answer_query(
        "What is the overall response rate of DLBCL patients treated with "
        "glofitamab?",
        store, {2}, embedder, mock);
    CHECK(ans.answer.find("52") != std::string::npos);
    REQUIRE(!ans.provenance.empty());
    bool found = false;
    for (const auto& key : ans.provenance) {
        if (key == SegmentKey{"PMC101", 0}) found = true;
    }
    CHECK(found);
}

TEST_CASE("answer_query provenance is a subset of the retrieved keys") {
    HashedEmbeddingProvider embedder(64);
    MockLLMProvider mock;
    const auto store = planted_store();
    const auto ans =
        answer_query("monitoring response in lymphoma", store, {3}, embedder, mock);
    for (const auto& key : ans.provenance) {
        bool retrieved = false;
        for (const auto& hit : ans.retrieved) {
            if (SegmentKey{hit.segment.pmc_id, hit.segment.index} == key)
                retrieved = true;
        }
        CHECK(retrieved);
    }
}

TEST_CASE("answer_query fan-out and determinism") {
    HashedEmbeddingProvider embedder(64);
    const auto store = planted_store();
    MockLLMProvider mock;
    const std::string query = "glofitamab response rate in DLBCL";
    const auto first = answer_query(query, store, {2}, embedder, mock);
    CHECK(mock.stage_one_calls() == 2);  // min(k, store size)
    CHECK(mock.stage_two_calls() <= 1);

    MockLLMProvider mock2;
    const auto second = answer_query(query, store, {2}, embedder, mock2);
    CHECK(first.answer == second.answer);
    CHECK(first.provenance == second.provenance);

    MockLLMProvider mock3;
    const auto oversize = answer_query(query, store, {10}, embedder, mock3);
    CHECK(mock3.stage_one_calls() == 3);  // store smaller than k
}

TEST_CASE("all-refusal queries fall back exactly") {
    HashedEmbeddingProvider embedder(64);
    MockLLMProvider mock;
    EmbeddingStore store;
    EmbeddingRecord rec;
    rec.key = {"PMC1", 0};
    rec.text = "Botanical taxonomy of alpine flowers.";
    rec.vector = embedder.embed(rec.text);
    store.upsert(std::move(rec));

    SynthConfig cfg;
    cfg.fallback_text = "not found in corpus";
    const auto ans =
        answer_query("quarterly revenue guidance", store, {4}, embedder, mock, cfg);
    CHECK(ans.answer == "not found in corpus");
    CHECK(ans.provenance.empty());
    REQUIRE(ans.stage_one_answers.size() == 1);
    CHECK(ans.stage_one_answers[0].is_refusal);
    CHECK(mock.stage_two_calls() == 0);
}

TEST_CASE("stage-two overflow folds pairwise and preserves rank order") {
    HashedEmbeddingProvider embedder(64);
    MockLLMProvider mock;
    EmbeddingStore store;
    for (std::size_t i = 0; i < 4; ++i) {
        EmbeddingRecord rec;
        rec.key = {"PMC2", i};
        rec.text = "Glofitamab fact number " + std::to_string(i) +
                   " about response in lymphoma.";
        rec.vector = embedder.embed(rec.text);
        store.upsert(std::move(rec));
    }
    SynthConfig cfg;
    cfg.provider_window_tokens = 40;  // force the fold
    const auto ans =
        answer_query("glofitamab response fact", store, {4}, embedder, mock, cfg);
    CHECK(mock.stage_two_calls() > 1);
    CHECK(!ans.answer.empty());
    CHECK(ans.provenance.size() == 4);
}
