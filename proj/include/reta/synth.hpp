#pragma once

#include <string>
#include <vector>

#include "reta/embedstore.hpp"
#include "reta/segmenter.hpp"

namespace reta {

struct DecodingParams {
    double temperature = 0.0;
    std::size_t max_tokens = 512;
};

class LLMProvider {
public:
    virtual ~LLMProvider() = default;
    virtual std::string name() const = 0;
    virtual std::string complete(const std::string& prompt,
                                 const DecodingParams& params) = 0;
};

// Stage one: answer the query from a single retrieved segment.
std::string render_stage_one(const Segment& segment, const std::string& query);

struct StageOneAnswer {
    SegmentKey key;
    std::string text;
    bool is_refusal = false;
};

// Stage two: combine the per-segment answers, "Paper #i" numbering in
// stage-one order.
std::string render_stage_two(const std::vector<std::string>& answers);

// The canonical template texts, also shipped under assets/prompts/.
const std::string& stage_one_template();
const std::string& stage_two_template();

struct SynthConfig {
    std::string refusal_pattern = "do not know";
    bool drop_refusals = true;
    std::string fallback_text = "The answer was not found in the corpus.";
    DecodingParams decoding;
    std::size_t provider_window_tokens = 16000;
};

struct FinalAnswer {
    std::string query;
    std::string answer;
    std::vector<SegmentKey> provenance;       // contributing segments, rank order
    std::vector<StageOneAnswer> stage_one_answers;  // all of them, for audit
    RetrievedContext retrieved;               // keys and scores as retrieved
};

FinalAnswer answer_query(const std::string& query,
                         const EmbeddingStore& store,
                         const RetrievalConfig& retrieval,
                         const EmbeddingProvider& embedder,
                         LLMProvider& llm,
                         const SynthConfig& cfg = {});

// Deterministic extractive provider for offline runs: stage one returns
// the context sentence with maximal token overlap with the question (or
// the refusal line at zero overlap); stage two concatenates the distinct
// paper bodies in order.
class MockLLMProvider final : public LLMProvider {
public:
    std::string name() const override { return "mock"; }
    std::string complete(const std::string& prompt,
                         const DecodingParams& params) override;

    int stage_one_calls() const { return stage_one_calls_; }
    int stage_two_calls() const { return stage_two_calls_; }

    static constexpr const char* kRefusal = "I do not know the answer.";

private:
    int stage_one_calls_ = 0;
    int stage_two_calls_ = 0;
};

}  // namespace reta
