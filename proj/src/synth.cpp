#include "reta/synth.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "reta/errors.hpp"

namespace reta {

namespace {

const std::string kStageOneTemplate =
    "Instruction: You are a truthful AI assistant. You answer questions only "
    "based on provided context below. If the context is not relevant to the "
    "question, say you do not know the answer. No need to explain why.\n"
    "\n"
    "Context: {segment of article}\n"
    "\n"
    "Question: {user query}\n"
    "\n"
    "Answer:";

const std::string kStageTwoHeader =
    "Please combine the following paper's summaries. Only use the context "
    "below and not incorporate any prior knowledge.";

std::string replace_slot(std::string text, const std::string& slot,
                         const std::string& value) {
    auto pos = text.find(slot);
    if (pos == std::string::npos) {
        throw error("template missing slot " + slot);
    }
    text.replace(pos, slot.size(), value);
    return text;
}

}  // namespace

const std::string& stage_one_template() { return kStageOneTemplate; }

const std::string& stage_two_template() {
    static const std::string t = kStageTwoHeader +
                                 "\n\nPaper #1: {answer 1 based on segment 1}"
                                 "\n\nPaper #2: {answer 2 based on segment 2}";
    return t;
}

std::string render_stage_one(const Segment& segment, const std::string& query) {
    if (query.empty()) throw std::invalid_argument("render_stage_one: empty query");
    if (segment.text.empty()) throw std::invalid_argument("render_stage_one: empty segment");
    std::string out = replace_slot(kStageOneTemplate, "{segment of article}", segment.text);
    return replace_slot(out, "{user query}", query);
}

std::string render_stage_two(const std::vector<std::string>& answers) {
    if (answers.empty()) throw std::invalid_argument("render_stage_two: no answers");
    std::string out = kStageTwoHeader;
    for (std::size_t i = 0; i < answers.size(); ++i) {
        out += "\n\nPaper #" + std::to_string(i + 1) + ": " + answers[i];
    }
    return out;
}

namespace {

std::set<std::string> word_set(const std::string& text) {
    WordTokenizer tok;
    std::set<std::string> words;
    for (auto& t : tok.tokenize(text)) {
        if (t.size() == 1 && std::ispunct(static_cast<unsigned char>(t[0]))) continue;
        std::transform(t.begin(), t.end(), t.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        words.insert(std::move(t));
    }
    return words;
}

std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> sentences;
    std::string current;
    for (std::size_t i = 0; i < text.size(); ++i) {
        current += text[i];
        if ((text[i] == '.' || text[i] == '?' || text[i] == '!') &&
            (i + 1 == text.size() ||
             std::isspace(static_cast<unsigned char>(text[i + 1])))) {
            while (!current.empty() && std::isspace(static_cast<unsigned char>(current.front())))
                current.erase(current.begin());
            if (!current.empty()) sentences.push_back(current);
            current.clear();
        }
    }
    while (!current.empty() && std::isspace(static_cast<unsigned char>(current.front())))
        current.erase(current.begin());
    if (!current.empty()) sentences.push_back(current);
    return sentences;
}

std::string between(const std::string& s, const std::string& from,
                    const std::string& to) {
    auto start = s.find(from);
    if (start == std::string::npos) return {};
    start += from.size();
    auto end = s.find(to, start);
    if (end == std::string::npos) return {};
    return s.substr(start, end - start);
}

}  // namespace

std::string MockLLMProvider::complete(const std::string& prompt,
                                      const DecodingParams&) {
    if (prompt.rfind("Instruction: You are a truthful AI assistant.", 0) == 0) {
        ++stage_one_calls_;
        const std::string context = between(prompt, "Context: ", "\n\nQuestion: ");
        const std::string question = between(prompt, "Question: ", "\n\nAnswer:");
        const std::set<std::string> qwords = word_set(question);

        std::string best;
        std::size_t best_overlap = 0;
        for (const auto& sentence : split_sentences(context)) {
            std::size_t overlap = 0;
            for (const auto& w : word_set(sentence)) overlap += qwords.count(w);
            if (overlap > best_overlap) {
                best_overlap = overlap;
                best = sentence;
            }
        }
        return best_overlap == 0 ? kRefusal : best;
    }

    if (prompt.rfind("Please combine", 0) == 0) {
        ++stage_two_calls_;
        std::vector<std::string> bodies;
        std::size_t pos = 0;
        for (;;) {
            auto marker = prompt.find("Paper #", pos);
            if (marker == std::string::npos) break;
            auto colon = prompt.find(": ", marker);
            if (colon == std::string::npos) break;
            auto next = prompt.find("\n\nPaper #", colon);
            std::string body = next == std::string::npos
                                   ? prompt.substr(colon + 2)
                                   : prompt.substr(colon + 2, next - colon - 2);
            if (std::find(bodies.begin(), bodies.end(), body) == bodies.end()) {
                bodies.push_back(std::move(body));
            }
            pos = colon;
        }
        std::string out;
        for (const auto& b : bodies) {
            if (!out.empty()) out += ' ';
            out += b;
        }
        return out;
    }

    throw error("mock provider: unrecognized prompt shape");
}

namespace {

std::size_t rough_token_count(const std::string& text) {
    WordTokenizer tok;
    return tok.tokenize(text).size();
}

// Combines stage-one answer texts into one summary, folding pairwise
// when the combined prompt would not fit the provider window.
std::string combine(const std::vector<std::string>& texts, LLMProvider& llm,
                    const SynthConfig& cfg) {
    const std::string prompt = render_stage_two(texts);
    // a pair cannot fold further, so it always goes to the provider
    if (texts.size() <= 2 || rough_token_count(prompt) <= cfg.provider_window_tokens) {
        return llm.complete(prompt, cfg.decoding);
    }
    const std::size_t mid = texts.size() / 2;
    std::vector<std::string> left(texts.begin(), texts.begin() + mid);
    std::vector<std::string> right(texts.begin() + mid, texts.end());
    return combine({combine(left, llm, cfg), combine(right, llm, cfg)}, llm, cfg);
}

}  // namespace

FinalAnswer answer_query(const std::string& query, const EmbeddingStore& store,
                         const RetrievalConfig& retrieval,
                         const EmbeddingProvider& embedder, LLMProvider& llm,
                         const SynthConfig& cfg) {
    if (query.empty()) throw std::invalid_argument("answer_query: empty query");

    FinalAnswer final;
    final.query = query;
    if (store.empty()) {
        final.answer = cfg.fallback_text;
        return final;
    }

    const EmbeddingVector qvec = embedder.embed(query);
    final.retrieved = store.top_k(qvec, retrieval);

    for (const auto& hit : final.retrieved) {
        const SegmentKey key{hit.segment.pmc_id, hit.segment.index};
        std::string text;
        try {
            text = llm.complete(render_stage_one(hit.segment, query), cfg.decoding);
        } catch (const error& e) {
            throw pipeline_error("stage one failed for " + key.pmc_id + "#" +
                                     std::to_string(key.segment_index) + ": " + e.what(),
                                 "stage-one",
                                 key.pmc_id + "#" + std::to_string(key.segment_index));
        }
        StageOneAnswer ans;
        ans.key = key;
        ans.is_refusal = text.find(cfg.refusal_pattern) != std::string::npos;
        ans.text = std::move(text);
        final.stage_one_answers.push_back(std::move(ans));
    }

    std::vector<std::string> survivors;
    for (const auto& ans : final.stage_one_answers) {
        if (cfg.drop_refusals && ans.is_refusal) continue;
        survivors.push_back(ans.text);
        final.provenance.push_back(ans.key);
    }
    if (survivors.empty()) {
        final.answer = cfg.fallback_text;
        final.provenance.clear();
        return final;
    }

    try {
        final.answer = combine(survivors, llm, cfg);
    } catch (const pipeline_error&) {
        throw;
    } catch (const error& e) {
        throw pipeline_error(std::string("stage two failed: ") + e.what(),
                             "stage-two", "");
    }
    return final;
}

}  // namespace reta
