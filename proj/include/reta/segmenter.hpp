#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace reta {

// Pluggable tokenizer. detokenize(tokenize(t)) reproduces t up to the
// whitespace normalization the implementation declares.
class Tokenizer {
public:
    virtual ~Tokenizer() = default;
    virtual std::string name() const = 0;
    virtual std::vector<std::string> tokenize(const std::string& text) const = 0;
    virtual std::string detokenize(const std::vector<std::string>& tokens) const = 0;
};

// Default offline tokenizer: maximal runs of word characters, every
// punctuation/symbol character is its own token, whitespace discarded.
// Normalized form is the single-space join of the tokens.
class WordTokenizer final : public Tokenizer {
public:
    std::string name() const override { return "word"; }
    std::vector<std::string> tokenize(const std::string& text) const override;
    std::string detokenize(const std::vector<std::string>& tokens) const override;
};

struct Segment {
    std::string pmc_id;
    std::size_t index = 0;  // 0-based ordinal within the document
    std::string text;
    std::size_t token_count = 0;
};

struct SegmentKey {
    std::string pmc_id;
    std::size_t segment_index = 0;

    friend bool operator==(const SegmentKey&, const SegmentKey&) = default;
    friend auto operator<=>(const SegmentKey&, const SegmentKey&) = default;
};

std::size_t count_tokens(const std::string& text, const Tokenizer& tokenizer);

// Greedy left-to-right packing: every segment except possibly the last
// holds exactly max_tokens tokens.
std::vector<Segment> segment_document(const std::string& pmc_id,
                                      const std::string& body,
                                      const Tokenizer& tokenizer,
                                      std::size_t max_tokens = 4000);

}  // namespace reta
