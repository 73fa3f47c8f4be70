#include "reta/segmenter.hpp"

#include <cctype>

#include "reta/errors.hpp"

namespace reta {

namespace {

bool is_word_char(unsigned char c) {
    return std::isalnum(c) || c >= 0x80 || c == '_' || c == '\'';
}

}  // namespace

std::vector<std::string> WordTokenizer::tokenize(const std::string& text) const {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        unsigned char c = text[i];
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        if (is_word_char(c)) {
            std::size_t start = i;
            while (i < n && is_word_char(static_cast<unsigned char>(text[i]))) ++i;
            tokens.emplace_back(text, start, i - start);
        } else {
            tokens.emplace_back(1, text[i]);
            ++i;
        }
    }
    return tokens;
}

std::string WordTokenizer::detokenize(const std::vector<std::string>& tokens) const {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

std::size_t count_tokens(const std::string& text, const Tokenizer& tokenizer) {
    return tokenizer.tokenize(text).size();
}

std::vector<Segment> segment_document(const std::string& pmc_id,
                                      const std::string& body,
                                      const Tokenizer& tokenizer,
                                      std::size_t max_tokens) {
    if (max_tokens < 1) {
        throw config_error("segmenter: max_tokens must be >= 1");
    }
    const std::vector<std::string> tokens = tokenizer.tokenize(body);
    std::vector<Segment> segments;
    for (std::size_t offset = 0; offset < tokens.size(); offset += max_tokens) {
        const std::size_t count = std::min(max_tokens, tokens.size() - offset);
        std::vector<std::string> slice(tokens.begin() + offset,
                                       tokens.begin() + offset + count);
        Segment seg;
        seg.pmc_id = pmc_id;
        seg.index = segments.size();
        seg.text = tokenizer.detokenize(slice);
        seg.token_count = count;
        segments.push_back(std::move(seg));
    }
    return segments;
}

}  // namespace reta
