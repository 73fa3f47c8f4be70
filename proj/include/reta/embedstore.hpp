#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "reta/segmenter.hpp"

namespace reta {

using EmbeddingVector = std::vector<float>;

double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

// Text -> dense vector. The deterministic provider keeps all tests offline.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::string name() const = 0;
    virtual std::size_t dim() const = 0;
    virtual EmbeddingVector embed(const std::string& text) const = 0;
};

// Feature-hashed unigram counts over tokenizer output, unit-normalized.
class HashedEmbeddingProvider final : public EmbeddingProvider {
public:
    explicit HashedEmbeddingProvider(std::size_t dim = 256);
    std::string name() const override { return "deterministic"; }
    std::size_t dim() const override { return dim_; }
    EmbeddingVector embed(const std::string& text) const override;

private:
    std::size_t dim_;
    WordTokenizer tokenizer_;
};

struct EmbeddingRecord {
    SegmentKey key;
    std::string text;  // segment prose, carried for context assembly
    std::uint64_t text_hash = 0;
    EmbeddingVector vector;

    friend bool operator==(const EmbeddingRecord&, const EmbeddingRecord&) = default;
};

struct RetrievalConfig {
    std::size_t k = 4;
};

struct ScoredSegment {
    Segment segment;
    double score = 0.0;
};

using RetrievedContext = std::vector<ScoredSegment>;

// Exhaustive-scan vector store keyed by (pmc_id, segment_index).
// Ties in top_k break by ascending key so retrieval is deterministic.
class EmbeddingStore {
public:
    EmbeddingStore() = default;
    explicit EmbeddingStore(std::string provider_name)
        : provider_name_(std::move(provider_name)) {}

    void upsert(EmbeddingRecord record);
    const EmbeddingRecord* find(const SegmentKey& key) const;
    std::size_t size() const { return records_.size(); }
    bool empty() const { return records_.empty(); }
    std::size_t dim() const { return dim_; }
    const std::string& provider_name() const { return provider_name_; }
    const std::map<SegmentKey, EmbeddingRecord>& records() const { return records_; }

    RetrievedContext top_k(const EmbeddingVector& query,
                           const RetrievalConfig& cfg) const;

    void persist(const std::string& path) const;
    static EmbeddingStore load(const std::string& path);

    friend bool operator==(const EmbeddingStore&, const EmbeddingStore&) = default;

private:
    std::string provider_name_ = "deterministic";
    std::size_t dim_ = 0;  // 0 until first record
    std::map<SegmentKey, EmbeddingRecord> records_;
};

}  // namespace reta
