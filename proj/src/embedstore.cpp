#include "reta/embedstore.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "reta/errors.hpp"
#include "reta/hash.hpp"

namespace reta {

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
    if (u.size() != v.size()) {
        throw error("cosine: dimension mismatch (" + std::to_string(u.size()) +
                    " vs " + std::to_string(v.size()) + ")");
    }
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += static_cast<double>(u[i]) * v[i];
        nu += static_cast<double>(u[i]) * u[i];
        nv += static_cast<double>(v[i]) * v[i];
    }
    if (nu == 0.0 || nv == 0.0) {
        throw error("cosine: zero-norm input");
    }
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

HashedEmbeddingProvider::HashedEmbeddingProvider(std::size_t dim) : dim_(dim) {
    if (dim_ < 1) throw config_error("embedding dim must be >= 1");
}

EmbeddingVector HashedEmbeddingProvider::embed(const std::string& text) const {
    if (text.empty()) {
        throw std::invalid_argument("embed: empty text");
    }
    std::vector<std::string> tokens = tokenizer_.tokenize(text);
    if (tokens.empty()) {
        throw std::invalid_argument("embed: text has no tokens");
    }
    EmbeddingVector vec(dim_, 0.0f);
    for (auto& t : tokens) {
        std::transform(t.begin(), t.end(), t.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        const std::uint64_t h = fnv1a64(t);
        // low bits pick the bucket, bit 63 the sign
        vec[h % dim_] += (h >> 63) ? -1.0f : 1.0f;
    }
    double norm = 0.0;
    for (float x : vec) norm += static_cast<double>(x) * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) {
        // all buckets cancelled; fall back to unsigned counts
        for (auto& t : tokens) vec[fnv1a64(t) % dim_] += 1.0f;
        norm = 0.0;
        for (float x : vec) norm += static_cast<double>(x) * x;
        norm = std::sqrt(norm);
    }
    for (float& x : vec) x = static_cast<float>(x / norm);
    return vec;
}

void EmbeddingStore::upsert(EmbeddingRecord record) {
    if (record.vector.empty()) {
        throw std::invalid_argument("upsert: empty vector");
    }
    if (dim_ != 0 && record.vector.size() != dim_) {
        throw error("upsert: dim mismatch (store " + std::to_string(dim_) +
                    ", record " + std::to_string(record.vector.size()) + ")");
    }
    dim_ = record.vector.size();
    records_[record.key] = std::move(record);
}

const EmbeddingRecord* EmbeddingStore::find(const SegmentKey& key) const {
    auto it = records_.find(key);
    return it == records_.end() ? nullptr : &it->second;
}

RetrievedContext EmbeddingStore::top_k(const EmbeddingVector& query,
                                       const RetrievalConfig& cfg) const {
    if (cfg.k < 1) throw config_error("top_k: k must be >= 1");
    if (records_.empty()) return {};
    if (query.size() != dim_) {
        throw error("top_k: query dim " + std::to_string(query.size()) +
                    " != store dim " + std::to_string(dim_));
    }
    struct Hit {
        double score;
        const EmbeddingRecord* rec;
    };
    std::vector<Hit> hits;
    hits.reserve(records_.size());
    for (const auto& [key, rec] : records_) {
        hits.push_back({cosine(query, rec.vector), &rec});
    }
    const std::size_t k = std::min(cfg.k, hits.size());
    // records_ iterates in ascending key order, so stable sort by
    // descending score yields the ascending-key tie break
    std::stable_sort(hits.begin(), hits.end(),
                     [](const Hit& a, const Hit& b) { return a.score > b.score; });
    RetrievedContext out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        Segment seg;
        seg.pmc_id = hits[i].rec->key.pmc_id;
        seg.index = hits[i].rec->key.segment_index;
        seg.text = hits[i].rec->text;
        seg.token_count = 0;
        out.push_back({std::move(seg), hits[i].score});
    }
    return out;
}

namespace {

constexpr char kMagic[8] = {'R', 'E', 'T', 'A', 'I', 'D', 'X', '1'};

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_str(std::string& buf, const std::string& s) {
    put_u32(buf, static_cast<std::uint32_t>(s.size()));
    buf += s;
}

class Reader {
public:
    Reader(const std::string& data, const std::string& path)
        : data_(data), path_(path) {}

    std::uint32_t u32(const std::string& what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint64_t u64(const std::string& what) {
        need(8, what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }

    std::string str(const std::string& what) {
        const std::uint32_t len = u32(what);
        need(len, what);
        std::string s = data_.substr(pos_, len);
        pos_ += len;
        return s;
    }

    std::size_t pos() const { return pos_; }

private:
    void need(std::size_t n, const std::string& what) {
        if (pos_ + n > data_.size()) {
            throw integrity_error("store file " + path_ + " truncated while reading " + what);
        }
    }

    const std::string& data_;
    std::string path_;
    std::size_t pos_ = 0;
};

}  // namespace

void EmbeddingStore::persist(const std::string& path) const {
    std::string buf;
    buf.append(kMagic, sizeof(kMagic));
    put_u32(buf, static_cast<std::uint32_t>(dim_));
    put_str(buf, provider_name_);
    put_u64(buf, records_.size());
    for (const auto& [key, rec] : records_) {
        put_str(buf, key.pmc_id);
        put_u64(buf, key.segment_index);
        put_u64(buf, rec.text_hash);
        put_str(buf, rec.text);
        for (float x : rec.vector) {
            std::uint32_t bits;
            std::memcpy(&bits, &x, 4);
            put_u32(buf, bits);
        }
    }
    put_u64(buf, fnv1a64(buf));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot open " + path + " for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw error("write failed: " + path);
}

EmbeddingStore EmbeddingStore::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw not_found_error(path);
    std::string data((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());

    if (data.size() < sizeof(kMagic) + 8 ||
        std::memcmp(data.data(), kMagic, sizeof(kMagic)) != 0) {
        throw integrity_error("store file " + path + ": bad magic");
    }
    const std::string body = data.substr(0, data.size() - 8);
    std::uint64_t stored = 0;
    for (int i = 0; i < 8; ++i)
        stored |= static_cast<std::uint64_t>(
                      static_cast<unsigned char>(data[data.size() - 8 + i]))
                  << (8 * i);
    if (stored != fnv1a64(body)) {
        throw integrity_error("store file " + path + ": checksum mismatch");
    }

    Reader reader(body, path);
    reader.u64("magic");  // skip, already verified

    EmbeddingStore store;
    store.dim_ = reader.u32("header dim");
    store.provider_name_ = reader.str("header provider");
    const std::uint64_t count = reader.u64("header record count");
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::string where = "record " + std::to_string(i);
        EmbeddingRecord rec;
        rec.key.pmc_id = reader.str(where + " pmc_id");
        rec.key.segment_index = reader.u64(where + " segment_index");
        rec.text_hash = reader.u64(where + " text_hash");
        rec.text = reader.str(where + " text");
        rec.vector.resize(store.dim_);
        for (std::size_t d = 0; d < store.dim_; ++d) {
            std::uint32_t bits = reader.u32(where + " vector");
            float x;
            std::memcpy(&x, &bits, 4);
            rec.vector[d] = x;
        }
        store.records_[rec.key] = std::move(rec);
    }
    if (reader.pos() != body.size()) {
        throw integrity_error("store file " + path + ": trailing bytes after last record");
    }
    if (store.records_.size() != count) {
        throw integrity_error("store file " + path + ": duplicate record keys");
    }
    return store;
}

}  // namespace reta
