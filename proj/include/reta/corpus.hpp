#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace reta {

struct CorpusQuery {
    std::string text;
    std::size_t retmax = 500;
};

// The six corpus queries, 500 articles each.
std::vector<CorpusQuery> default_query_set();

struct RawArticle {
    std::string pmc_id;
    std::string xml;  // JATS payload, byte-preserved
};

struct Document {
    std::string pmc_id;
    std::string title;
    std::string body;
    std::set<std::string> source_queries;

    friend bool operator==(const Document&, const Document&) = default;
};

struct ManifestEntry {
    std::string pmc_id;
    std::string title;
    std::set<std::string> source_queries;
    std::string fetched_at;  // ISO-8601 UTC
    std::size_t byte_length = 0;
};

struct QueryStats {
    std::string query;
    std::size_t hits = 0;     // ids returned by esearch
    std::size_t fetched = 0;  // articles kept after preprocessing
    std::size_t skipped = 0;  // fetch/parse failures, recorded and skipped
};

struct Corpus {
    std::map<std::string, Document> documents;  // keyed by pmc_id
    std::vector<QueryStats> per_query;
    std::vector<std::string> errors;  // "<pmc_id>: <reason>" for skipped articles
};

// HTTP GET abstraction so everything runs against recorded fixtures.
class Transport {
public:
    virtual ~Transport() = default;
    virtual std::string get(const std::string& path,
                            const std::map<std::string, std::string>& params) = 0;
};

// Serves esearch/efetch responses from files on disk:
//   <dir>/esearch_<query slug>.json and <dir>/efetch_<pmc_id>.xml
class FixtureTransport final : public Transport {
public:
    explicit FixtureTransport(std::string dir) : dir_(std::move(dir)) {}
    std::string get(const std::string& path,
                    const std::map<std::string, std::string>& params) override;

    static std::string slug(const std::string& query);

private:
    std::string dir_;
};

// Live NCBI transport. Honors the 3 req/s courtesy limit and retries
// rate-limit responses with exponential backoff.
std::unique_ptr<Transport> make_entrez_http_transport(
    const std::string& api_key = "");

class EntrezClient {
public:
    explicit EntrezClient(std::shared_ptr<Transport> transport)
        : transport_(std::move(transport)) {}

    // ids in service order, at most query.retmax of them
    std::vector<std::string> search_pmc(const CorpusQuery& query);
    RawArticle fetch_article(const std::string& pmc_id);

private:
    std::shared_ptr<Transport> transport_;
};

struct PreprocessOptions {
    // JATS element names whose subtrees are dropped from the body
    std::set<std::string> excluded_elements = {
        "fig", "table-wrap", "table", "ref-list",
        "ack", "author-notes", "notes", "fn-group",
    };
    bool keep_abstract = true;  // abstract prose leads the body
};

// Strips noisy sections and flattens the remaining paragraphs, in
// source order, separated by blank lines.
Document preprocess(const RawArticle& raw, const PreprocessOptions& opts = {});

Corpus build_corpus(const std::vector<CorpusQuery>& queries,
                    EntrezClient& client,
                    const PreprocessOptions& opts = {});

// Corpus file: one JSON document per line. Manifest: one JSON record
// per document (pmc_id, title, source_queries, fetched_at, byte length).
void save_corpus(const Corpus& corpus, const std::string& corpus_path,
                 const std::string& manifest_path);
std::map<std::string, Document> load_corpus(const std::string& corpus_path);

}  // namespace reta
