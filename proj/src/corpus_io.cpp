#include <chrono>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "reta/corpus.hpp"
#include "reta/errors.hpp"

namespace reta {

namespace {

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

void save_corpus(const Corpus& corpus, const std::string& corpus_path,
                 const std::string& manifest_path) {
    std::ofstream out(corpus_path, std::ios::trunc);
    if (!out) throw error("cannot open " + corpus_path + " for writing");
    std::ofstream manifest(manifest_path, std::ios::trunc);
    if (!manifest) throw error("cannot open " + manifest_path + " for writing");

    const std::string stamp = utc_now();
    for (const auto& [pmc_id, doc] : corpus.documents) {
        nlohmann::json j = {
            {"pmc_id", doc.pmc_id},
            {"title", doc.title},
            {"body", doc.body},
            {"source_queries", doc.source_queries},
        };
        out << j.dump() << '\n';
        nlohmann::json m = {
            {"pmc_id", doc.pmc_id},
            {"title", doc.title},
            {"source_queries", doc.source_queries},
            {"fetched_at", stamp},
            {"byte_length", doc.body.size()},
        };
        manifest << m.dump() << '\n';
    }
    for (const auto& stats : corpus.per_query) {
        nlohmann::json m = {
            {"query", stats.query},
            {"hits", stats.hits},
            {"fetched", stats.fetched},
            {"skipped", stats.skipped},
            {"fetched_at", stamp},
        };
        manifest << m.dump() << '\n';
    }
}

std::map<std::string, Document> load_corpus(const std::string& corpus_path) {
    std::ifstream in(corpus_path);
    if (!in) throw not_found_error(corpus_path);
    std::map<std::string, Document> documents;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
            Document doc;
            doc.pmc_id = j.at("pmc_id").get<std::string>();
            doc.title = j.value("title", "");
            doc.body = j.at("body").get<std::string>();
            for (const auto& q : j.value("source_queries", nlohmann::json::array())) {
                doc.source_queries.insert(q.get<std::string>());
            }
            documents[doc.pmc_id] = std::move(doc);
        } catch (const nlohmann::json::exception& e) {
            throw integrity_error("corpus file " + corpus_path + " line " +
                                  std::to_string(lineno) + ": " + e.what());
        }
    }
    return documents;
}

}  // namespace reta
