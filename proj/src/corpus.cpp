#include "reta/corpus.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "reta/errors.hpp"
#include "xml.hpp"

namespace reta {

std::vector<CorpusQuery> default_query_set() {
    return {
        {"diffuse large b-cell lymphoma", 500},
        {"follicular lymphoma", 500},
        {"epcoritamab", 500},
        {"glofitamab", 500},
        {"minimal residual disease", 500},
        {"ctDNA", 500},
    };
}

std::string FixtureTransport::slug(const std::string& query) {
    std::string s;
    for (unsigned char c : query) {
        s += std::isalnum(c) ? static_cast<char>(std::tolower(c)) : '_';
    }
    return s;
}

std::string FixtureTransport::get(const std::string& path,
                                  const std::map<std::string, std::string>& params) {
    std::string file;
    if (path.find("esearch") != std::string::npos) {
        auto it = params.find("term");
        if (it == params.end()) throw usage_error("fixture esearch: missing term");
        file = dir_ + "/esearch_" + slug(it->second) + ".json";
    } else if (path.find("efetch") != std::string::npos) {
        auto it = params.find("id");
        if (it == params.end()) throw usage_error("fixture efetch: missing id");
        file = dir_ + "/efetch_" + it->second + ".xml";
    } else {
        throw usage_error("fixture transport: unknown endpoint " + path);
    }
    std::ifstream in(file, std::ios::binary);
    if (!in) throw not_found_error(file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace {

constexpr int kMaxAttempts = 3;

std::string get_with_retry(Transport& transport, const std::string& path,
                           const std::map<std::string, std::string>& params) {
    int attempt = 0;
    for (;;) {
        ++attempt;
        try {
            return transport.get(path, params);
        } catch (const rate_limit_error& e) {
            if (attempt >= kMaxAttempts) throw;
            auto wait = std::chrono::duration<double>(
                e.retry_after_seconds() > 0 ? e.retry_after_seconds()
                                            : 0.5 * (1 << attempt));
            std::this_thread::sleep_for(wait);
        } catch (const transport_error& e) {
            if (attempt >= kMaxAttempts) {
                throw transport_error(std::string(e.what()) + " (after " +
                                          std::to_string(attempt) + " attempts)",
                                      attempt);
            }
        }
    }
}

}  // namespace

std::vector<std::string> EntrezClient::search_pmc(const CorpusQuery& query) {
    if (query.text.empty()) throw std::invalid_argument("search_pmc: empty query");
    if (query.retmax == 0) return {};

    const std::string body = get_with_retry(
        *transport_, "/entrez/eutils/esearch.fcgi",
        {{"db", "pmc"},
         {"term", query.text},
         {"retmax", std::to_string(query.retmax)},
         {"retmode", "json"}});

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("esearch: response is not JSON: ") + e.what());
    }
    if (!j.contains("esearchresult")) {
        throw parse_error("esearch: missing field 'esearchresult'");
    }
    const auto& result = j["esearchresult"];
    if (!result.contains("idlist") || !result["idlist"].is_array()) {
        throw parse_error("esearch: missing field 'esearchresult.idlist'");
    }
    std::vector<std::string> ids;
    for (const auto& id : result["idlist"]) {
        if (!id.is_string()) {
            throw parse_error("esearch: non-string entry in 'esearchresult.idlist'");
        }
        ids.push_back(id.get<std::string>());
        if (ids.size() == query.retmax) break;  // service order, never re-sorted
    }
    return ids;
}

RawArticle EntrezClient::fetch_article(const std::string& pmc_id) {
    if (pmc_id.empty()) throw std::invalid_argument("fetch_article: empty pmc_id");
    std::string payload = get_with_retry(
        *transport_, "/entrez/eutils/efetch.fcgi",
        {{"db", "pmc"}, {"id", pmc_id}, {"retmode", "xml"}});
    if (payload.empty()) throw not_found_error(pmc_id);
    return {pmc_id, std::move(payload)};
}

namespace {

std::string collapse_ws(const std::string& s) {
    std::string out;
    bool in_ws = true;  // also trims leading whitespace
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            in_ws = true;
        } else {
            if (in_ws && !out.empty()) out += ' ';
            in_ws = false;
            out += static_cast<char>(c);
        }
    }
    return out;
}

void subtree_text(const xml::Node& node, const std::set<std::string>& excluded,
                  std::string& out) {
    for (const auto& child : node.children) {
        if (child.is_element()) {
            if (excluded.count(child.name)) continue;
            subtree_text(child, excluded, out);
        } else {
            out += child.text;
        }
    }
}

const xml::Node* find_first(const xml::Node& node, const std::string& name) {
    for (const auto& child : node.children) {
        if (!child.is_element()) continue;
        if (child.name == name) return &child;
        if (const xml::Node* hit = find_first(child, name)) return hit;
    }
    return nullptr;
}

// Collects <p> paragraphs in source order, skipping excluded subtrees.
void collect_paragraphs(const xml::Node& node, const std::set<std::string>& excluded,
                        std::vector<std::string>& out) {
    for (const auto& child : node.children) {
        if (!child.is_element() || excluded.count(child.name)) continue;
        if (child.name == "p") {
            std::string text;
            subtree_text(child, excluded, text);
            text = collapse_ws(text);
            if (!text.empty()) out.push_back(std::move(text));
        } else {
            collect_paragraphs(child, excluded, out);
        }
    }
}

}  // namespace

Document preprocess(const RawArticle& raw, const PreprocessOptions& opts) {
    xml::Node root = xml::parse(raw.xml);

    Document doc;
    doc.pmc_id = raw.pmc_id;
    if (const xml::Node* title = find_first(root, "article-title")) {
        std::string t;
        subtree_text(*title, opts.excluded_elements, t);
        doc.title = collapse_ws(t);
    }

    std::vector<std::string> paragraphs;
    if (opts.keep_abstract) {
        if (const xml::Node* front = find_first(root, "front")) {
            if (const xml::Node* abstract = find_first(*front, "abstract")) {
                collect_paragraphs(*abstract, opts.excluded_elements, paragraphs);
            }
        }
    }
    if (const xml::Node* body = find_first(root, "body")) {
        collect_paragraphs(*body, opts.excluded_elements, paragraphs);
    }

    std::string body_text;
    for (const auto& p : paragraphs) {
        if (!body_text.empty()) body_text += "\n\n";
        body_text += p;
    }
    if (body_text.empty()) {
        throw integrity_error("empty document after preprocessing: " + raw.pmc_id);
    }
    doc.body = std::move(body_text);
    return doc;
}

Corpus build_corpus(const std::vector<CorpusQuery>& queries, EntrezClient& client,
                    const PreprocessOptions& opts) {
    if (queries.empty()) throw usage_error("build_corpus: no queries");

    Corpus corpus;
    std::size_t failed_queries = 0;
    for (const auto& query : queries) {
        QueryStats stats;
        stats.query = query.text;
        std::vector<std::string> ids;
        try {
            ids = client.search_pmc(query);
        } catch (const error& e) {
            ++failed_queries;
            corpus.errors.push_back("query '" + query.text + "': " + e.what());
            corpus.per_query.push_back(std::move(stats));
            continue;
        }
        stats.hits = ids.size();
        for (const auto& id : ids) {
            auto existing = corpus.documents.find(id);
            if (existing != corpus.documents.end()) {
                existing->second.source_queries.insert(query.text);
                ++stats.fetched;
                continue;
            }
            try {
                Document doc = preprocess(client.fetch_article(id), opts);
                doc.source_queries.insert(query.text);
                corpus.documents.emplace(id, std::move(doc));
                ++stats.fetched;
            } catch (const error& e) {
                ++stats.skipped;
                corpus.errors.push_back(id + ": " + e.what());
            }
        }
        corpus.per_query.push_back(std::move(stats));
    }
    if (failed_queries == queries.size()) {
        throw transport_error("build_corpus: every query failed");
    }
    return corpus;
}

}  // namespace reta
