#include "reta/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reta/errors.hpp"
#include "reta/hash.hpp"

namespace reta {

namespace {

using nlohmann::json;

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw config_error(std::string("config field '") + key + "': " + e.what());
    }
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config file missing: " + path);
    json j;
    try {
        j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        throw config_error("config file " + path + ": " + e.what());
    }

    RunConfig cfg;
    if (j.contains("queries")) {
        cfg.queries.clear();
        for (const auto& q : j.at("queries")) {
            CorpusQuery query;
            if (q.is_string()) {
                query.text = q.get<std::string>();
            } else {
                read_field(q, "text", query.text);
                read_field(q, "retmax", query.retmax);
            }
            if (query.text.empty()) throw config_error("config: empty query text");
            cfg.queries.push_back(std::move(query));
        }
    }
    read_field(j, "tokenizer", cfg.tokenizer);
    read_field(j, "max_tokens", cfg.max_tokens);
    read_field(j, "embedding_provider", cfg.embedding_provider);
    read_field(j, "embedding_dim", cfg.embedding_dim);
    read_field(j, "embedding_model", cfg.embedding_model);
    read_field(j, "k", cfg.k);
    read_field(j, "llm_provider", cfg.llm_provider);
    read_field(j, "llm_model", cfg.llm_model);
    read_field(j, "refusal_pattern", cfg.synth.refusal_pattern);
    read_field(j, "drop_refusals", cfg.synth.drop_refusals);
    read_field(j, "fallback_text", cfg.synth.fallback_text);
    read_field(j, "temperature", cfg.synth.decoding.temperature);
    read_field(j, "max_completion_tokens", cfg.synth.decoding.max_tokens);
    read_field(j, "provider_window_tokens", cfg.synth.provider_window_tokens);
    read_field(j, "corpus_path", cfg.corpus_path);
    read_field(j, "manifest_path", cfg.manifest_path);
    read_field(j, "index_path", cfg.index_path);
    read_field(j, "audit_log_path", cfg.audit_log_path);
    read_field(j, "report_dir", cfg.report_dir);
    read_field(j, "fixtures_dir", cfg.fixtures_dir);

    if (cfg.max_tokens < 1) throw config_error("config: max_tokens must be >= 1");
    if (cfg.k < 1) throw config_error("config: k must be >= 1");
    if (cfg.embedding_dim < 1) throw config_error("config: embedding_dim must be >= 1");
    return cfg;
}

std::string config_digest(const RunConfig& cfg) {
    std::ostringstream canon;
    for (const auto& q : cfg.queries) canon << q.text << '\x1f' << q.retmax << '\x1e';
    canon << cfg.tokenizer << '\x1e' << cfg.max_tokens << '\x1e'
          << cfg.embedding_provider << '\x1e' << cfg.embedding_dim << '\x1e'
          << cfg.embedding_model << '\x1e' << cfg.k << '\x1e' << cfg.llm_provider
          << '\x1e' << cfg.llm_model << '\x1e' << cfg.synth.refusal_pattern << '\x1e'
          << cfg.synth.drop_refusals << '\x1e' << cfg.synth.fallback_text << '\x1e'
          << cfg.synth.decoding.temperature << '\x1e' << cfg.synth.decoding.max_tokens
          << '\x1e' << cfg.synth.provider_window_tokens;
    return to_hex(fnv1a64(canon.str()));
}

}  // namespace reta
