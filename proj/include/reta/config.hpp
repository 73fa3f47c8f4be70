#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reta/corpus.hpp"
#include "reta/synth.hpp"

namespace reta {

// One config file drives every command, so a run is reproducible from
// the file plus the printed digest.
struct RunConfig {
    std::vector<CorpusQuery> queries = default_query_set();

    std::string tokenizer = "word";
    std::size_t max_tokens = 4000;

    std::string embedding_provider = "deterministic";
    std::size_t embedding_dim = 256;
    std::string embedding_model;  // live provider model name

    std::size_t k = 4;
    std::string llm_provider = "mock";
    std::string llm_model;  // live provider model name
    SynthConfig synth;

    bool live = false;

    std::string corpus_path = "corpus.jsonl";
    std::string manifest_path = "manifest.jsonl";
    std::string index_path = "index.bin";
    std::string audit_log_path = "audit.jsonl";
    std::string report_dir = ".";
    std::string fixtures_dir;  // offline transport source
};

RunConfig load_config(const std::string& path);

// Digest of the effective configuration, stamped into outputs.
std::string config_digest(const RunConfig& config);

}  // namespace reta
