#pragma once

#include <string>

#include "reta/config.hpp"
#include "reta/synth.hpp"

namespace reta {

// CLI command bodies, factored out so tests drive them directly.
// Each returns the text the CLI prints on success and throws a reta
// error subclass on failure (main maps those to exit codes).

std::string cmd_ingest(const RunConfig& config);

std::string cmd_index(const RunConfig& config);

struct AskResult {
    FinalAnswer answer;
    std::string output;  // printed answer + provenance
};

AskResult cmd_ask(const RunConfig& config, const std::string& question);

std::string cmd_eval(const RunConfig& config, const std::string& scores_path,
                     const std::string& annotations_path);

}  // namespace reta
