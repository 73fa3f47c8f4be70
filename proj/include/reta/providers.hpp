#pragma once

#include <memory>
#include <string>

#include "reta/embedstore.hpp"
#include "reta/synth.hpp"

namespace reta {

// "deterministic" (offline, default) or "openai" (live, key from
// RETA_EMBED_API_KEY). Unknown names throw config_error.
std::unique_ptr<EmbeddingProvider> make_embedding_provider(
    const std::string& name, std::size_t dim, const std::string& model = "");

// "mock" (offline, default) or "openai" text-completion endpoint
// (key from RETA_LLM_API_KEY).
std::unique_ptr<LLMProvider> make_llm_provider(const std::string& name,
                                               const std::string& model = "");

}  // namespace reta
