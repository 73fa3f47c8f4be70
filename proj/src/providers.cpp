#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdlib>

#include <json.hpp>

#include "reta/errors.hpp"
#include "reta/providers.hpp"

namespace reta {

namespace {

std::string require_key(const char* env) {
    const char* key = std::getenv(env);
    if (!key || !*key) {
        throw config_error(std::string("live provider needs ") + env);
    }
    return key;
}

class OpenAIEmbeddingProvider final : public EmbeddingProvider {
public:
    OpenAIEmbeddingProvider(std::size_t dim, std::string model)
        : dim_(dim),
          model_(model.empty() ? "text-embedding-ada-002" : std::move(model)),
          api_key_(require_key("RETA_EMBED_API_KEY")),
          client_("https://api.openai.com") {
        client_.set_read_timeout(60);
    }

    std::string name() const override { return "openai:" + model_; }
    std::size_t dim() const override { return dim_; }

    EmbeddingVector embed(const std::string& text) const override {
        if (text.empty()) throw std::invalid_argument("embed: empty text");
        nlohmann::json body = {{"model", model_}, {"input", text}};
        auto res = client_.Post("/v1/embeddings",
                                {{"Authorization", "Bearer " + api_key_}},
                                body.dump(), "application/json");
        if (!res) throw transport_error("embeddings: " + httplib::to_string(res.error()));
        if (res->status != 200) {
            throw transport_error("embeddings: HTTP " + std::to_string(res->status));
        }
        auto j = nlohmann::json::parse(res->body);
        EmbeddingVector vec;
        for (const auto& x : j.at("data").at(0).at("embedding")) {
            vec.push_back(x.get<float>());
        }
        return vec;
    }

private:
    std::size_t dim_;
    std::string model_;
    std::string api_key_;
    mutable httplib::Client client_;
};

class OpenAICompletionProvider final : public LLMProvider {
public:
    explicit OpenAICompletionProvider(std::string model)
        : model_(model.empty() ? "gpt-3.5-turbo-instruct" : std::move(model)),
          api_key_(require_key("RETA_LLM_API_KEY")),
          client_("https://api.openai.com") {
        client_.set_read_timeout(120);
    }

    std::string name() const override { return "openai:" + model_; }

    std::string complete(const std::string& prompt,
                         const DecodingParams& params) override {
        nlohmann::json body = {{"model", model_},
                               {"prompt", prompt},
                               {"temperature", params.temperature},
                               {"max_tokens", params.max_tokens}};
        auto res = client_.Post("/v1/completions",
                                {{"Authorization", "Bearer " + api_key_}},
                                body.dump(), "application/json");
        if (!res) throw transport_error("completions: " + httplib::to_string(res.error()));
        if (res->status != 200) {
            throw transport_error("completions: HTTP " + std::to_string(res->status));
        }
        auto j = nlohmann::json::parse(res->body);
        return j.at("choices").at(0).at("text").get<std::string>();
    }

private:
    std::string model_;
    std::string api_key_;
    httplib::Client client_;
};

}  // namespace

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const std::string& name,
                                                           std::size_t dim,
                                                           const std::string& model) {
    if (name == "deterministic") return std::make_unique<HashedEmbeddingProvider>(dim);
    if (name == "openai") return std::make_unique<OpenAIEmbeddingProvider>(dim, model);
    throw config_error("unknown embedding provider: " + name);
}

std::unique_ptr<LLMProvider> make_llm_provider(const std::string& name,
                                               const std::string& model) {
    if (name == "mock") return std::make_unique<MockLLMProvider>();
    if (name == "openai") return std::make_unique<OpenAICompletionProvider>(model);
    throw config_error("unknown LLM provider: " + name);
}

}  // namespace reta
