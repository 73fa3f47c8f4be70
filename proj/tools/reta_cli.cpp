#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "reta/commands.hpp"
#include "reta/errors.hpp"

namespace {

// 0 success, 1 usage/config, 2 data integrity, 3 transport
int run(int argc, char** argv) {
    CLI::App app{"Retrieval-augmented Q&A pipeline over a PubMed Central corpus"};
    app.require_subcommand(1);
    app.fallthrough();  // globals may follow the subcommand name

    std::string config_path;
    bool live = false;
    int k_override = 0;
    int max_tokens_override = 0;
    std::string provider_override;
    app.add_option("--config", config_path, "Run configuration file (JSON)");
    app.add_flag("--live", live, "Use live services instead of fixtures");
    app.add_option("--k", k_override, "Override retrieval k");
    app.add_option("--max-tokens", max_tokens_override, "Override segment token cap");
    app.add_option("--provider", provider_override, "Override the LLM provider");

    auto* ingest = app.add_subcommand("ingest", "Download and preprocess the corpus");
    auto* index = app.add_subcommand("index", "Segment, embed and persist the index");
    auto* ask = app.add_subcommand("ask", "Answer a question from the index");
    std::string question;
    ask->add_option("question", question, "Question text")->required();
    auto* eval = app.add_subcommand("eval", "Aggregate scores and annotations");
    std::string scores_path, annotations_path;
    eval->add_option("--scores", scores_path, "Score file (TSV)")->required();
    eval->add_option("--annotations", annotations_path, "Annotation file (TSV)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    reta::RunConfig config =
        config_path.empty() ? reta::RunConfig{} : reta::load_config(config_path);
    config.live = config.live || live;
    if (k_override > 0) config.k = static_cast<std::size_t>(k_override);
    if (max_tokens_override > 0)
        config.max_tokens = static_cast<std::size_t>(max_tokens_override);
    if (!provider_override.empty()) config.llm_provider = provider_override;

    if (ingest->parsed()) {
        std::cout << reta::cmd_ingest(config);
    } else if (index->parsed()) {
        std::cout << reta::cmd_index(config);
    } else if (ask->parsed()) {
        std::cout << reta::cmd_ask(config, question).output;
    } else if (eval->parsed()) {
        std::cout << reta::cmd_eval(config, scores_path, annotations_path);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const reta::usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const reta::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const reta::rate_limit_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const reta::transport_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const reta::pipeline_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const reta::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
