#include "reta/commands.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "reta/corpus.hpp"
#include "reta/errors.hpp"
#include "reta/evalkit.hpp"
#include "reta/hash.hpp"
#include "reta/providers.hpp"
#include "reta/segmenter.hpp"

namespace reta {

namespace {

std::shared_ptr<Transport> make_transport(const RunConfig& config) {
    if (config.live) return make_entrez_http_transport();
    if (config.fixtures_dir.empty()) {
        throw transport_error(
            "offline mode needs fixtures_dir in the config (or pass --live)");
    }
    return std::make_shared<FixtureTransport>(config.fixtures_dir);
}

std::unique_ptr<Tokenizer> make_tokenizer(const RunConfig& config) {
    if (config.tokenizer == "word") return std::make_unique<WordTokenizer>();
    throw config_error("unknown tokenizer: " + config.tokenizer);
}

std::string key_string(const SegmentKey& key) {
    return key.pmc_id + "#" + std::to_string(key.segment_index);
}

}  // namespace

std::string cmd_ingest(const RunConfig& config) {
    if (config.queries.empty()) throw usage_error("ingest: no queries configured");

    auto transport = make_transport(config);
    EntrezClient client(transport);
    Corpus corpus = build_corpus(config.queries, client);
    save_corpus(corpus, config.corpus_path, config.manifest_path);

    std::ostringstream out;
    out << "config " << config_digest(config) << "\n";
    for (const auto& stats : corpus.per_query) {
        out << "query '" << stats.query << "': hits=" << stats.hits
            << " fetched=" << stats.fetched << " skipped=" << stats.skipped << "\n";
    }
    out << "corpus: " << corpus.documents.size() << " documents -> "
        << config.corpus_path << "\n";
    if (corpus.documents.empty()) {
        out << "warning: corpus is empty\n";
    }
    if (!corpus.errors.empty()) {
        out << "skipped articles:\n";
        for (const auto& e : corpus.errors) out << "  " << e << "\n";
    }
    return out.str();
}

std::string cmd_index(const RunConfig& config) {
    const auto documents = load_corpus(config.corpus_path);
    auto tokenizer = make_tokenizer(config);
    auto embedder = make_embedding_provider(config.embedding_provider,
                                            config.embedding_dim,
                                            config.embedding_model);

    EmbeddingStore store(embedder->name());
    std::size_t segment_count = 0;
    for (const auto& [pmc_id, doc] : documents) {
        for (const auto& seg :
             segment_document(pmc_id, doc.body, *tokenizer, config.max_tokens)) {
            EmbeddingRecord rec;
            rec.key = {seg.pmc_id, seg.index};
            rec.text = seg.text;
            rec.text_hash = fnv1a64(seg.text);
            rec.vector = embedder->embed(seg.text);
            store.upsert(std::move(rec));
            ++segment_count;
        }
    }
    store.persist(config.index_path);

    std::ostringstream out;
    out << "config " << config_digest(config) << "\n"
        << "index: " << segment_count << " segments from " << documents.size()
        << " documents -> " << config.index_path << "\n";
    return out.str();
}

AskResult cmd_ask(const RunConfig& config, const std::string& question) {
    if (question.empty()) throw usage_error("ask: empty question");

    EmbeddingStore store = EmbeddingStore::load(config.index_path);
    auto embedder = make_embedding_provider(config.embedding_provider,
                                            config.embedding_dim,
                                            config.embedding_model);
    auto llm = make_llm_provider(config.llm_provider, config.llm_model);

    const auto started = std::chrono::steady_clock::now();
    AskResult result;
    result.answer = answer_query(question, store, {config.k}, *embedder, *llm,
                                 config.synth);
    const double elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                  started)
            .count();

    std::ostringstream out;
    out << "config " << config_digest(config) << "\n"
        << "answer: " << result.answer.answer << "\n"
        << "provenance:";
    if (result.answer.provenance.empty()) {
        out << " (none)";
    } else {
        for (const auto& key : result.answer.provenance) out << ' ' << key_string(key);
    }
    out << "\n";
    result.output = out.str();

    // one structured audit record per query
    if (!config.audit_log_path.empty()) {
        nlohmann::json retrieved = nlohmann::json::array();
        for (const auto& hit : result.answer.retrieved) {
            retrieved.push_back({{"key", key_string({hit.segment.pmc_id, hit.segment.index})},
                                 {"score", hit.score}});
        }
        nlohmann::json stage_one = nlohmann::json::array();
        for (const auto& ans : result.answer.stage_one_answers) {
            stage_one.push_back({{"key", key_string(ans.key)},
                                 {"text", ans.text},
                                 {"is_refusal", ans.is_refusal}});
        }
        nlohmann::json record = {
            {"config", config_digest(config)},
            {"query", question},
            {"retrieved", retrieved},
            {"stage_one", stage_one},
            {"answer", result.answer.answer},
            {"elapsed_ms", elapsed_ms},
        };
        std::ofstream log(config.audit_log_path, std::ios::app);
        if (log) log << record.dump() << '\n';
    }
    return result;
}

std::string cmd_eval(const RunConfig& config, const std::string& scores_path,
                     const std::string& annotations_path) {
    const auto scores = load_scores(scores_path);
    std::vector<HallucinationAnnotation> annotations;
    if (!annotations_path.empty()) {
        annotations = load_annotations(annotations_path);
    }
    const auto& questions = builtin_question_set();
    AggregateReport report = aggregate(scores, annotations, questions);

    const std::string digest = config_digest(config);
    std::filesystem::create_directories(config.report_dir);
    const std::string csv_path = config.report_dir + "/report_" + digest + ".csv";
    const std::string table_path = config.report_dir + "/report_" + digest + ".txt";
    const std::string table = emit_report(report, questions, ReportFormat::table);
    {
        std::ofstream csv(csv_path, std::ios::trunc);
        if (!csv) throw error("cannot write " + csv_path);
        csv << emit_report(report, questions, ReportFormat::csv);
        std::ofstream txt(table_path, std::ios::trunc);
        if (!txt) throw error("cannot write " + table_path);
        txt << table;
    }

    std::ostringstream out;
    out << "config " << digest << "\n"
        << table << "reports: " << csv_path << ", " << table_path << "\n";
    return out.str();
}

}  // namespace reta
