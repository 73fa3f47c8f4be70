#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reta/commands.hpp"
#include "reta/corpus.hpp"
#include "reta/embedstore.hpp"
#include "reta/errors.hpp"
#include "reta/evalkit.hpp"
#include "reta/providers.hpp"
#include "reta/segmenter.hpp"
#include "reta/synth.hpp"

namespace py = pybind11;
using namespace reta;

PYBIND11_MODULE(_reta, m) {
    m.doc() = "Retrieval-augmented Q&A pipeline core";

    py::register_exception<error>(m, "RetaError");

    // segmenter
    py::class_<WordTokenizer>(m, "WordTokenizer")
        .def(py::init<>())
        .def("tokenize", &WordTokenizer::tokenize)
        .def("detokenize", &WordTokenizer::detokenize);

    py::class_<Segment>(m, "Segment")
        .def_readonly("pmc_id", &Segment::pmc_id)
        .def_readonly("index", &Segment::index)
        .def_readonly("text", &Segment::text)
        .def_readonly("token_count", &Segment::token_count);

    m.def("count_tokens", [](const std::string& text) {
        WordTokenizer tok;
        return count_tokens(text, tok);
    });
    m.def(
        "segment_document",
        [](const std::string& pmc_id, const std::string& body, std::size_t max_tokens) {
            WordTokenizer tok;
            return segment_document(pmc_id, body, tok, max_tokens);
        },
        py::arg("pmc_id"), py::arg("body"), py::arg("max_tokens") = 4000);

    // corpus
    py::class_<Document>(m, "Document")
        .def_readonly("pmc_id", &Document::pmc_id)
        .def_readonly("title", &Document::title)
        .def_readonly("body", &Document::body)
        .def_readonly("source_queries", &Document::source_queries);

    m.def("default_queries", [] {
        std::vector<std::pair<std::string, std::size_t>> out;
        for (const auto& q : default_query_set()) out.emplace_back(q.text, q.retmax);
        return out;
    });
    m.def(
        "preprocess",
        [](const std::string& pmc_id, const std::string& xml) {
            return preprocess({pmc_id, xml});
        },
        py::arg("pmc_id"), py::arg("xml"));

    // embedstore
    m.def("cosine", &cosine);
    m.def(
        "embed",
        [](const std::string& text, std::size_t dim) {
            return HashedEmbeddingProvider(dim).embed(text);
        },
        py::arg("text"), py::arg("dim") = 256);

    py::class_<EmbeddingStore>(m, "EmbeddingStore")
        .def(py::init<>())
        .def("upsert",
             [](EmbeddingStore& store, const std::string& pmc_id,
                std::size_t segment_index, const std::string& text,
                const std::vector<float>& vector) {
                 EmbeddingRecord rec;
                 rec.key = {pmc_id, segment_index};
                 rec.text = text;
                 rec.vector = vector;
                 store.upsert(std::move(rec));
             })
        .def("__len__", &EmbeddingStore::size)
        .def("top_k",
             [](const EmbeddingStore& store, const std::vector<float>& query,
                std::size_t k) {
                 std::vector<std::tuple<std::string, std::size_t, double>> out;
                 for (const auto& hit : store.top_k(query, {k})) {
                     out.emplace_back(hit.segment.pmc_id, hit.segment.index, hit.score);
                 }
                 return out;
             })
        .def("persist", &EmbeddingStore::persist)
        .def_static("load", &EmbeddingStore::load);

    // synth
    m.def("render_stage_one", [](const std::string& segment_text, const std::string& query) {
        Segment seg;
        seg.text = segment_text;
        return render_stage_one(seg, query);
    });
    m.def("render_stage_two", &render_stage_two);
    m.def("stage_one_template", &stage_one_template,
          py::return_value_policy::reference);
    m.def("stage_two_template", &stage_two_template,
          py::return_value_policy::reference);
    m.def(
        "answer_query",
        [](const std::string& query, const EmbeddingStore& store, std::size_t k) {
            HashedEmbeddingProvider embedder(store.dim() ? store.dim() : 256);
            MockLLMProvider llm;
            FinalAnswer ans = answer_query(query, store, {k}, embedder, llm);
            std::vector<std::pair<std::string, std::size_t>> provenance;
            for (const auto& key : ans.provenance) {
                provenance.emplace_back(key.pmc_id, key.segment_index);
            }
            return py::make_tuple(ans.answer, provenance);
        },
        py::arg("query"), py::arg("store"), py::arg("k") = 4);

    // evalkit
    py::class_<Question>(m, "Question")
        .def_readonly("id", &Question::id)
        .def_readonly("text", &Question::text)
        .def_property_readonly("group",
                               [](const Question& q) { return to_string(q.group); })
        .def_property_readonly("scope",
                               [](const Question& q) { return to_string(q.scope); });

    m.def("question_set", [] { return builtin_question_set(); });
    m.def("feasibility_audit",
          [](int n_questions, int c3, int c1, int total) {
              AuditResult r = feasibility_audit({n_questions, c3, c1, total});
              return py::make_tuple(r.feasible, r.c2, r.reason);
          },
          py::arg("n_questions"), py::arg("c3"), py::arg("c1"), py::arg("total"));
    m.def("score_total",
          [](const std::vector<int>& scores) {
              int total = 0;
              for (int s : scores) {
                  if (s < 1 || s > 3) throw integrity_error("score out of range");
                  total += s;
              }
              return total;
          });
}
