#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace reta {

enum class QuestionGroup { clinical_information, disease_biology, drug_information };
enum class QuestionScope { general, specific };
enum class Metric { accuracy, relevance, readability };

std::string to_string(QuestionGroup g);
std::string to_string(QuestionScope s);
std::string to_string(Metric m);
QuestionGroup group_from_string(const std::string& s);
QuestionScope scope_from_string(const std::string& s);
Metric metric_from_string(const std::string& s);

inline constexpr Metric kAllMetrics[] = {Metric::accuracy, Metric::relevance,
                                         Metric::readability};

struct Question {
    int id = 0;  // 1..19
    std::string text;
    QuestionGroup group;
    QuestionScope scope;
};

// The 19-question benchmark, compiled in.
const std::vector<Question>& builtin_question_set();

// Same set from the versioned asset file (tab-separated:
// id, group, scope, text). Throws integrity_error when missing/corrupt.
std::vector<Question> load_question_set(const std::string& path);

struct ModelEntry {
    std::string model_id;
    std::string workflow;
    std::string base_llm;
};

// The four evaluated workflows.
const std::vector<ModelEntry>& builtin_model_registry();

struct ScoreRecord {
    int question_id = 0;
    std::string model_id;
    Metric metric = Metric::accuracy;
    std::string reviewer_id;
    int score = 0;  // 1..3
    bool adjudicated = false;
};

void validate(const ScoreRecord& record);

// Adjudicator record wins outright; a sole reviewer record passes
// through. Conflicting reviewer records with no adjudicator throw.
ScoreRecord adjudicate(const std::vector<ScoreRecord>& records);

struct HallucinationAnnotation {
    int question_id = 0;
    std::string model_id;
    int count = 0;
    std::string note;
};

struct LevelCounts {
    int c1 = 0;
    int c2 = 0;
    int c3 = 0;
    friend bool operator==(const LevelCounts&, const LevelCounts&) = default;
};

// All aggregations expect exactly one adjudicated score per question
// for the given (model, metric); gaps throw a coverage error naming the
// missing question ids.
LevelCounts count_by_level(const std::vector<ScoreRecord>& scores,
                           const std::string& model_id, Metric metric,
                           const std::vector<Question>& questions);

int total_score(const std::vector<ScoreRecord>& scores, const std::string& model_id,
                Metric metric, const std::vector<Question>& questions);

std::map<QuestionGroup, int> category_summary(const std::vector<ScoreRecord>& scores,
                                              const std::string& model_id,
                                              Metric metric,
                                              const std::vector<Question>& questions);

struct HallucinationSummary {
    int total = 0;
    int affected_questions = 0;
    friend bool operator==(const HallucinationSummary&, const HallucinationSummary&) = default;
};

HallucinationSummary hallucination_summary(
    const std::vector<HallucinationAnnotation>& annotations,
    const std::string& model_id);

struct ReportedTuple {
    int n_questions = 0;
    int c3 = 0;
    int c1 = 0;
    int total = 0;
};

struct AuditResult {
    bool feasible = false;
    int c2 = 0;            // implied 2-count when feasible
    int implied_total = 0; // 3*c3 + 2*c2 + c1 for the implied c2
    std::string reason;    // empty when feasible
};

// Checks that a reported (level-count, total) tuple admits an integer
// c2 >= 0 reproducing the total.
AuditResult feasibility_audit(const ReportedTuple& reported);

struct AggregateCell {
    std::string model_id;
    Metric metric = Metric::accuracy;
    LevelCounts counts;
    int total = 0;
    std::map<QuestionGroup, int> by_group;
    AuditResult audit;
};

struct AggregateReport {
    std::vector<AggregateCell> cells;  // one per (model, metric)
    std::map<std::string, HallucinationSummary> hallucinations;  // by model
    // per-question adjudicated scores: (question_id, model_id, metric) -> score
    std::map<std::tuple<int, std::string, int>, int> grid;
};

AggregateReport aggregate(const std::vector<ScoreRecord>& scores,
                          const std::vector<HallucinationAnnotation>& annotations,
                          const std::vector<Question>& questions);

enum class ReportFormat { csv, table };

// Deterministic rendering; the per-question grid is ordered by question
// category (clinical, drug, disease) then id.
std::string emit_report(const AggregateReport& report,
                        const std::vector<Question>& questions,
                        ReportFormat format);

// Line-delimited files: scores are
// question_id \t model_id \t metric \t reviewer_id \t score \t adjudicated
// and annotations are question_id \t model_id \t count \t note.
std::vector<ScoreRecord> load_scores(const std::string& path);
std::vector<HallucinationAnnotation> load_annotations(const std::string& path);

}  // namespace reta
