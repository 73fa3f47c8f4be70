#include "reta/evalkit.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "reta/errors.hpp"

namespace reta {

std::string to_string(QuestionGroup g) {
    switch (g) {
        case QuestionGroup::clinical_information: return "clinical-information";
        case QuestionGroup::disease_biology: return "disease-biology";
        case QuestionGroup::drug_information: return "drug-information";
    }
    throw error("bad group");
}

std::string to_string(QuestionScope s) {
    return s == QuestionScope::general ? "general" : "specific";
}

std::string to_string(Metric m) {
    switch (m) {
        case Metric::accuracy: return "accuracy";
        case Metric::relevance: return "relevance";
        case Metric::readability: return "readability";
    }
    throw error("bad metric");
}

QuestionGroup group_from_string(const std::string& s) {
    if (s == "clinical-information") return QuestionGroup::clinical_information;
    if (s == "disease-biology") return QuestionGroup::disease_biology;
    if (s == "drug-information") return QuestionGroup::drug_information;
    throw parse_error("unknown question group: " + s);
}

QuestionScope scope_from_string(const std::string& s) {
    if (s == "general") return QuestionScope::general;
    if (s == "specific") return QuestionScope::specific;
    throw parse_error("unknown question scope: " + s);
}

Metric metric_from_string(const std::string& s) {
    if (s == "accuracy") return Metric::accuracy;
    if (s == "relevance") return Metric::relevance;
    if (s == "readability") return Metric::readability;
    throw parse_error("unknown metric: " + s);
}

namespace {

using G = QuestionGroup;
using S = QuestionScope;

const std::vector<Question> kQuestions = {
    {1, "What is epcoritamab? Please provide sources for your answer.", G::drug_information, S::general},
    {2, "What are the subtypes of DLBCL? Please provide sources for your answer.", G::disease_biology, S::general},
    {3, "What are the antibody therapies targeting CD20 for treatment of DLBCL? Please provide sources for your answer.", G::drug_information, S::general},
    {4, "What is the standard of care for treatment of DLBCL?", G::clinical_information, S::specific},
    {5, "What are the approved drugs for treatment of DLBCL?", G::clinical_information, S::specific},
    {6, "What is the overall response rate of DLBCL patients treated with glofitamab?", G::clinical_information, S::specific},
    {7, "What is a treatment to use in DLBCL patients who have progressed on CAR-T?", G::drug_information, S::general},
    {8, "What are common treatments used in patients who have relapsed or were refractory to standard of care treatments in DLBCL?", G::drug_information, S::general},
    {9, "Do any DLBCL patient subtypes respond more favorably to chemotherapy or CAR-T treatments?", G::clinical_information, S::specific},
    {10, "What are the most common adverse events observed in DLBCL patients treated with R-CHOP?", G::clinical_information, S::specific},
    {11, "What biomarkers in DLBCL have been reported to correlate with either response or progression following treatment with R-CHOP?", G::clinical_information, S::specific},
    {12, "What treatment combinations have been shown to be effective in DLBCL patients who have progressed on CAR-T treatment? Please provide sources for your answer.", G::clinical_information, S::specific},
    {13, "How can minimal residual disease (MRD) be used to understand clinical outcomes in DLBCL patients? Please provide sources for your answer.", G::disease_biology, S::general},
    {14, "Have checkpoint inhibitor treatments in monotherapy or combination therapy settings shown efficacy in DLBCL patients? Provide references.", G::drug_information, S::specific},
    {15, "DLBCL diagnosis and prognosis.", G::clinical_information, S::general},
    {16, "Landscape of DLBCL treatment as SOC. Please provide sources for your answer.", G::clinical_information, S::specific},
    {17, "Emerging novel treatment options for DLBCL patients.", G::drug_information, S::general},
    {18, "what is the importance of TP53 in DLBCL?", G::disease_biology, S::general},
    {19, "What is the prevalence of double hit mutations in lymphoma?", G::disease_biology, S::specific},
};

const std::vector<ModelEntry> kModels = {
    {"reta", "RetA LLM", "text-davinci-003"},
    {"gpt3.5", "chatGPT3.5", "gpt-3.5-turbo"},
    {"gpt4", "chatGPT4", "gpt-4"},
    {"bing", "BingChat", "Custom GPT4"},
};

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

}  // namespace

const std::vector<Question>& builtin_question_set() { return kQuestions; }
const std::vector<ModelEntry>& builtin_model_registry() { return kModels; }

std::vector<Question> load_question_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw integrity_error("question asset missing: " + path);
    std::vector<Question> questions;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_tabs(line);
        if (fields.size() != 4) {
            throw integrity_error("question asset corrupt at line: " + line);
        }
        Question q;
        try {
            q.id = std::stoi(fields[0]);
            q.group = group_from_string(fields[1]);
            q.scope = scope_from_string(fields[2]);
        } catch (const std::exception& e) {
            throw integrity_error("question asset corrupt: " + std::string(e.what()));
        }
        q.text = fields[3];
        questions.push_back(std::move(q));
    }
    if (questions.size() != 19) {
        throw integrity_error("question asset holds " +
                              std::to_string(questions.size()) + " rows, expected 19");
    }
    for (std::size_t i = 0; i < questions.size(); ++i) {
        if (questions[i].id != static_cast<int>(i) + 1) {
            throw integrity_error("question ids must cover 1..19 in order");
        }
    }
    return questions;
}

void validate(const ScoreRecord& record) {
    if (record.score < 1 || record.score > 3) {
        throw integrity_error("score out of 1..3 range: " + std::to_string(record.score) +
                              " (question " + std::to_string(record.question_id) +
                              ", model " + record.model_id + ")");
    }
    if (record.question_id < 1) {
        throw integrity_error("bad question id " + std::to_string(record.question_id));
    }
}

ScoreRecord adjudicate(const std::vector<ScoreRecord>& records) {
    if (records.empty()) throw std::invalid_argument("adjudicate: no records");
    for (const auto& r : records) validate(r);
    for (const auto& r : records) {
        if (r.adjudicated) return r;
    }
    if (records.size() == 1) {
        ScoreRecord r = records.front();
        r.adjudicated = true;
        return r;
    }
    bool all_equal = std::all_of(records.begin(), records.end(), [&](const auto& r) {
        return r.score == records.front().score;
    });
    if (all_equal) {
        ScoreRecord r = records.front();
        r.adjudicated = true;
        return r;
    }
    std::string reviewers;
    for (const auto& r : records) {
        if (!reviewers.empty()) reviewers += ", ";
        reviewers += r.reviewer_id + "=" + std::to_string(r.score);
    }
    throw integrity_error("unresolved reviewer conflict (question " +
                          std::to_string(records.front().question_id) + ", model " +
                          records.front().model_id + "): " + reviewers);
}

namespace {

// One adjudicated score per question, or a coverage error naming gaps.
std::map<int, int> score_map(const std::vector<ScoreRecord>& scores,
                             const std::string& model_id, Metric metric,
                             const std::vector<Question>& questions) {
    std::map<int, std::vector<ScoreRecord>> by_question;
    for (const auto& r : scores) {
        if (r.model_id == model_id && r.metric == metric) {
            by_question[r.question_id].push_back(r);
        }
    }
    std::map<int, int> result;
    std::vector<int> missing;
    for (const auto& q : questions) {
        auto it = by_question.find(q.id);
        if (it == by_question.end()) {
            missing.push_back(q.id);
        } else {
            result[q.id] = adjudicate(it->second).score;
        }
    }
    if (!missing.empty()) {
        std::string ids;
        for (int id : missing) {
            if (!ids.empty()) ids += ", ";
            ids += std::to_string(id);
        }
        throw integrity_error("missing scores for model " + model_id + ", metric " +
                              to_string(metric) + ", questions: " + ids);
    }
    return result;
}

}  // namespace

LevelCounts count_by_level(const std::vector<ScoreRecord>& scores,
                           const std::string& model_id, Metric metric,
                           const std::vector<Question>& questions) {
    LevelCounts counts;
    for (const auto& [id, score] : score_map(scores, model_id, metric, questions)) {
        if (score == 1) ++counts.c1;
        else if (score == 2) ++counts.c2;
        else ++counts.c3;
    }
    return counts;
}

int total_score(const std::vector<ScoreRecord>& scores, const std::string& model_id,
                Metric metric, const std::vector<Question>& questions) {
    int total = 0;
    for (const auto& [id, score] : score_map(scores, model_id, metric, questions)) {
        total += score;
    }
    return total;
}

std::map<QuestionGroup, int> category_summary(const std::vector<ScoreRecord>& scores,
                                              const std::string& model_id,
                                              Metric metric,
                                              const std::vector<Question>& questions) {
    auto by_question = score_map(scores, model_id, metric, questions);
    std::map<QuestionGroup, int> sums = {
        {QuestionGroup::clinical_information, 0},
        {QuestionGroup::disease_biology, 0},
        {QuestionGroup::drug_information, 0},
    };
    for (const auto& q : questions) {
        sums[q.group] += by_question.at(q.id);
    }
    return sums;
}

HallucinationSummary hallucination_summary(
    const std::vector<HallucinationAnnotation>& annotations,
    const std::string& model_id) {
    std::map<int, int> by_question;
    HallucinationSummary summary;
    for (const auto& a : annotations) {
        if (a.model_id != model_id) continue;
        if (a.count < 0) throw integrity_error("negative hallucination count");
        if (!by_question.emplace(a.question_id, a.count).second) {
            throw integrity_error("duplicate hallucination annotation for question " +
                                  std::to_string(a.question_id) + ", model " + model_id);
        }
        summary.total += a.count;
        if (a.count >= 1) ++summary.affected_questions;
    }
    return summary;
}

AuditResult feasibility_audit(const ReportedTuple& reported) {
    AuditResult result;
    const int c2 = reported.n_questions - reported.c3 - reported.c1;
    if (c2 < 0) {
        result.reason = "level counts exceed question count (implied c2 = " +
                        std::to_string(c2) + ")";
        return result;
    }
    result.c2 = c2;
    result.implied_total = 3 * reported.c3 + 2 * c2 + reported.c1;
    if (result.implied_total != reported.total) {
        result.reason = "implied total " + std::to_string(result.implied_total) +
                        " != reported total " + std::to_string(reported.total);
        return result;
    }
    result.feasible = true;
    return result;
}

AggregateReport aggregate(const std::vector<ScoreRecord>& scores,
                          const std::vector<HallucinationAnnotation>& annotations,
                          const std::vector<Question>& questions) {
    for (const auto& r : scores) validate(r);

    std::vector<std::string> models;
    for (const auto& r : scores) {
        if (std::find(models.begin(), models.end(), r.model_id) == models.end()) {
            models.push_back(r.model_id);
        }
    }
    std::sort(models.begin(), models.end());

    AggregateReport report;
    for (const auto& model : models) {
        for (Metric metric : kAllMetrics) {
            AggregateCell cell;
            cell.model_id = model;
            cell.metric = metric;
            cell.counts = count_by_level(scores, model, metric, questions);
            cell.total = total_score(scores, model, metric, questions);
            cell.by_group = category_summary(scores, model, metric, questions);
            cell.audit = feasibility_audit({static_cast<int>(questions.size()),
                                            cell.counts.c3, cell.counts.c1, cell.total});
            for (const auto& [id, score] :
                 score_map(scores, model, metric, questions)) {
                report.grid[{id, model, static_cast<int>(metric)}] = score;
            }
            report.cells.push_back(std::move(cell));
        }
    }

    std::vector<std::string> annotated;
    for (const auto& a : annotations) {
        if (std::find(annotated.begin(), annotated.end(), a.model_id) == annotated.end()) {
            annotated.push_back(a.model_id);
        }
    }
    std::sort(annotated.begin(), annotated.end());
    for (const auto& model : annotated) {
        report.hallucinations[model] = hallucination_summary(annotations, model);
    }
    return report;
}

namespace {

// Figure-2 style ordering: clinical, drug, disease, then id.
std::vector<Question> grid_order(const std::vector<Question>& questions) {
    auto rank = [](QuestionGroup g) {
        switch (g) {
            case QuestionGroup::clinical_information: return 0;
            case QuestionGroup::drug_information: return 1;
            case QuestionGroup::disease_biology: return 2;
        }
        return 3;
    };
    std::vector<Question> ordered = questions;
    std::stable_sort(ordered.begin(), ordered.end(), [&](const auto& a, const auto& b) {
        return std::pair(rank(a.group), a.id) < std::pair(rank(b.group), b.id);
    });
    return ordered;
}

}  // namespace

std::string emit_report(const AggregateReport& report,
                        const std::vector<Question>& questions, ReportFormat format) {
    std::ostringstream out;
    if (format == ReportFormat::csv) {
        out << "model,metric,c1,c2,c3,total,clinical,drug,disease,audit\n";
        for (const auto& cell : report.cells) {
            out << cell.model_id << ',' << to_string(cell.metric) << ','
                << cell.counts.c1 << ',' << cell.counts.c2 << ',' << cell.counts.c3
                << ',' << cell.total << ','
                << cell.by_group.at(QuestionGroup::clinical_information) << ','
                << cell.by_group.at(QuestionGroup::drug_information) << ','
                << cell.by_group.at(QuestionGroup::disease_biology) << ','
                << (cell.audit.feasible ? "feasible" : "infeasible") << '\n';
        }
        out << "model,hallucination_total,affected_questions\n";
        for (const auto& [model, summary] : report.hallucinations) {
            out << model << ',' << summary.total << ',' << summary.affected_questions
                << '\n';
        }
        return out.str();
    }
    if (format != ReportFormat::table) throw usage_error("unknown report format");

    out << "Aggregate scores (per model and metric)\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%-10s %-12s %4s %4s %4s %6s %9s %6s %8s  %s\n",
                  "model", "metric", "c1", "c2", "c3", "total", "clinical", "drug",
                  "disease", "audit");
    out << line;
    for (const auto& cell : report.cells) {
        const std::string audit = cell.audit.feasible
                                      ? "feasible"
                                      : "infeasible: " + cell.audit.reason;
        std::snprintf(line, sizeof(line), "%-10s %-12s %4d %4d %4d %6d %9d %6d %8d  %s\n",
                      cell.model_id.c_str(), to_string(cell.metric).c_str(),
                      cell.counts.c1, cell.counts.c2, cell.counts.c3, cell.total,
                      cell.by_group.at(QuestionGroup::clinical_information),
                      cell.by_group.at(QuestionGroup::drug_information),
                      cell.by_group.at(QuestionGroup::disease_biology),
                      audit.c_str());
        out << line;
    }

    if (!report.hallucinations.empty()) {
        out << "\nHallucinations (per model)\n";
        for (const auto& [model, summary] : report.hallucinations) {
            std::snprintf(line, sizeof(line), "%-10s total=%-4d questions=%d\n",
                          model.c_str(), summary.total, summary.affected_questions);
            out << line;
        }
    }

    if (!report.grid.empty()) {
        std::vector<std::string> models;
        for (const auto& cell : report.cells) {
            if (std::find(models.begin(), models.end(), cell.model_id) == models.end()) {
                models.push_back(cell.model_id);
            }
        }
        out << "\nPer-question scores (ordered by category, then id; "
               "columns are accuracy/relevance/readability)\n";
        std::string header = "question  group                ";
        for (const auto& m : models) {
            char cell[32];
            std::snprintf(cell, sizeof(cell), " %-12s", m.c_str());
            header += cell;
        }
        out << header << '\n';
        for (const auto& q : grid_order(questions)) {
            std::snprintf(line, sizeof(line), "%-9d %-20s", q.id,
                          to_string(q.group).c_str());
            out << line;
            for (const auto& m : models) {
                std::string triple;
                for (Metric metric : kAllMetrics) {
                    auto it = report.grid.find({q.id, m, static_cast<int>(metric)});
                    triple += it == report.grid.end() ? "-" : std::to_string(it->second);
                    if (metric != Metric::readability) triple += '/';
                }
                std::snprintf(line, sizeof(line), " %-12s", triple.c_str());
                out << line;
            }
            out << '\n';
        }
    }
    return out.str();
}

std::vector<ScoreRecord> load_scores(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw integrity_error("score file missing: " + path);
    std::vector<ScoreRecord> records;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_tabs(line);
        if (fields.size() != 6) {
            throw integrity_error("score file " + path + ": bad record at line " +
                                  std::to_string(lineno));
        }
        ScoreRecord r;
        try {
            r.question_id = std::stoi(fields[0]);
            r.model_id = fields[1];
            r.metric = metric_from_string(fields[2]);
            r.reviewer_id = fields[3];
            r.score = std::stoi(fields[4]);
            r.adjudicated = fields[5] == "1" || fields[5] == "true";
        } catch (const std::exception& e) {
            throw integrity_error("score file " + path + " line " +
                                  std::to_string(lineno) + ": " + e.what());
        }
        validate(r);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<HallucinationAnnotation> load_annotations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw integrity_error("annotation file missing: " + path);
    std::vector<HallucinationAnnotation> annotations;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_tabs(line);
        if (fields.size() < 3 || fields.size() > 4) {
            throw integrity_error("annotation file " + path + ": bad record at line " +
                                  std::to_string(lineno));
        }
        HallucinationAnnotation a;
        try {
            a.question_id = std::stoi(fields[0]);
            a.model_id = fields[1];
            a.count = std::stoi(fields[2]);
        } catch (const std::exception& e) {
            throw integrity_error("annotation file " + path + " line " +
                                  std::to_string(lineno) + ": " + e.what());
        }
        if (fields.size() == 4) a.note = fields[3];
        if (a.count < 0) {
            throw integrity_error("annotation file " + path + " line " +
                                  std::to_string(lineno) + ": negative count");
        }
        annotations.push_back(std::move(a));
    }
    return annotations;
}

}  // namespace reta
