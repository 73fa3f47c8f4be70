#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "reta/errors.hpp"
#include "reta/evalkit.hpp"

using namespace reta;

namespace {

const std::string kAssets = std::string(RETA_REPO_DIR) + "/assets";

// builds a full 19-question single-reviewer score set from a vector
std::vector<ScoreRecord> scores_from_vector(const std::vector<int>& values,
                                            const std::string& model = "m",
                                            Metric metric = Metric::accuracy) {
    REQUIRE(values.size() == 19);
    std::vector<ScoreRecord> records;
    for (int i = 0; i < 19; ++i) {
        records.push_back({i + 1, model, metric, "r1", values[i], false});
    }
    return records;
}

std::vector<int> reta_accuracy_vector() {
    // twelve 3s, four 2s, three 1s
    std::vector<int> v(12, 3);
    v.insert(v.end(), 4, 2);
    v.insert(v.end(), 3, 1);
    return v;
}

}  // namespace

TEST_CASE("builtin question set") {
    const auto& questions = builtin_question_set();
    REQUIRE(questions.size() == 19);
    CHECK(questions[5].id == 6);
    CHECK(questions[5].text ==
          "What is the overall response rate of DLBCL patients treated with "
          "glofitamab?");
    CHECK(questions[5].group == QuestionGroup::clinical_information);
    CHECK(questions[5].scope == QuestionScope::specific);
    CHECK(questions[17].group == QuestionGroup::disease_biology);

    int clinical = 0, drug = 0, disease = 0;
    for (const auto& q : questions) {
        if (q.group == QuestionGroup::clinical_information) ++clinical;
        if (q.group == QuestionGroup::drug_information) ++drug;
        if (q.group == QuestionGroup::disease_biology) ++disease;
    }
    CHECK(clinical == 9);
    CHECK(drug == 6);
    CHECK(disease == 4);
}

TEST_CASE("question asset matches the builtin set byte for byte") {
    const auto loaded = load_question_set(kAssets + "/questions.tsv");
    const auto& builtin = builtin_question_set();
    REQUIRE(loaded.size() == builtin.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded[i].id == builtin[i].id);
        CHECK(loaded[i].text == builtin[i].text);
        CHECK(loaded[i].group == builtin[i].group);
        CHECK(loaded[i].scope == builtin[i].scope);
    }
    CHECK_THROWS_AS(load_question_set(kAssets + "/no_such_file.tsv"), integrity_error);
}

TEST_CASE("adjudication") {
    const ScoreRecord reviewer{3, "m", Metric::accuracy, "r2", 2, false};
    const ScoreRecord adjudicator{3, "m", Metric::accuracy, "adj", 3, true};

    SUBCASE("sole reviewer passes through") {
        const auto final = adjudicate({{3, "m", Metric::accuracy, "r1", 3, false}});
        CHECK(final.score == 3);
        CHECK(final.adjudicated);
    }
    SUBCASE("adjudicator wins outright") {
        CHECK(adjudicate({reviewer, adjudicator}).score == 3);
        CHECK(adjudicate({adjudicator, reviewer}).score == 3);
    }
    SUBCASE("agreeing reviewers need no adjudicator") {
        CHECK(adjudicate({{3, "m", Metric::accuracy, "r1", 2, false}, reviewer}).score == 2);
    }
    SUBCASE("conflicting reviewers without adjudicator fail, naming reviewers") {
        CHECK_THROWS_WITH_AS(
            adjudicate({{3, "m", Metric::accuracy, "r1", 3, false}, reviewer}),
            doctest::Contains("r1"), integrity_error);
    }
    SUBCASE("empty input") {
        CHECK_THROWS_AS(adjudicate({}), std::invalid_argument);
    }
}

TEST_CASE("count_by_level and total_score") {
    const auto& questions = builtin_question_set();

    const auto reta = scores_from_vector(reta_accuracy_vector());
    const auto counts = count_by_level(reta, "m", Metric::accuracy, questions);
    CHECK(counts.c3 == 12);
    CHECK(counts.c2 == 4);
    CHECK(counts.c1 == 3);
    CHECK(total_score(reta, "m", Metric::accuracy, questions) == 47);

    const auto all3 = scores_from_vector(std::vector<int>(19, 3));
    CHECK(count_by_level(all3, "m", Metric::accuracy, questions) ==
          LevelCounts{0, 0, 19});
    CHECK(total_score(all3, "m", Metric::accuracy, questions) == 57);

    const auto all1 = scores_from_vector(std::vector<int>(19, 1));
    CHECK(count_by_level(all1, "m", Metric::accuracy, questions) ==
          LevelCounts{19, 0, 0});
    CHECK(total_score(all1, "m", Metric::accuracy, questions) == 19);
}

TEST_CASE("coverage gaps name the missing questions") {
    const auto& questions = builtin_question_set();
    auto partial = scores_from_vector(std::vector<int>(19, 2));
    partial.erase(partial.begin() + 6);  // drop question 7
    CHECK_THROWS_WITH_AS(count_by_level(partial, "m", Metric::accuracy, questions),
                         doctest::Contains("7"), integrity_error);
}

TEST_CASE("category summary") {
    const auto& questions = builtin_question_set();

    const auto all3 = scores_from_vector(std::vector<int>(19, 3));
    auto sums = category_summary(all3, "m", Metric::accuracy, questions);
    CHECK(sums[QuestionGroup::clinical_information] == 27);
    CHECK(sums[QuestionGroup::drug_information] == 18);
    CHECK(sums[QuestionGroup::disease_biology] == 12);

    const auto all1 = scores_from_vector(std::vector<int>(19, 1));
    sums = category_summary(all1, "m", Metric::accuracy, questions);
    CHECK(sums[QuestionGroup::clinical_information] == 9);
    CHECK(sums[QuestionGroup::drug_information] == 6);
    CHECK(sums[QuestionGroup::disease_biology] == 4);

    // partition: group sums always add to the total
    std::mt19937 rng(5);
    for (int round = 0; round < 50; ++round) {
        std::vector<int> v(19);
        for (auto& s : v) s = 1 + rng() % 3;
        const auto scores = scores_from_vector(v);
        sums = category_summary(scores, "m", Metric::accuracy, questions);
        int group_total = 0;
        for (const auto& [group, sum] : sums) group_total += sum;
        CHECK(group_total == total_score(scores, "m", Metric::accuracy, questions));
        const auto counts = count_by_level(scores, "m", Metric::accuracy, questions);
        CHECK(counts.c1 + counts.c2 + counts.c3 == 19);
        CHECK(3 * counts.c3 + 2 * counts.c2 + counts.c1 ==
              total_score(scores, "m", Metric::accuracy, questions));
    }
}

TEST_CASE("hallucination summaries reproduce the reported tallies") {
    const auto annotations = load_annotations(kAssets + "/demo/annotations.tsv");
    CHECK(hallucination_summary(annotations, "gpt3.5") ==
          HallucinationSummary{31, 13});
    CHECK(hallucination_summary(annotations, "gpt4") == HallucinationSummary{19, 8});
    CHECK(hallucination_summary(annotations, "reta") == HallucinationSummary{3, 3});
    CHECK(hallucination_summary(annotations, "bing") == HallucinationSummary{2, 1});
    CHECK(hallucination_summary(annotations, "unknown") == HallucinationSummary{0, 0});
    CHECK(hallucination_summary({}, "reta") == HallucinationSummary{0, 0});
}

TEST_CASE("hallucination integrity and monotonicity") {
    std::vector<HallucinationAnnotation> annotations = {{1, "m", 2, ""}, {2, "m", 0, ""}};
    CHECK(hallucination_summary(annotations, "m") == HallucinationSummary{2, 1});

    annotations.push_back({3, "m", 4, ""});
    CHECK(hallucination_summary(annotations, "m") == HallucinationSummary{6, 2});

    annotations.push_back({1, "m", 1, ""});  // duplicate key
    CHECK_THROWS_AS(hallucination_summary(annotations, "m"), integrity_error);
}

TEST_CASE("feasibility audit on the reported tuples") {
    const auto reta = feasibility_audit({19, 12, 3, 47});
    CHECK(reta.feasible);
    CHECK(reta.c2 == 4);

    // the reported GPT-4 accuracy tuple does not admit an integer c2
    const auto gpt4 = feasibility_audit({19, 8, 1, 43});
    CHECK(!gpt4.feasible);
    CHECK(gpt4.implied_total == 45);
    CHECK(gpt4.reason.find("45") != std::string::npos);

    const auto perfect = feasibility_audit({19, 19, 0, 57});
    CHECK(perfect.feasible);
    CHECK(perfect.c2 == 0);

    CHECK(!feasibility_audit({19, 15, 7, 50}).feasible);  // c3+c1 > n
}

TEST_CASE("feasibility audit fuzz: true tuples accepted, perturbed rejected") {
    std::mt19937 rng(99);
    for (int round = 0; round < 1000; ++round) {
        const int n = 1 + rng() % 30;
        int c1 = 0, c2 = 0, c3 = 0, total = 0;
        for (int i = 0; i < n; ++i) {
            const int s = 1 + rng() % 3;
            total += s;
            if (s == 1) ++c1;
            else if (s == 2) ++c2;
            else ++c3;
        }
        const auto ok = feasibility_audit({n, c3, c1, total});
        CHECK(ok.feasible);
        CHECK(ok.c2 == c2);
        CHECK(!feasibility_audit({n, c3, c1, total + 1}).feasible);
        CHECK(!feasibility_audit({n, c3, c1, total - 1}).feasible);
    }
}

TEST_CASE("aggregate report over the demo matrix") {
    const auto scores = load_scores(kAssets + "/demo/scores.tsv");
    const auto annotations = load_annotations(kAssets + "/demo/annotations.tsv");
    const auto& questions = builtin_question_set();
    const auto report = aggregate(scores, annotations, questions);

    CHECK(report.cells.size() == 12);  // 4 models x 3 metrics
    for (const auto& cell : report.cells) {
        CHECK(cell.audit.feasible);  // shipped matrix is arithmetically consistent
        CHECK(cell.counts.c1 + cell.counts.c2 + cell.counts.c3 == 19);
    }

    // rendering is deterministic
    const auto csv = emit_report(report, questions, ReportFormat::csv);
    CHECK(csv == emit_report(report, questions, ReportFormat::csv));
    const auto table = emit_report(report, questions, ReportFormat::table);
    CHECK(table == emit_report(report, questions, ReportFormat::table));
    CHECK(table.find("reta") != std::string::npos);

    // csv aggregate rows re-parse to the source report
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    for (const auto& cell : report.cells) {
        REQUIRE(std::getline(lines, line));
        std::ostringstream expected;
        expected << cell.model_id << ',' << to_string(cell.metric) << ','
                 << cell.counts.c1 << ',' << cell.counts.c2 << ',' << cell.counts.c3
                 << ',' << cell.total;
        CHECK(line.rfind(expected.str(), 0) == 0);
    }
}

TEST_CASE("score records outside the rubric are rejected") {
    CHECK_THROWS_AS(validate({1, "m", Metric::accuracy, "r1", 4, false}),
                    integrity_error);
    CHECK_THROWS_AS(validate({1, "m", Metric::accuracy, "r1", 0, false}),
                    integrity_error);

    const auto path = std::filesystem::temp_directory_path() / "reta_bad_scores.tsv";
    std::ofstream out(path);
    out << "1\tm\taccuracy\tr1\t4\t0\n";
    out.close();
    CHECK_THROWS_AS(load_scores(path.string()), integrity_error);
    std::filesystem::remove(path);
}
