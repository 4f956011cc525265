#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "noyau/pipeline.hpp"

using namespace noyau;
using noyau::testing::shipped_config;
using noyau::testing::shipped_resources;

namespace {

ReportResult run_report(const std::string& name,
                        RunConfig::Trace trace = RunConfig::Trace::Stages) {
    RunConfig config = shipped_config();
    config.trace = trace;
    return analyze_report(shipped_resources(), noyau::testing::shipped_report(name), config);
}

}  // namespace

TEST_CASE("report (1) end to end") {
    ReportResult r = run_report("report1.txt", RunConfig::Trace::Full);
    REQUIRE(r.ok);
    CHECK(r.model_count == 1);
    REQUIRE(r.witnesses.size() == 1);
    CHECK(r.witnesses[0].agent == "B");
    CHECK(r.witnesses[0].duty_time == 1);
    CHECK(r.witnesses[0].violation_time == 2);
    CHECK(r.explanation_fr ==
          "Le véhicule B avait à l'instant 1 le devoir de s'arrêter afin d'éviter le choc, "
          "mais il n'a pas respecté son devoir car à l'instant 2, il n'était pas à l'arrêt.");

    std::vector<std::string> expected = {
        "vrai(arrêter, Auteur, 1)",
        "vrai(combine(heurter, Auteur), B, 2)",
        "vrai(combine(position_choc, arrière), Auteur, 2)",
        "vrai(feu_rouge, Auteur, 1)",
        "¬vrai(arrêter, B, 1)",
    };
    CHECK(r.final_literals == expected);
}

TEST_CASE("the whole corpus analyzes with unique models") {
    RunConfig config = shipped_config();
    config.corpus_dir = noyau::testing::data_path("reports");
    BatchResult batch = analyze(config);
    CHECK(batch.exit_code == 0);
    REQUIRE(batch.reports.size() == 4);
    for (const ReportResult& r : batch.reports) {
        CHECK(r.ok);
        CHECK(r.model_count == 1);
    }
    CHECK(batch.reports[0].witnesses.size() == 1);
    CHECK(batch.reports[1].witnesses.size() == 1);
    CHECK(batch.reports[1].witnesses[0].agent == "C");
    CHECK(batch.reports[2].witnesses.size() == 1);
    CHECK(batch.reports[2].witnesses[0].agent == "B");
    CHECK(batch.reports[3].witnesses.empty());
    CHECK(batch.reports[3].verdict == "aucune anomalie détectée");
}

TEST_CASE("stage trace has the nine pipeline stages in order") {
    ReportResult r = run_report("report1.txt");
    std::vector<std::string> names;
    for (const StageTrace& s : r.stages) names.push_back(s.name);
    CHECK(names == std::vector<std::string>{"ingest", "parse", "dedup", "normalize",
                                            "semantic", "temporal", "ground", "solve",
                                            "detect"});
}

TEST_CASE("full trace carries the final literals, quiet only the verdict") {
    RunConfig config = shipped_config();
    config.report_path = noyau::testing::data_path("reports/report1.txt");

    config.trace = RunConfig::Trace::Full;
    BatchResult full = analyze(config);
    std::string full_text = emit_text(full, config);
    CHECK(full_text.find("vrai(feu_rouge, Auteur, 1)") != std::string::npos);

    config.trace = RunConfig::Trace::Quiet;
    BatchResult quiet = analyze(config);
    std::string quiet_text = emit_text(quiet, config);
    CHECK(quiet_text.find("ingest") == std::string::npos);
    CHECK(quiet_text.find("Le véhicule B avait") != std::string::npos);
    CHECK(std::count(quiet_text.begin(), quiet_text.end(), '\n') == 1);
}

TEST_CASE("empty corpus directory analyzes to success") {
    std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "noyau_empty_corpus";
    std::filesystem::create_directories(dir);
    RunConfig config = shipped_config();
    config.corpus_dir = dir.string();
    BatchResult batch = analyze(config);
    CHECK(batch.exit_code == 0);
    CHECK(batch.reports.empty());
}

TEST_CASE("a report outside the grammar fails its parse stage, batch continues") {
    std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "noyau_mixed_corpus";
    std::filesystem::create_directories(dir);
    {
        std::ofstream bad(dir / "a_bad.txt");
        bad << "zorglub\tzorglub\tXYZ\n";
        std::ofstream good(dir / "b_good.txt");
        std::ifstream src(noyau::testing::data_path("reports/report4.txt"));
        good << src.rdbuf();
    }
    RunConfig config = shipped_config();
    config.corpus_dir = dir.string();
    BatchResult batch = analyze(config);
    CHECK(batch.exit_code == 1);
    REQUIRE(batch.reports.size() == 2);
    CHECK_FALSE(batch.reports[0].ok);
    CHECK(batch.reports[0].error.rfind("parse:", 0) == 0);
    CHECK(batch.reports[0].error.find("no analysis") != std::string::npos);
    CHECK(batch.reports[1].ok);
}

TEST_CASE("structured output is byte-identical across runs") {
    RunConfig config = shipped_config();
    config.corpus_dir = noyau::testing::data_path("reports");
    config.format = RunConfig::Format::Structured;
    config.trace = RunConfig::Trace::Full;
    std::string first = emit_structured(analyze(config), config);
    std::string second = emit_structured(analyze(config), config);
    CHECK(first == second);
    CHECK(first.find("\"exit_code\": 0") != std::string::npos);
}

TEST_CASE("analysis cap errors are reported per report") {
    RunConfig config = shipped_config();
    config.cap = 1;
    ReportResult r = analyze_report(shipped_resources(),
                                    noyau::testing::shipped_report("report1.txt"), config);
    CHECK_FALSE(r.ok);
    CHECK(r.error.rfind("parse:", 0) == 0);
}

TEST_CASE("missing configuration is a config error") {
    RunConfig config = shipped_config();
    CHECK_THROWS_AS(analyze(config), ConfigError);  // neither report nor corpus
}

#ifdef NOYAU_ANALYZE_BIN
namespace {

int run_cli(const std::string& args, std::string* output = nullptr) {
    std::string cmd = std::string(NOYAU_ANALYZE_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    if (output) *output = out;
    return WEXITSTATUS(status);
}

std::string shipped_cli_args() {
    RunConfig c = shipped_config();
    return "--grammar " + c.grammar_path + " --lexicon " + c.lexicon_path + " --semrules " +
           c.semrules_path + " --kb " + c.kb_path + " --ontology " + c.ontology_path;
}

}  // namespace

TEST_CASE("cli exit codes: 0 analyzed, 1 report failed, 2 bad configuration") {
    std::string report1 = noyau::testing::data_path("reports/report1.txt");
    std::string out;
    CHECK(run_cli("--report " + report1 + " " + shipped_cli_args(), &out) == 0);
    CHECK(out.find("Le véhicule B avait") != std::string::npos);

    std::filesystem::path dir = std::filesystem::temp_directory_path() / "noyau_cli_bad";
    std::filesystem::create_directories(dir);
    { std::ofstream bad(dir / "bad.txt"); bad << "zorglub\tzorglub\tXYZ\n"; }
    CHECK(run_cli("--corpus " + dir.string() + " " + shipped_cli_args()) == 1);

    CHECK(run_cli("--report " + report1, nullptr) == 2);  // required options missing
    CHECK(run_cli("--report /nonexistent.txt " + shipped_cli_args()) == 1);
    CHECK(run_cli("--corpus /nonexistent_dir " + shipped_cli_args()) == 2);
}
#endif
