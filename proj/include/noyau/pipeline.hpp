#ifndef noyau_pipeline_hpp
#define noyau_pipeline_hpp

#include <optional>
#include <string>
#include <vector>

#include "noyau/cause.hpp"
#include "noyau/grammar.hpp"
#include "noyau/lexicon.hpp"
#include "noyau/norm_kb.hpp"
#include "noyau/semantic.hpp"
#include "noyau/token.hpp"

namespace noyau {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string report_path;  // one of report_path / corpus_dir
    std::string corpus_dir;
    std::string grammar_path;
    std::string lexicon_path;
    std::string semrules_path;
    std::string kb_path;
    std::string ontology_path;

    enum class Trace { Quiet, Stages, Full };
    enum class Format { Text, Structured };
    Trace trace = Trace::Quiet;
    Format format = Format::Text;
    long cap = kDefaultAnalysisCap;
    long headroom = 1;
};

struct PipelineResources {
    Grammar grammar;
    Lexicon lexicon;
    KnowledgeBase semrules;
    NormKb norms;
};

PipelineResources load_resources(const RunConfig& config);

struct StageTrace {
    std::string name;
    long in = 0;
    long out = 0;
    double ms = 0.0;
    std::vector<std::string> items;  // filled in full trace mode
};

struct CandidateStats {
    long count = 0;
    long viable = 0;
    int selected = -1;  // index in deterministic candidate order
};

struct ReportResult {
    std::string id;
    bool ok = false;
    std::string error;  // "<stage>: <message>" when !ok

    std::vector<StageTrace> stages;
    CandidateStats candidates;
    long model_count = 0;
    std::vector<std::string> relations;        // selected candidate, rendered
    std::vector<std::string> intermediate;     // rendered literals
    std::vector<std::string> final_literals;   // rendered literals
    std::vector<std::pair<std::string, long>> levels;  // ref -> level
    std::vector<AnomalyWitness> witnesses;
    std::string explanation_fr, explanation_en;
    std::string verdict;
    double total_ms = 0.0;
};

ReportResult analyze_report(const PipelineResources& res, const TaggedReport& report,
                            const RunConfig& config);

struct BatchResult {
    std::vector<ReportResult> reports;
    int exit_code = 0;  // 0 all analyzed, 1 any report failed
};

// Runs over --report or every *.txt of --corpus (sorted by name).
BatchResult analyze(const RunConfig& config);

std::string emit_text(const BatchResult& batch, const RunConfig& config);
std::string emit_structured(const BatchResult& batch, const RunConfig& config);

}  // namespace noyau

#endif
