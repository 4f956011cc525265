#include <iostream>

#include <CLI11.hpp>

#include "noyau/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"norm-based cause analysis of tagged road-accident reports"};

    noyau::RunConfig config;
    std::string trace = "quiet";
    std::string format = "text";

    auto* report = app.add_option("--report", config.report_path, "tagged report file");
    auto* corpus = app.add_option("--corpus", config.corpus_dir, "directory of tagged reports");
    report->excludes(corpus);
    app.add_option("--grammar", config.grammar_path, "block grammar file")->required();
    app.add_option("--lexicon", config.lexicon_path, "domain lexicon file")->required();
    app.add_option("--semrules", config.semrules_path, "semantic rule file")->required();
    app.add_option("--kb", config.kb_path, "norm knowledge base file")->required();
    app.add_option("--ontology", config.ontology_path, "action/effect ontology file")->required();
    app.add_option("--trace", trace, "quiet|stages|full")
        ->check(CLI::IsMember({"quiet", "stages", "full"}));
    app.add_option("--format", format, "text|structured")
        ->check(CLI::IsMember({"text", "structured"}));
    app.add_option("--cap", config.cap, "analysis cap per sentence")->check(CLI::PositiveNumber);
    app.add_option("--headroom", config.headroom, "time headroom for grounding")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    config.trace = trace == "full"     ? noyau::RunConfig::Trace::Full
                   : trace == "stages" ? noyau::RunConfig::Trace::Stages
                                       : noyau::RunConfig::Trace::Quiet;
    config.format = format == "structured" ? noyau::RunConfig::Format::Structured
                                           : noyau::RunConfig::Format::Text;

    try {
        noyau::BatchResult batch = noyau::analyze(config);
        std::cout << (config.format == noyau::RunConfig::Format::Structured
                          ? noyau::emit_structured(batch, config)
                          : noyau::emit_text(batch, config));
        return batch.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }
}
