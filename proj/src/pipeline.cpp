#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <set>

#include <nlohmann/json.hpp>

#include "noyau/pipeline.hpp"

namespace noyau {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string render_literal(const Literal& l, const ReportSymbols& symbols,
                           const std::map<std::string, int>& mentioned) {
    std::function<std::string(const Term&)> rec = [&](const Term& t) -> std::string {
        switch (t.kind) {
            case Term::Kind::Int:
                return std::to_string(t.value);
            case Term::Kind::Sym:
            case Term::Kind::Var:
                return symbols.display(t.name, mentioned);
            case Term::Kind::App: {
                std::string out = t.name;
                out += '(';
                for (size_t i = 0; i < t.args.size(); ++i) {
                    if (i) out += ", ";
                    out += rec(t.args[i]);
                }
                out += ')';
                return out;
            }
        }
        return {};
    };
    return (l.positive ? "" : "¬") + rec(l.atom);
}

std::vector<std::string> render_literals(const std::vector<Literal>& lits,
                                         const ReportSymbols& symbols) {
    std::set<std::string> atoms;
    std::function<void(const Term&)> scan = [&](const Term& t) {
        if (t.is_sym()) atoms.insert(t.name);
        for (const Term& a : t.args) scan(a);
    };
    for (const Literal& l : lits) scan(l.atom);
    std::map<std::string, int> mentioned = symbols.lemma_counts(atoms);

    std::vector<std::string> out;
    for (const Literal& l : lits) out.push_back(render_literal(l, symbols, mentioned));
    std::sort(out.begin(), out.end());
    return out;
}

struct CandidateOutcome {
    RelationSet raw;
    int tier = -1;  // 2 anomaly, 1 non-empty kernel, 0 stable model, -1 failed
    std::string error;

    NormalizeResult norm;
    std::vector<Literal> intermediate;
    SemanticOutput semantic;
    LevelResult leveled;
    std::vector<std::string> agents;
    long tmax = 1;
    long ground_rules = 0;
    long ground_atoms = 0;
    std::vector<StableModel> models;
    std::vector<AnomalyWitness> witnesses;
    std::string key;  // canonical form of the raw relation set, for ordering
};

CandidateOutcome evaluate_candidate(const PipelineResources& res, const TaggedReport& report,
                                    const RelationSet& raw, const RunConfig& config) {
    CandidateOutcome c;
    c.raw = raw;
    for (const std::string& line : render_relation_set(raw, report.symbols))
        c.key += line + ";";

    try {
        c.norm = normalize(raw, report, res.lexicon);
        c.intermediate = build_intermediate(c.norm.relations, c.norm.voice, report,
                                            res.lexicon, res.semrules);
        c.semantic = build_semantic(c.norm.relations, c.intermediate, c.norm.voice, report,
                                    res.lexicon, res.semrules);
        TemporalGraph graph =
            build_temporal_graph(c.semantic.temporal, collect_time_refs(c.semantic.literals));
        c.leveled = level_and_instantiate(graph, c.semantic.literals);

        std::set<std::string> agents{kAuthorEntity};
        for (const Literal& l : c.leveled.literals) {
            if (l.atom.args.size() == 3 && l.atom.args[1].is_sym())
                agents.insert(l.atom.args[1].name);
            if (l.atom.args.size() == 3 && l.atom.args[2].is_int())
                c.tmax = std::max(c.tmax, l.atom.args[2].value);
        }
        c.agents.assign(agents.begin(), agents.end());

        NormResult nr =
            solve_norms(res.norms, c.leveled.literals, c.agents, c.tmax, config.headroom);
        c.ground_rules = static_cast<long>(nr.program.rules.size());
        c.ground_atoms = static_cast<long>(nr.program.lits.size());
        c.models = std::move(nr.models);

        if (c.models.empty()) {
            c.tier = -1;
            c.error = "solve: no stable model";
            return c;
        }
        c.tier = 0;
        std::set<Literal> given(c.leveled.literals.begin(), c.leveled.literals.end());
        for (const StableModel& m : c.models) {
            bool kernel = false;
            for (const Literal& l : m.literals)
                kernel = kernel || (l.atom.name == "vrai" && !given.count(l));
            if (kernel) c.tier = std::max(c.tier, 1);
            if (m.contains(Literal(true, Term::sym(kTrueAnomalyAtom))))
                c.tier = std::max(c.tier, 2);
        }
        if (c.models.size() == 1) c.witnesses = detect_anomalies(c.models.front());
    } catch (const std::exception& e) {
        c.tier = -1;
        if (c.error.empty()) c.error = e.what();
    }
    return c;
}

}  // namespace

PipelineResources load_resources(const RunConfig& config) {
    PipelineResources res;
    res.grammar = load_grammar(config.grammar_path);
    res.lexicon = load_lexicon(config.lexicon_path);
    res.semrules = parse_kb(config.semrules_path);
    res.norms = load_norm_kb(config.kb_path, config.ontology_path);
    return res;
}

ReportResult analyze_report(const PipelineResources& res, const TaggedReport& report,
                            const RunConfig& config) {
    ReportResult out;
    out.id = report.id;
    Clock::time_point t0 = Clock::now();

    auto stage = [&](const std::string& name, long in, long out_count, Clock::time_point start,
                     std::vector<std::string> items = {}) {
        out.stages.push_back({name, in, out_count, ms_since(start), std::move(items)});
    };

    long tokens = 0;
    for (const auto& s : report.sentences) tokens += static_cast<long>(s.size());
    stage("ingest", static_cast<long>(report.sentences.size()), tokens, t0);

    // Parse each sentence; a report's candidates combine one relation set per
    // sentence.
    Clock::time_point tp = Clock::now();
    long total_analyses = 0;
    std::vector<std::vector<RelationSet>> per_sentence;
    try {
        for (const auto& sentence : report.sentences) {
            std::vector<Analysis> analyses = parse(sentence, res.grammar, config.cap);
            if (analyses.empty()) throw GrammarError("no analysis");
            total_analyses += static_cast<long>(analyses.size());
            per_sentence.push_back(distinct_relation_sets(analyses));
        }
    } catch (const std::exception& e) {
        out.error = std::string("parse: ") + e.what();
        out.verdict = "error: " + out.error;
        stage("parse", tokens, total_analyses, tp);
        out.total_ms = ms_since(t0);
        return out;
    }
    stage("parse", tokens, total_analyses, tp);

    Clock::time_point td = Clock::now();
    std::vector<RelationSet> candidates{RelationSet{}};
    try {
        for (const std::vector<RelationSet>& sets : per_sentence) {
            std::vector<RelationSet> next;
            for (const RelationSet& base : candidates) {
                for (const RelationSet& s : sets) {
                    RelationSet merged = base;
                    for (const Relation& r : s) merged.insert(r);
                    next.push_back(std::move(merged));
                    if (static_cast<long>(next.size()) > config.cap)
                        throw AnalysisOverflow("candidate product exceeds cap");
                }
            }
            candidates = std::move(next);
        }
    } catch (const std::exception& e) {
        out.error = std::string("dedup: ") + e.what();
        out.verdict = "error: " + out.error;
        out.total_ms = ms_since(t0);
        return out;
    }
    {
        std::set<RelationSet> dedup(candidates.begin(), candidates.end());
        candidates.assign(dedup.begin(), dedup.end());
    }
    out.candidates.count = static_cast<long>(candidates.size());
    stage("dedup", total_analyses, out.candidates.count, td);

    std::vector<CandidateOutcome> outcomes;
    for (const RelationSet& c : candidates)
        outcomes.push_back(evaluate_candidate(res, report, c, config));

    std::vector<int> order(outcomes.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (outcomes[a].tier != outcomes[b].tier) return outcomes[a].tier > outcomes[b].tier;
        size_t fa = outcomes[a].leveled.literals.size();
        size_t fb = outcomes[b].leveled.literals.size();
        if (fa != fb) return fa > fb;
        return outcomes[a].key < outcomes[b].key;
    });
    for (const CandidateOutcome& c : outcomes)
        if (c.tier >= 1) ++out.candidates.viable;

    const CandidateOutcome& best = outcomes[order.front()];
    out.candidates.selected = order.front();

    Clock::time_point tn = Clock::now();
    if (best.tier < 0) {
        out.error = best.error.empty() ? "pipeline: candidate failed" : best.error;
        out.verdict = "error: " + out.error;
        out.total_ms = ms_since(t0);
        return out;
    }

    out.relations = render_relation_set(best.norm.relations, report.symbols);
    stage("normalize", static_cast<long>(best.raw.size()),
          static_cast<long>(best.norm.relations.size()), tn,
          config.trace == RunConfig::Trace::Full ? out.relations : std::vector<std::string>{});

    Clock::time_point ts = Clock::now();
    out.intermediate = render_literals(best.intermediate, report.symbols);
    out.final_literals = render_literals(best.leveled.literals, report.symbols);
    stage("semantic", static_cast<long>(best.norm.relations.size()),
          static_cast<long>(best.leveled.literals.size()), ts,
          config.trace == RunConfig::Trace::Full ? out.final_literals
                                                 : std::vector<std::string>{});

    Clock::time_point tt = Clock::now();
    for (const auto& [ref, level] : best.leveled.levels)
        out.levels.emplace_back(ref.str(), level);
    stage("temporal", static_cast<long>(best.semantic.temporal.size()),
          static_cast<long>(out.levels.size()), tt);

    Clock::time_point tg = Clock::now();
    stage("ground", static_cast<long>(best.leveled.literals.size()), best.ground_rules, tg);
    Clock::time_point tv = Clock::now();
    out.model_count = static_cast<long>(best.models.size());
    stage("solve", best.ground_rules, out.model_count, tv);

    Clock::time_point tc = Clock::now();
    out.witnesses = best.witnesses;
    stage("detect",
          best.models.empty() ? 0 : static_cast<long>(best.models.front().literals.size()),
          static_cast<long>(out.witnesses.size()), tc);

    out.ok = true;
    if (!out.witnesses.empty()) {
        out.explanation_fr = render_explanation(out.witnesses.front(), Locale::Fr);
        out.explanation_en = render_explanation(out.witnesses.front(), Locale::En);
        out.verdict = out.explanation_fr;
    } else {
        out.verdict = "aucune anomalie détectée";
    }
    out.total_ms = ms_since(t0);
    return out;
}

BatchResult analyze(const RunConfig& config) {
    PipelineResources res = load_resources(config);

    std::vector<std::string> paths;
    if (!config.report_path.empty()) {
        paths.push_back(config.report_path);
    } else if (!config.corpus_dir.empty()) {
        if (!std::filesystem::is_directory(config.corpus_dir))
            throw ConfigError("not a directory: " + config.corpus_dir);
        for (const auto& entry : std::filesystem::directory_iterator(config.corpus_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".txt")
                paths.push_back(entry.path().string());
        std::sort(paths.begin(), paths.end());
    } else {
        throw ConfigError("either --report or --corpus is required");
    }

    BatchResult batch;
    for (const std::string& path : paths) {
        try {
            TaggedReport report = load_tagged_report(path);
            batch.reports.push_back(analyze_report(res, report, config));
        } catch (const std::exception& e) {
            ReportResult r;
            r.id = std::filesystem::path(path).stem().string();
            r.error = std::string("ingest: ") + e.what();
            r.verdict = "error: " + r.error;
            batch.reports.push_back(std::move(r));
        }
        if (!batch.reports.back().ok) batch.exit_code = 1;
    }
    return batch;
}

std::string emit_text(const BatchResult& batch, const RunConfig& config) {
    std::string out;
    for (const ReportResult& r : batch.reports) {
        out += r.id + ": " + r.verdict + "\n";
        if (config.trace == RunConfig::Trace::Quiet) continue;
        for (const StageTrace& s : r.stages) {
            out += "  " + s.name + ": in=" + std::to_string(s.in) +
                   " out=" + std::to_string(s.out) + "\n";
            if (config.trace == RunConfig::Trace::Full)
                for (const std::string& item : s.items) out += "    " + item + "\n";
        }
        if (r.ok) {
            out += "  candidates: " + std::to_string(r.candidates.count) + " (viable " +
                   std::to_string(r.candidates.viable) + ", selected #" +
                   std::to_string(r.candidates.selected) + ")\n";
            out += "  stable models: " + std::to_string(r.model_count) + "\n";
            if (!r.explanation_en.empty()) out += "  en: " + r.explanation_en + "\n";
        }
    }
    return out;
}

std::string emit_structured(const BatchResult& batch, const RunConfig& config) {
    nlohmann::ordered_json root;
    root["reports"] = nlohmann::ordered_json::array();
    for (const ReportResult& r : batch.reports) {
        nlohmann::ordered_json jr;
        jr["id"] = r.id;
        jr["ok"] = r.ok;
        jr["verdict"] = r.verdict;
        if (!r.ok) jr["error"] = r.error;
        jr["candidates"] = {{"count", r.candidates.count},
                            {"viable", r.candidates.viable},
                            {"selected", r.candidates.selected}};
        jr["model_count"] = r.model_count;
        jr["final_literals"] = r.final_literals;
        nlohmann::ordered_json jl = nlohmann::ordered_json::object();
        for (const auto& [ref, level] : r.levels) jl[ref] = level;
        jr["levels"] = jl;
        jr["witnesses"] = nlohmann::ordered_json::array();
        for (const AnomalyWitness& w : r.witnesses)
            jr["witnesses"].push_back({{"agent", w.agent},
                                       {"duty_effect", w.duty_effect.str()},
                                       {"duty_time", w.duty_time},
                                       {"violating_effect", w.violating_effect.str()},
                                       {"violation_time", w.violation_time}});
        if (!r.witnesses.empty())
            jr["explanations"] = {{"fr", r.explanation_fr}, {"en", r.explanation_en}};
        if (config.trace != RunConfig::Trace::Quiet) {
            jr["stages"] = nlohmann::ordered_json::array();
            for (const StageTrace& s : r.stages) {
                nlohmann::ordered_json js;
                js["name"] = s.name;
                js["in"] = s.in;
                js["out"] = s.out;
                if (config.trace == RunConfig::Trace::Full) js["items"] = s.items;
                jr["stages"].push_back(std::move(js));
            }
        }
        root["reports"].push_back(std::move(jr));
    }
    root["exit_code"] = batch.exit_code;
    return root.dump(2) + "\n";
}

}  // namespace noyau
