#include <algorithm>
#include <functional>
#include <set>

#include "noyau/semantic.hpp"

namespace noyau {

namespace {

const std::set<std::string> kRelationPreds = {"relation", "support", "sujet",   "objet",
                                              "compl_v",  "compl_n", "qualif_n", "qualif_v"};

bool is_symbol_entity(const std::string& s) {
    return s.size() == 1 && s[0] >= 'A' && s[0] <= 'Z';
}

StableModel solve_stage(const KnowledgeBase& semrules, const std::string& stage,
                        const Domain& domain, const std::vector<Literal>& facts,
                        GroundProgram* program_out) {
    KnowledgeBase kb;
    kb.rules = semrules.rules_in_stage(stage);
    kb.sorts = semrules.sorts;
    if (kb.rules.empty()) throw SemanticError("semantic rule file has no #stage " + stage);

    GroundProgram p = ground(kb, domain, facts);
    std::vector<StableModel> models = stable_models(p);
    if (models.size() != 1)
        throw SemanticError("semantic stage " + stage + " yielded " +
                            std::to_string(models.size()) + " stable models (expected 1)");
    if (program_out) *program_out = std::move(p);
    return models.front();
}

}  // namespace

SemanticFactBase semantic_fact_base(const RelationSet& relations,
                                    const std::vector<VoiceFact>& voice,
                                    const TaggedReport& report, const Lexicon& lexicon) {
    SemanticFactBase fb;

    std::set<std::string> words;
    for (const Relation& r : relations)
        for (const std::string& a : r.args) words.insert(a);
    words.insert(kAuthorEntity);

    std::vector<Term> statics;
    for (const Relation& r : relations) {
        std::vector<Term> args;
        for (const std::string& a : r.args) args.push_back(Term::sym(a));
        statics.push_back(Term::app(r.name, std::move(args)));
    }
    for (const VoiceFact& v : voice)
        statics.push_back(Term::app("voie", {Term::sym(v.verb), Term::sym("passive")}));

    std::vector<Term> timerefs;
    for (const std::string& w : words) {
        auto info = report.symbols.by_atom.find(w);
        const std::string key = info == report.symbols.by_atom.end() ? w : info->second.lemma;
        if (info != report.symbols.by_atom.end())
            timerefs.push_back(Term::ref_temp(Term::sym(w)));

        auto vs = lexicon.val_sem.find(key);
        if (vs != lexicon.val_sem.end())
            statics.push_back(Term::app("val_sem", {Term::sym(w), Term::sym(vs->second)}));
        auto ty = lexicon.type_of.find(key);
        if (ty != lexicon.type_of.end()) {
            for (const std::string& label : ty->second) {
                statics.push_back(Term::app("type", {Term::sym(w), Term::sym(label)}));
                if (label == "prep") statics.push_back(Term::app("prep", {Term::sym(w)}));
            }
        }
        // The author entity and metonymy symbols stand for driver+vehicle.
        if (w == kAuthorEntity || is_symbol_entity(w)) {
            statics.push_back(Term::app("type", {Term::sym(w), Term::sym("agent")}));
            statics.push_back(Term::app("type", {Term::sym(w), Term::sym("véhicule")}));
        }
    }

    std::sort(statics.begin(), statics.end());
    statics.erase(std::unique(statics.begin(), statics.end()), statics.end());

    fb.domain.static_facts = std::move(statics);
    fb.domain.static_preds = kRelationPreds;
    fb.domain.static_preds.insert("val_sem");
    fb.domain.static_preds.insert("type");
    fb.domain.static_preds.insert("prep");
    fb.domain.static_preds.insert("voie");

    std::vector<Term>& word_sort = fb.domain.sorts["word"];
    for (const std::string& w : words) {
        word_sort.push_back(Term::sym(w));
        fb.word_atoms.push_back(w);
    }
    fb.domain.sorts["timeref"] = std::move(timerefs);
    if (fb.domain.sorts["timeref"].empty())
        fb.domain.sorts["timeref"].push_back(Term::ref_temp(Term::sym(kAuthorEntity)));
    return fb;
}

std::vector<Literal> build_intermediate(const RelationSet& relations,
                                        const std::vector<VoiceFact>& voice,
                                        const TaggedReport& report, const Lexicon& lexicon,
                                        const KnowledgeBase& semrules) {
    SemanticFactBase fb = semantic_fact_base(relations, voice, report, lexicon);
    StableModel m = solve_stage(semrules, "intermediate", fb.domain, {}, nullptr);

    std::vector<Literal> out;
    for (const Literal& l : m.literals)
        if (l.atom.name == "vrai" && l.atom.is_app()) out.push_back(l);
    return out;
}

SemanticOutput build_semantic(const RelationSet& relations,
                              const std::vector<Literal>& intermediate,
                              const std::vector<VoiceFact>& voice, const TaggedReport& report,
                              const Lexicon& lexicon, const KnowledgeBase& semrules) {
    SemanticFactBase fb = semantic_fact_base(relations, voice, report, lexicon);
    GroundProgram program;
    StableModel m = solve_stage(semrules, "semantic", fb.domain, intermediate, &program);

    // Final literals are the heads that semantic-stage rules actually fired,
    // so renamings that coincide with an intermediate literal still count.
    std::set<Literal> fired;
    for (const GroundRule& r : program.rules) {
        if (r.source < 0) continue;
        bool applies = true;
        for (int id : r.body) applies = applies && m.contains(program.lits[id]);
        if (applies && r.is_default) {
            auto contradicted = [&](int id) {
                int c = program.complement[id];
                return c >= 0 && m.contains(program.lits[c]);
            };
            for (int id : r.heads) applies = applies && !contradicted(id);
            for (int id : r.blockers) applies = applies && !contradicted(id);
        }
        if (!applies) continue;
        for (int id : r.heads) fired.insert(program.lits[id]);
    }

    SemanticOutput out;
    for (const Literal& l : fired) {
        if (l.atom.name == "vrai" && l.atom.is_app()) {
            out.literals.push_back(l);
        } else if ((l.atom.name == "prec" || l.atom.name == "simul") && l.positive &&
                   l.atom.args.size() == 2) {
            TemporalRelation t;
            t.kind = l.atom.name == "prec" ? TemporalRelation::Kind::Prec
                                           : TemporalRelation::Kind::Simul;
            t.left = l.atom.args[0];
            t.right = l.atom.args[1];
            out.temporal.push_back(t);
        }
    }
    std::sort(out.literals.begin(), out.literals.end());
    std::sort(out.temporal.begin(), out.temporal.end());
    out.temporal.erase(std::unique(out.temporal.begin(), out.temporal.end()),
                       out.temporal.end());
    return out;
}

std::vector<Term> collect_time_refs(const std::vector<Literal>& literals) {
    std::set<Term> refs;
    std::function<void(const Term&)> scan = [&](const Term& t) {
        if (t.is_app() && t.name == "ref_temp") refs.insert(t);
        for (const Term& a : t.args) scan(a);
    };
    for (const Literal& l : literals) scan(l.atom);
    return std::vector<Term>(refs.begin(), refs.end());
}

TemporalGraph build_temporal_graph(const std::vector<TemporalRelation>& temporal,
                                   const std::vector<Term>& refs) {
    TemporalGraph g;
    std::map<Term, int> index;
    auto node = [&](const Term& t) {
        auto it = index.find(t);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(g.nodes.size());
        g.nodes.push_back(t);
        index.emplace(t, id);
        return id;
    };
    for (const Term& r : refs) node(r);
    for (const TemporalRelation& t : temporal) {
        int l = node(t.left), r = node(t.right);
        if (t.kind == TemporalRelation::Kind::Prec) {
            if (l == r)
                throw SemanticError("Préc cycle: " + t.left.str() + " precedes itself");
            auto edge = std::make_pair(l, r);
            if (std::find(g.prec.begin(), g.prec.end(), edge) == g.prec.end())
                g.prec.push_back(edge);
        }
    }

    const int n = static_cast<int>(g.nodes.size());
    std::vector<std::vector<int>> next(n);
    for (auto [a, b] : g.prec) next[a].push_back(b);

    // Préc must be acyclic.
    std::vector<int> mark(n, 0);
    std::vector<int> trail;
    std::function<void(int)> visit = [&](int v) {
        mark[v] = 1;
        trail.push_back(v);
        for (int w : next[v]) {
            if (mark[w] == 1) {
                std::string cycle;
                bool in_cycle = false;
                for (int x : trail) {
                    if (x == w) in_cycle = true;
                    if (in_cycle) cycle += g.nodes[x].str() + " -> ";
                }
                cycle += g.nodes[w].str();
                throw SemanticError("Préc cycle: " + cycle);
            }
            if (mark[w] == 0) visit(w);
        }
        trail.pop_back();
        mark[v] = 2;
    };
    for (int v = 0; v < n; ++v)
        if (mark[v] == 0) visit(v);

    // Simul partition.
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const TemporalRelation& t : temporal) {
        if (t.kind != TemporalRelation::Kind::Simul) continue;
        int a = find(index.at(t.left)), b = find(index.at(t.right));
        if (a != b) parent[a] = b;
    }

    // A Simul class must not contain two Préc-ordered refs.
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    std::function<void(int, int)> mark_reach = [&](int from, int v) {
        for (int w : next[v]) {
            if (!reach[from][w]) {
                reach[from][w] = true;
                mark_reach(from, w);
            }
        }
    };
    for (int v = 0; v < n; ++v) mark_reach(v, v);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b && find(a) == find(b) && reach[a][b])
                throw SemanticError("Simul class merges Préc-ordered refs " +
                                    g.nodes[a].str() + " and " + g.nodes[b].str());

    std::map<int, std::vector<int>> classes;
    for (int i = 0; i < n; ++i) classes[find(i)].push_back(i);
    for (auto& [root, members] : classes) g.simul_classes.push_back(members);
    return g;
}

LevelResult level_and_instantiate(const TemporalGraph& graph,
                                  const std::vector<Literal>& literals) {
    LevelResult out;
    const int n = static_cast<int>(graph.nodes.size());

    std::vector<bool> determined(n, false);
    for (auto [a, b] : graph.prec) determined[a] = determined[b] = true;

    // Longest-path levels over the Préc DAG.
    std::vector<long> level(n, 0);
    std::vector<int> indeg(n, 0);
    std::vector<std::vector<int>> next(n);
    for (auto [a, b] : graph.prec) {
        next[a].push_back(b);
        ++indeg[b];
    }
    std::vector<int> queue;
    for (int v = 0; v < n; ++v)
        if (determined[v] && indeg[v] == 0) {
            level[v] = 1;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        for (int w : next[v]) {
            level[w] = std::max(level[w], level[v] + 1);
            if (--indeg[w] == 0) queue.push_back(w);
        }
    }

    for (const std::vector<int>& members : graph.simul_classes) {
        std::set<long> det;
        for (int m : members)
            if (determined[m]) det.insert(level[m]);
        if (det.size() > 1) {
            std::string names;
            for (int m : members) names += graph.nodes[m].str() + " ";
            throw SemanticError("Simul class with conflicting levels: " + names);
        }
        long value = det.empty() ? 1 : *det.begin();
        if (det.empty() && !members.empty())
            out.warnings.push_back("unanchored time ref " + graph.nodes[members.front()].str() +
                                   " defaults to level 1");
        for (int m : members) level[m] = value;
    }

    for (int v = 0; v < n; ++v) out.levels[graph.nodes[v]] = level[v];

    std::function<Term(const Term&)> instantiate = [&](const Term& t) -> Term {
        if (t.is_app() && t.name == "ref_temp") {
            auto it = out.levels.find(t);
            if (it != out.levels.end()) return Term::integer(it->second);
            out.warnings.push_back("time ref " + t.str() + " not in graph, defaults to level 1");
            out.levels[t] = 1;
            return Term::integer(1);
        }
        if (t.is_app()) {
            Term copy = t;
            for (size_t i = 0; i < copy.args.size(); ++i) copy.args[i] = instantiate(t.args[i]);
            return copy;
        }
        return t;
    };

    for (const Literal& l : literals) {
        Literal inst = l;
        inst.atom = instantiate(l.atom);
        if (!inst.atom.is_ground())
            throw SemanticError("literal not ground after instantiation: " + inst.str());
        out.literals.push_back(std::move(inst));
    }
    std::sort(out.literals.begin(), out.literals.end());
    out.literals.erase(std::unique(out.literals.begin(), out.literals.end()),
                       out.literals.end());
    return out;
}

}  // namespace noyau
