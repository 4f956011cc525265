#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "noyau/norm_kb.hpp"

namespace noyau {

const std::vector<std::string>& kernel_predicates() {
    static const std::vector<std::string> kKernel = {
        "arrêter", "contrôle", "démarrer", "reculer", "rouler_lentement",
        "cause_perturbation_anormale"};
    return kKernel;
}

bool Ontology::has_effect(const std::string& name) const {
    return std::find(effects.begin(), effects.end(), name) != effects.end();
}

bool Ontology::has_action(const std::string& name) const {
    return std::find(actions.begin(), actions.end(), name) != actions.end();
}

std::vector<std::pair<Term, Term>> Ontology::incompatible_pairs() const {
    std::set<std::pair<Term, Term>> pairs;
    auto add = [&](const Term& a, const Term& b) {
        pairs.emplace(a, b);
        pairs.emplace(b, a);
    };
    for (const std::string& e : effects)
        add(Term::sym(e), Term::app("non", {Term::sym(e)}));
    for (const auto& [a, b] : incompatible_decl) add(Term::sym(a), Term::sym(b));
    return std::vector<std::pair<Term, Term>>(pairs.begin(), pairs.end());
}

Ontology parse_ontology_text(const std::string& text, const std::string& origin) {
    Ontology onto;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string where = origin + ":" + std::to_string(lineno);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "action") {
            std::string name;
            ls >> name;
            if (name.empty()) throw OntologyError(where + ": action needs a name");
            onto.actions.push_back(name);
        } else if (kind == "effet") {
            std::string name;
            ls >> name;
            if (name.empty()) throw OntologyError(where + ": effet needs a name");
            onto.effects.push_back(name);
        } else if (kind == "raison_pot") {
            std::string action, effect;
            ls >> action >> effect;
            if (action.empty() || effect.empty())
                throw OntologyError(where + ": raison_pot needs <action> <effet>");
            onto.raison_pot.emplace_back(action, effect);
        } else if (kind == "incompatible") {
            std::string a, b;
            ls >> a >> b;
            if (a.empty() || b.empty())
                throw OntologyError(where + ": incompatible needs <effet> <effet>");
            onto.incompatible_decl.emplace_back(a, b);
        } else {
            throw OntologyError(where + ": unknown entry kind " + kind);
        }
    }
    for (const auto& [a, e] : onto.raison_pot) {
        if (!onto.has_action(a)) throw OntologyError(origin + ": undeclared action " + a);
        if (!onto.has_effect(e)) throw OntologyError(origin + ": undeclared effect " + e);
    }
    for (const auto& [a, b] : onto.incompatible_decl) {
        if (!onto.has_effect(a)) throw OntologyError(origin + ": undeclared effect " + a);
        if (!onto.has_effect(b)) throw OntologyError(origin + ": undeclared effect " + b);
    }
    return onto;
}

Ontology load_ontology(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw OntologyError("cannot open ontology file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_ontology_text(buf.str(), path);
}

namespace {

std::string effect_base(const Term& t) {
    if (t.is_sym()) return t.name;
    if (t.is_app() && t.name == "non" && t.args.size() == 1) return effect_base(t.args[0]);
    if (t.is_app() && t.name == "combine" && !t.args.empty()) return effect_base(t.args[0]);
    return {};
}

void validate_rules(const NormKb& nkb, std::vector<std::string>& warnings) {
    for (const Rule& r : nkb.kb.rules) {
        auto check_effects = [&](const std::vector<Literal>& lits) {
            for (const Literal& l : lits) {
                if ((l.pred() != "doit" && l.pred() != "en_mesure") || !l.atom.is_app())
                    continue;
                const Term& e = l.atom.args[0];
                if (e.is_var()) continue;
                std::string base = effect_base(e);
                if (base.empty() || !nkb.ontology.has_effect(base))
                    throw OntologyError("rule `" + r.str() + "`: undeclared effect " + e.str());
            }
        };
        check_effects(r.body);
        check_effects(r.heads);
        check_effects(r.blockers);
        for (const Literal& l : r.blockers)
            if (!nkb.kb.sorts.count(l.pred()))
                throw OntologyError("rule `" + r.str() + "`: blocker references undeclared predicate " +
                                    l.pred());
        if (r.annotation.empty())
            warnings.push_back("rule at line " + std::to_string(r.line) +
                               " carries no provenance annotation");
    }
}

}  // namespace

NormKb make_norm_kb(KnowledgeBase kb, Ontology ontology) {
    NormKb nkb;
    nkb.kb = std::move(kb);
    nkb.ontology = std::move(ontology);

    // Bridge between classical negation and the positive effect constructor:
    // -vrai(E, A, T) <-> vrai(non(E), A, T), one pair of rules per effect.
    for (const std::string& e : nkb.ontology.effects) {
        Term pos = Term::sym(e);
        Term neg = Term::app("non", {Term::sym(e)});
        Term a = Term::var("A"), t = Term::var("T");
        Rule r1;
        r1.kind = Rule::Kind::Strict;
        r1.body = {Literal(false, Term::app("vrai", {pos, a, t}))};
        r1.heads = {Literal(true, Term::app("vrai", {neg, a, t}))};
        r1.annotation = "reconstructed (negation bridge)";
        Rule r2;
        r2.kind = Rule::Kind::Strict;
        r2.body = {Literal(true, Term::app("vrai", {neg, a, t}))};
        r2.heads = {Literal(false, Term::app("vrai", {pos, a, t}))};
        r2.annotation = "reconstructed (negation bridge)";
        nkb.kb.rules.push_back(std::move(r1));
        nkb.kb.rules.push_back(std::move(r2));
    }

    // Reverse direction of the capacity biconditional, materialized for
    // effects reachable through a single action.
    for (const std::string& e : nkb.ontology.effects) {
        std::vector<std::string> acts;
        for (const auto& [a, eff] : nkb.ontology.raison_pot)
            if (eff == e) acts.push_back(a);
        if (acts.size() != 1) {
            if (acts.size() > 1)
                nkb.warnings.push_back("effect " + e +
                                       " has several potential actions; reverse capacity rule skipped");
            continue;
        }
        Term v = Term::var("V"), t = Term::var("T");
        Rule r;
        r.kind = Rule::Kind::Strict;
        r.body = {Literal(true, Term::app("en_mesure", {Term::sym(e), v, t}))};
        r.heads = {Literal(true, Term::app("disponible",
                                           {Term::sym(acts[0]), Term::sym(e), v, t}))};
        r.annotation = "paper:11 (reverse direction)";
        nkb.kb.rules.push_back(std::move(r));
    }

    validate_rules(nkb, nkb.warnings);
    return nkb;
}

NormKb load_norm_kb(const std::string& kb_path, const std::string& ontology_path) {
    return make_norm_kb(parse_kb(kb_path), load_ontology(ontology_path));
}

Domain norm_domain(const Ontology& ontology, const std::vector<std::string>& agents,
                   long tmax, long headroom) {
    Domain dom;
    std::vector<Term>& agent_sort = dom.sorts["agent"];
    for (const std::string& a : agents) agent_sort.push_back(Term::sym(a));

    std::vector<Term>& effect_sort = dom.sorts["effect"];
    for (const std::string& e : ontology.effects) {
        effect_sort.push_back(Term::sym(e));
        effect_sort.push_back(Term::app("non", {Term::sym(e)}));
    }
    std::vector<Term>& action_sort = dom.sorts["action"];
    for (const std::string& a : ontology.actions) action_sort.push_back(Term::sym(a));

    dom.int_sorts["time"] = {1, tmax, tmax + headroom};

    dom.static_preds = {"action", "effet", "raison_pot", "incompatible", "agent", "instant"};
    for (const std::string& a : ontology.actions)
        dom.static_facts.push_back(Term::app("action", {Term::sym(a)}));
    for (const std::string& e : ontology.effects)
        dom.static_facts.push_back(Term::app("effet", {Term::sym(e)}));
    for (const auto& [a, e] : ontology.raison_pot)
        dom.static_facts.push_back(Term::app("raison_pot", {Term::sym(a), Term::sym(e)}));
    for (const auto& [a, b] : ontology.incompatible_pairs())
        dom.static_facts.push_back(Term::app("incompatible", {a, b}));
    for (const std::string& a : agents)
        dom.static_facts.push_back(Term::app("agent", {Term::sym(a)}));
    for (long t = 1; t <= tmax; ++t)
        dom.static_facts.push_back(Term::app("instant", {Term::integer(t)}));
    return dom;
}

NormResult solve_norms(const NormKb& nkb, const std::vector<Literal>& facts,
                       const std::vector<std::string>& agents, long tmax, long headroom) {
    if (agents.empty()) throw NormError("no agents for norm reasoning");
    Domain dom = norm_domain(nkb.ontology, agents, tmax, headroom);
    NormResult out;
    out.program = ground(nkb.kb, dom, facts);
    out.models = stable_models(out.program);
    return out;
}

namespace {

const StableModel& unique_model(const NormResult& r) {
    if (r.models.empty()) throw NormError("no stable model (inconsistent facts)");
    if (r.models.size() > 1)
        throw NormError("expected a unique stable model, found " +
                        std::to_string(r.models.size()));
    return r.models.front();
}

}  // namespace

std::vector<Literal> kernel_closure(const NormKb& nkb, const std::vector<Literal>& facts,
                                    const std::vector<std::string>& agents, long tmax) {
    NormResult r = solve_norms(nkb, facts, agents, tmax);
    const StableModel& m = unique_model(r);
    std::set<Literal> given(facts.begin(), facts.end());
    std::vector<Literal> out;
    for (const Literal& l : m.literals)
        if (l.atom.name == "vrai" && l.atom.is_app() && !given.count(l)) out.push_back(l);
    return out;
}

std::vector<Literal> duty_and_capacity(const NormKb& nkb, const std::vector<Literal>& facts,
                                       const std::vector<std::string>& agents, long tmax) {
    NormResult r = solve_norms(nkb, facts, agents, tmax);
    const StableModel& m = unique_model(r);
    std::vector<Literal> out;
    for (const Literal& l : m.literals) {
        const std::string& p = l.atom.name;
        if (p == "doit" || p == "en_mesure" || p == "disponible") out.push_back(l);
    }
    return out;
}

}  // namespace noyau
