#ifndef noyau_engine_hpp
#define noyau_engine_hpp

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "noyau/term.hpp"

namespace noyau {

struct KbError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A strict implication `b1 & b2 -> h .` or a default `b : h [c1, c2] .`
// whose justification is the conjunction of its heads and blockers.
struct Rule {
    enum class Kind { Strict, Default };

    Kind kind = Kind::Strict;
    std::vector<Literal> body;
    std::vector<Literal> heads;
    std::vector<Literal> blockers;  // defaults only
    std::string annotation;         // trailing %-comment of the statement
    std::string stage;              // #stage section the rule belongs to
    int line = 0;

    std::string str() const;
};

struct KnowledgeBase {
    std::vector<Rule> rules;
    // predicate or functor name -> declared argument sorts ("any" = unconstrained)
    std::map<std::string, std::vector<std::string>> sorts;
    std::vector<std::string> consts;

    std::vector<Rule> rules_in_stage(const std::string& stage) const;
};

KnowledgeBase parse_kb(const std::string& path);
KnowledgeBase parse_kb_text(const std::string& text, const std::string& origin = "<kb>");

// Grounding context. Sorts give per-variable candidate terms; int sorts are
// enumerated lo..hi with arithmetic results admitted up to guard_hi. Atoms of
// static predicates are evaluated while grounding and also enter the program
// as facts.
struct Domain {
    struct IntRange {
        long lo = 1;
        long hi = 1;
        long guard_hi = 1;
    };

    std::map<std::string, std::vector<Term>> sorts;
    std::map<std::string, IntRange> int_sorts;
    std::set<std::string> static_preds;
    std::vector<Term> static_facts;
};

struct GroundRule {
    bool is_default = false;
    std::vector<int> body;
    std::vector<int> heads;
    std::vector<int> blockers;
    int source = -1;  // index into KnowledgeBase::rules; -1 for facts
};

struct GroundProgram {
    std::vector<Literal> lits;  // id -> ground literal
    std::map<Literal, int> ids;
    std::vector<int> complement;  // id -> id of the opposite-sign literal, or -1
    std::vector<GroundRule> rules;
    std::map<int, long> instances_per_rule;  // source rule index -> ground count

    int intern(const Literal& l);
    int lookup(const Literal& l) const;
    void finalize();

    std::vector<Literal> to_literals(const std::vector<bool>& in) const;
};

GroundProgram ground(const KnowledgeBase& kb, const Domain& dom,
                     const std::vector<Literal>& facts);

// Gelfond-Lifschitz transform wrt a candidate literal set: delete every
// default with a contradicted justification conjunct, strip blockers from the
// survivors, keep strict rules.
std::vector<GroundRule> reduct(const GroundProgram& p, const std::vector<bool>& candidate);

struct ModelBits {
    std::vector<bool> in;
    bool inconsistent = false;
};

ModelBits least_model(const GroundProgram& p, const std::vector<GroundRule>& rules);

struct StableModel {
    std::vector<Literal> literals;  // sorted

    bool contains(const Literal& l) const;
};

// All consistent fixpoints M = least_model(reduct(P, M)), in lexicographic
// order of their sorted literal lists.
std::vector<StableModel> stable_models(const GroundProgram& p);

}  // namespace noyau

#endif
