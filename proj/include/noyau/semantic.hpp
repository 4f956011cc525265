#ifndef noyau_semantic_hpp
#define noyau_semantic_hpp

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "noyau/engine.hpp"
#include "noyau/lexicon.hpp"
#include "noyau/normalizer.hpp"
#include "noyau/relation.hpp"
#include "noyau/token.hpp"

namespace noyau {

struct SemanticError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TemporalRelation {
    enum class Kind { Prec, Simul };
    Kind kind = Kind::Prec;
    Term left, right;

    friend bool operator<(const TemporalRelation& a, const TemporalRelation& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.left != b.left) return a.left < b.left;
        return a.right < b.right;
    }
    friend bool operator==(const TemporalRelation& a, const TemporalRelation& b) {
        return a.kind == b.kind && a.left == b.left && a.right == b.right;
    }
};

struct TemporalGraph {
    std::vector<Term> nodes;
    std::vector<std::pair<int, int>> prec;        // edges over node indices
    std::vector<std::vector<int>> simul_classes;  // partition of node indices
};

// Relations, lexicon facts and voice facts turned into the ground fact base
// the semantic rule stages run over.
struct SemanticFactBase {
    Domain domain;
    std::vector<std::string> word_atoms;
};
SemanticFactBase semantic_fact_base(const RelationSet& relations,
                                    const std::vector<VoiceFact>& voice,
                                    const TaggedReport& report, const Lexicon& lexicon);

// Stage `intermediate` of the semantic rule file over the normalized
// relations: reified literals with symbolic ref_temp times.
std::vector<Literal> build_intermediate(const RelationSet& relations,
                                        const std::vector<VoiceFact>& voice,
                                        const TaggedReport& report, const Lexicon& lexicon,
                                        const KnowledgeBase& semrules);

struct SemanticOutput {
    std::vector<Literal> literals;  // final-name literals, still symbolic times
    std::vector<TemporalRelation> temporal;
};

// Stage `semantic`: final-name literals plus Préc/Simul facts.
SemanticOutput build_semantic(const RelationSet& relations,
                              const std::vector<Literal>& intermediate,
                              const std::vector<VoiceFact>& voice, const TaggedReport& report,
                              const Lexicon& lexicon, const KnowledgeBase& semrules);

TemporalGraph build_temporal_graph(const std::vector<TemporalRelation>& temporal,
                                   const std::vector<Term>& refs);

struct LevelResult {
    std::vector<Literal> literals;  // integer times
    std::map<Term, long> levels;    // ref -> level
    std::vector<std::string> warnings;
};

// Longest-path levels over the Préc DAG; Simul classes take their unique
// determined level; unanchored refs default to level 1 with a warning.
LevelResult level_and_instantiate(const TemporalGraph& graph,
                                  const std::vector<Literal>& literals);

std::vector<Term> collect_time_refs(const std::vector<Literal>& literals);

}  // namespace noyau

#endif
