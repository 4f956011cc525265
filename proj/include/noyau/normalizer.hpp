#ifndef noyau_normalizer_hpp
#define noyau_normalizer_hpp

#include <map>
#include <string>
#include <vector>

#include "noyau/lexicon.hpp"
#include "noyau/relation.hpp"
#include "noyau/token.hpp"

namespace noyau {

struct CorefFact {
    std::string left, right;  // atoms or entity constants

    friend bool operator==(const CorefFact& a, const CorefFact& b) {
        return a.left == b.left && a.right == b.right;
    }
    friend bool operator<(const CorefFact& a, const CorefFact& b) {
        if (a.left != b.left) return a.left < b.left;
        return a.right < b.right;
    }
};

struct VoiceFact {
    std::string verb;  // passive

    friend bool operator<(const VoiceFact& a, const VoiceFact& b) { return a.verb < b.verb; }
    friend bool operator==(const VoiceFact& a, const VoiceFact& b) { return a.verb == b.verb; }
};

inline constexpr const char* kAuthorEntity = "Auteur";

struct AnaphoraResult {
    std::vector<CorefFact> corefs;
    std::vector<std::string> unresolved;  // pronoun atoms without an antecedent
};

// First-person forms map to Auteur; other possessives and personal pronouns
// map to the nearest preceding noun that agrees in number and carries a
// compatible lexicon type.
AnaphoraResult resolve_anaphora(const RelationSet& relations,
                                const std::vector<const Token*>& tokens,
                                const Lexicon& lexicon);

// qualif_n(x, y) with type(x) = agent and y a one-letter symbol substitutes y
// for x and for everything coreferent with x, to fixpoint.
RelationSet apply_metonymy(const RelationSet& relations, const std::vector<CorefFact>& corefs,
                           const ReportSymbols& symbols, const Lexicon& lexicon);

// Every support verb is replaced by its supported verb, innermost first;
// features move along, and supports with an inherent feature add it.
RelationSet fold_support_verbs(const RelationSet& relations, const ReportSymbols& symbols,
                               const Lexicon& lexicon);

// Passive trigger: an être support with a par complement, or an être support
// carrying the past-participle feature.
std::vector<VoiceFact> detect_passive(const RelationSet& relations, const ReportSymbols& symbols);

// Replaces the member tokens of each MWE occurrence by its entity across the
// relation set and drops relations internal to the expression.
RelationSet rewrite_mwes(const RelationSet& relations, const TaggedReport& report,
                         const Lexicon& lexicon);

struct NormalizeResult {
    RelationSet relations;  // fully normalized
    std::vector<CorefFact> corefs;
    std::vector<VoiceFact> voice;
    std::vector<std::string> unresolved;
};

// mwe rewriting, anaphora, metonymy, support folding, passive detection.
NormalizeResult normalize(const RelationSet& relations, const TaggedReport& report,
                          const Lexicon& lexicon);

}  // namespace noyau

#endif
