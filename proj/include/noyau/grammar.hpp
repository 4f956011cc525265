#ifndef noyau_grammar_hpp
#define noyau_grammar_hpp

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "noyau/relation.hpp"
#include "noyau/token.hpp"

namespace noyau {

struct GrammarError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GrammarSymbol {
    enum class Kind { NonTerminal, Tag, Lemma };
    Kind kind = Kind::NonTerminal;
    std::string text;

    friend bool operator<(const GrammarSymbol& a, const GrammarSymbol& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.text < b.text;
    }
    friend bool operator==(const GrammarSymbol& a, const GrammarSymbol& b) {
        return a.kind == b.kind && a.text == b.text;
    }
};

// Action argument: a bare constant (PRÉ, PPRES, ...) or head(PATH) where
// PATH selects a constituent by symbol names, e.g. head(CP.GN) or
// head(VP#2). The selected constituent contributes its lexical head token.
struct ActionArg {
    bool is_constant = false;
    std::string constant;
    std::vector<std::pair<std::string, int>> path;  // (symbol, 1-based occurrence)
};

struct GrammarAction {
    std::string name;
    std::vector<ActionArg> args;
};

struct GrammarRule {
    std::string lhs;
    std::vector<GrammarSymbol> rhs;
    int head = 1;  // 1-based index into rhs of the head child
    std::vector<GrammarAction> actions;
    int line = 0;
};

struct Grammar {
    std::vector<GrammarRule> rules;
    std::string start;
    std::set<std::string> nonterminals;
    std::vector<std::string> warnings;

    int actioned_rules() const;
    std::set<std::string> action_kinds() const;
};

Grammar load_grammar(const std::string& path);
Grammar parse_grammar_text(const std::string& text, const std::string& origin = "<grammar>");

struct ParseNode {
    std::string symbol;
    int rule = -1;   // index into Grammar::rules, -1 for terminals
    int token = -1;  // sentence token index (0-based) for terminals
    std::vector<ParseNode> children;

    friend bool operator==(const ParseNode& a, const ParseNode& b) {
        return a.symbol == b.symbol && a.rule == b.rule && a.token == b.token &&
               a.children == b.children;
    }
    friend bool operator<(const ParseNode& a, const ParseNode& b);
};

struct Analysis {
    ParseNode tree;
    RelationSet relations;
};

struct AnalysisOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr long kDefaultAnalysisCap = 10000;

// Exhaustive chart parse: every complete analysis, each carrying the
// relations emitted by its rules' actions. Empty result means no analysis.
std::vector<Analysis> parse(const std::vector<Token>& sentence, const Grammar& grammar,
                            long cap = kDefaultAnalysisCap);

std::vector<RelationSet> distinct_relation_sets(const std::vector<Analysis>& analyses);

}  // namespace noyau

#endif
