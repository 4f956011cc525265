#include <algorithm>
#include <functional>
#include <map>

#include "noyau/grammar.hpp"

namespace noyau {

namespace {

// Internal binarized form: rules of arity >= 3 become right-branching chains
// through synthetic symbols so the chart stays cubic; analyses are rebuilt
// over the original rules when enumerating.
struct BinGrammar {
    struct Binary {
        int lhs, left, right;
        int rule;  // original rule
    };
    struct Unit {
        int lhs, child;
        int rule;
    };

    std::map<GrammarSymbol, int> sym_ids;
    std::vector<GrammarSymbol> symbols;  // real symbols only
    int first_synthetic = 0;
    std::vector<Binary> binaries;
    std::vector<Unit> units;
    int start = -1;

    int id(const GrammarSymbol& s) {
        auto it = sym_ids.find(s);
        if (it != sym_ids.end()) return it->second;
        int v = static_cast<int>(symbols.size());
        sym_ids.emplace(s, v);
        symbols.push_back(s);
        return v;
    }
};

BinGrammar binarize(const Grammar& g) {
    BinGrammar bg;
    for (const GrammarRule& r : g.rules) {
        bg.id({GrammarSymbol::Kind::NonTerminal, r.lhs});
        for (const GrammarSymbol& s : r.rhs) bg.id(s);
    }
    bg.first_synthetic = static_cast<int>(bg.symbols.size());
    bg.start = bg.id({GrammarSymbol::Kind::NonTerminal, g.start});

    int next_syn = bg.first_synthetic;
    std::vector<int> syn_pool;
    auto synthetic = [&]() { return next_syn++; };

    for (size_t ri = 0; ri < g.rules.size(); ++ri) {
        const GrammarRule& r = g.rules[ri];
        int lhs = bg.id({GrammarSymbol::Kind::NonTerminal, r.lhs});
        std::vector<int> rhs;
        for (const GrammarSymbol& s : r.rhs) rhs.push_back(bg.id(s));

        if (rhs.size() == 1) {
            bg.units.push_back({lhs, rhs[0], static_cast<int>(ri)});
        } else if (rhs.size() == 2) {
            bg.binaries.push_back({lhs, rhs[0], rhs[1], static_cast<int>(ri)});
        } else {
            int prev = lhs;
            for (size_t k = 0; k + 2 < rhs.size(); ++k) {
                int syn = synthetic();
                bg.binaries.push_back({prev, rhs[k], syn, static_cast<int>(ri)});
                prev = syn;
            }
            bg.binaries.push_back({prev, rhs[rhs.size() - 2], rhs.back(), static_cast<int>(ri)});
        }
    }
    (void)syn_pool;
    return bg;
}

struct Deriv {
    enum Kind { Terminal, Unit, Binary };
    Kind kind;
    int rule = -1;        // original rule for Unit/Binary
    int token = -1;       // Terminal
    int left = -1, right = -1, child = -1;  // edge indices
};

struct Edge {
    int sym, lo, hi;
    std::vector<Deriv> derivs;
    long count = -1;  // analyses through this edge, saturated at cap + 1
};

class Chart {
public:
    Chart(const std::vector<Token>& sentence, const Grammar& g, long cap)
        : sentence_(sentence), grammar_(g), bg_(binarize(g)), cap_(cap) {}

    std::vector<Analysis> run() {
        const int n = static_cast<int>(sentence_.size());
        if (n == 0) return {};
        fill(n);
        int top = find(bg_.start, 0, n);
        if (top < 0) return {};

        long total = count(top);
        if (total > cap_)
            throw AnalysisOverflow("analysis cap exceeded (more than " + std::to_string(cap_) +
                                   " analyses)");
        std::vector<Analysis> out;
        for (ParseNode& tree : enumerate(top)) {
            Analysis a;
            a.tree = std::move(tree);
            collect_relations(a.tree, a.relations);
            out.push_back(std::move(a));
        }
        return out;
    }

private:
    int find(int sym, int lo, int hi) const {
        auto it = index_.find(std::tuple<int, int, int>(sym, lo, hi));
        return it == index_.end() ? -1 : it->second;
    }

    int obtain(int sym, int lo, int hi) {
        int e = find(sym, lo, hi);
        if (e >= 0) return e;
        e = static_cast<int>(edges_.size());
        edges_.push_back({sym, lo, hi, {}, -1});
        index_[std::tuple<int, int, int>(sym, lo, hi)] = e;
        return e;
    }

    void fill(int n) {
        for (int i = 0; i < n; ++i) {
            const Token& tok = sentence_[i];
            for (int s = 0; s < bg_.first_synthetic; ++s) {
                const GrammarSymbol& gs = bg_.symbols[s];
                bool match = (gs.kind == GrammarSymbol::Kind::Tag && gs.text == tok.tag) ||
                             (gs.kind == GrammarSymbol::Kind::Lemma && gs.text == tok.lemma);
                if (!match) continue;
                Deriv d;
                d.kind = Deriv::Terminal;
                d.token = i;
                edges_[obtain(s, i, i + 1)].derivs.push_back(d);
            }
            close_units(i, i + 1);
        }
        for (int len = 2; len <= n; ++len) {
            for (int lo = 0; lo + len <= n; ++lo) {
                int hi = lo + len;
                for (const BinGrammar::Binary& b : bg_.binaries) {
                    for (int mid = lo + 1; mid < hi; ++mid) {
                        int le = find(b.left, lo, mid);
                        int re = find(b.right, mid, hi);
                        if (le < 0 || re < 0) continue;
                        Deriv d;
                        d.kind = Deriv::Binary;
                        d.rule = b.rule;
                        d.left = le;
                        d.right = re;
                        edges_[obtain(b.lhs, lo, hi)].derivs.push_back(d);
                    }
                }
                close_units(lo, hi);
            }
        }
    }

    void close_units(int lo, int hi) {
        bool grew = true;
        while (grew) {
            grew = false;
            for (const BinGrammar::Unit& u : bg_.units) {
                int ce = find(u.child, lo, hi);
                if (ce < 0) continue;
                int pe = obtain(u.lhs, lo, hi);
                bool present = false;
                for (const Deriv& d : edges_[pe].derivs)
                    present = present || (d.kind == Deriv::Unit && d.rule == u.rule && d.child == ce);
                if (!present) {
                    Deriv d;
                    d.kind = Deriv::Unit;
                    d.rule = u.rule;
                    d.child = ce;
                    edges_[pe].derivs.push_back(d);
                    grew = true;
                }
            }
        }
    }

    long saturating_mul(long a, long b) const {
        long lim = cap_ + 1;
        if (a == 0 || b == 0) return 0;
        if (a > lim / b + 1) return lim;
        long r = a * b;
        return r > lim ? lim : r;
    }

    long count(int e) {
        Edge& edge = edges_[e];
        if (edge.count >= 0) return edge.count;
        edge.count = 0;  // cycle-safe: unit cycles are rejected at load
        long total = 0;
        long lim = cap_ + 1;
        for (const Deriv& d : edge.derivs) {
            long c = 0;
            switch (d.kind) {
                case Deriv::Terminal: c = 1; break;
                case Deriv::Unit: c = count(d.child); break;
                case Deriv::Binary: c = saturating_mul(count(d.left), count(d.right)); break;
            }
            total = std::min(lim, total + c);
        }
        edge.count = total;
        return total;
    }

    bool is_synthetic(int sym) const { return sym >= bg_.first_synthetic; }

    // Trees for an edge over a real symbol.
    std::vector<ParseNode> enumerate(int e) {
        const Edge edge = edges_[e];
        std::vector<ParseNode> out;
        for (const Deriv& d : edge.derivs) {
            switch (d.kind) {
                case Deriv::Terminal: {
                    ParseNode leaf;
                    leaf.symbol = bg_.symbols[edge.sym].text;
                    leaf.token = d.token;
                    out.push_back(std::move(leaf));
                    break;
                }
                case Deriv::Unit: {
                    for (ParseNode& child : enumerate(d.child)) {
                        ParseNode node;
                        node.symbol = grammar_.rules[d.rule].lhs;
                        node.rule = d.rule;
                        node.children.push_back(std::move(child));
                        out.push_back(std::move(node));
                    }
                    break;
                }
                case Deriv::Binary: {
                    std::vector<std::vector<ParseNode>> tails =
                        is_synthetic(edges_[d.right].sym)
                            ? enumerate_seq(d.right)
                            : wrap_each(enumerate(d.right));
                    std::vector<ParseNode> lefts = enumerate(d.left);
                    for (const ParseNode& l : lefts) {
                        for (const std::vector<ParseNode>& rest : tails) {
                            ParseNode node;
                            node.symbol = grammar_.rules[d.rule].lhs;
                            node.rule = d.rule;
                            node.children.push_back(l);
                            for (const ParseNode& c : rest) node.children.push_back(c);
                            out.push_back(std::move(node));
                        }
                    }
                    break;
                }
            }
        }
        return out;
    }

    // Child sequences for a synthetic chain edge.
    std::vector<std::vector<ParseNode>> enumerate_seq(int e) {
        const Edge edge = edges_[e];
        std::vector<std::vector<ParseNode>> out;
        for (const Deriv& d : edge.derivs) {
            std::vector<ParseNode> lefts = enumerate(d.left);
            std::vector<std::vector<ParseNode>> tails =
                is_synthetic(edges_[d.right].sym) ? enumerate_seq(d.right)
                                                  : wrap_each(enumerate(d.right));
            for (const ParseNode& l : lefts) {
                for (const std::vector<ParseNode>& rest : tails) {
                    std::vector<ParseNode> seq;
                    seq.push_back(l);
                    for (const ParseNode& c : rest) seq.push_back(c);
                    out.push_back(std::move(seq));
                }
            }
        }
        return out;
    }

    static std::vector<std::vector<ParseNode>> wrap_each(std::vector<ParseNode> nodes) {
        std::vector<std::vector<ParseNode>> out;
        for (ParseNode& n : nodes) out.push_back({std::move(n)});
        return out;
    }

    int head_token(const ParseNode& n) const {
        if (n.token >= 0) return n.token;
        const GrammarRule& r = grammar_.rules[n.rule];
        return head_token(n.children[r.head - 1]);
    }

    const ParseNode* resolve(const ParseNode& node, const std::vector<std::pair<std::string, int>>& path) const {
        const ParseNode* cur = &node;
        for (size_t i = 0; i < path.size(); ++i) {
            const auto& [name, occ] = path[i];
            if (i == 0 && name == cur->symbol) continue;  // lhs refers to the node itself
            int seen = 0;
            const ParseNode* next = nullptr;
            for (const ParseNode& c : cur->children) {
                if (c.symbol == name && ++seen == occ) {
                    next = &c;
                    break;
                }
            }
            if (!next) return nullptr;
            cur = next;
        }
        return cur;
    }

    void collect_relations(const ParseNode& node, RelationSet& out) const {
        for (const ParseNode& c : node.children) collect_relations(c, out);
        if (node.rule < 0) return;
        for (const GrammarAction& act : grammar_.rules[node.rule].actions) {
            Relation rel;
            rel.name = act.name;
            for (const ActionArg& arg : act.args) {
                if (arg.is_constant) {
                    rel.args.push_back(arg.constant);
                    continue;
                }
                const ParseNode* target = resolve(node, arg.path);
                if (!target)
                    throw GrammarError("action head path does not resolve in rule at line " +
                                       std::to_string(grammar_.rules[node.rule].line));
                rel.args.push_back(sentence_[head_token(*target)].atom);
            }
            out.insert(std::move(rel));
        }
    }

    const std::vector<Token>& sentence_;
    const Grammar& grammar_;
    BinGrammar bg_;
    long cap_;
    std::vector<Edge> edges_;
    std::map<std::tuple<int, int, int>, int> index_;
};

}  // namespace

bool operator<(const ParseNode& a, const ParseNode& b) {
    if (a.symbol != b.symbol) return a.symbol < b.symbol;
    if (a.rule != b.rule) return a.rule < b.rule;
    if (a.token != b.token) return a.token < b.token;
    return a.children < b.children;
}

std::vector<Analysis> parse(const std::vector<Token>& sentence, const Grammar& grammar,
                            long cap) {
    if (sentence.empty()) return {};
    Chart chart(sentence, grammar, cap);
    return chart.run();
}

std::vector<RelationSet> distinct_relation_sets(const std::vector<Analysis>& analyses) {
    std::set<RelationSet> seen;
    for (const Analysis& a : analyses) seen.insert(a.relations);
    return std::vector<RelationSet>(seen.begin(), seen.end());
}

}  // namespace noyau
