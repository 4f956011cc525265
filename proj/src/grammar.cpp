#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "noyau/grammar.hpp"

namespace noyau {

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return {};
    size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

GrammarSymbol parse_symbol(const std::string& text, const std::string& where) {
    GrammarSymbol sym;
    if (text.rfind("tag:", 0) == 0) {
        sym.kind = GrammarSymbol::Kind::Tag;
        sym.text = text.substr(4);
    } else if (text.rfind("lemma:", 0) == 0) {
        std::string rest = text.substr(6);
        if (rest.size() < 2 || rest.front() != '\'' || rest.back() != '\'')
            throw GrammarError(where + ": lemma terminal must be quoted: " + text);
        sym.kind = GrammarSymbol::Kind::Lemma;
        sym.text = rest.substr(1, rest.size() - 2);
    } else {
        sym.kind = GrammarSymbol::Kind::NonTerminal;
        sym.text = text;
    }
    if (sym.text.empty()) throw GrammarError(where + ": empty symbol");
    return sym;
}

ActionArg parse_action_arg(const std::string& raw, const std::string& where) {
    std::string text = trim(raw);
    ActionArg arg;
    if (text.rfind("head(", 0) == 0 && text.back() == ')') {
        std::string inner = text.substr(5, text.size() - 6);
        std::string seg;
        std::istringstream in(inner);
        while (std::getline(in, seg, '.')) {
            seg = trim(seg);
            int occ = 1;
            size_t hash = seg.find('#');
            if (hash != std::string::npos) {
                occ = std::stoi(seg.substr(hash + 1));
                seg.erase(hash);
            }
            if (seg.empty() || occ < 1)
                throw GrammarError(where + ": bad head path segment in " + text);
            arg.path.emplace_back(seg, occ);
        }
        if (arg.path.empty()) throw GrammarError(where + ": empty head path");
        return arg;
    }
    if (text.empty() || text.find('(') != std::string::npos)
        throw GrammarError(where + ": bad action argument " + text);
    arg.is_constant = true;
    arg.constant = text;
    return arg;
}

std::vector<GrammarAction> parse_actions(const std::string& block, const std::string& where) {
    std::vector<GrammarAction> out;
    std::string item;
    std::istringstream in(block);
    while (std::getline(in, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        size_t lp = item.find('(');
        if (lp == std::string::npos || item.back() != ')')
            throw GrammarError(where + ": bad action " + item);
        GrammarAction act;
        act.name = trim(item.substr(0, lp));
        std::string args = item.substr(lp + 1, item.size() - lp - 2);
        int depth = 0;
        std::string cur;
        for (char c : args) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (c == ',' && depth == 0) {
                act.args.push_back(parse_action_arg(cur, where));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!trim(cur).empty()) act.args.push_back(parse_action_arg(cur, where));
        if (act.name.empty()) throw GrammarError(where + ": action without a name");
        out.push_back(std::move(act));
    }
    return out;
}

}  // namespace

int Grammar::actioned_rules() const {
    int n = 0;
    for (const GrammarRule& r : rules)
        if (!r.actions.empty()) ++n;
    return n;
}

std::set<std::string> Grammar::action_kinds() const {
    std::set<std::string> out;
    for (const GrammarRule& r : rules)
        for (const GrammarAction& a : r.actions) out.insert(a.name);
    return out;
}

Grammar parse_grammar_text(const std::string& text, const std::string& origin) {
    Grammar g;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::map<std::string, size_t> action_arity;

    while (std::getline(in, line)) {
        ++lineno;
        std::string where = origin + ":" + std::to_string(lineno);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // '#' opens a comment only at line start or after whitespace, so that
        // occurrence selectors like CP#2 survive.
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] != '#') continue;
            if (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t') {
                line.erase(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;

        GrammarRule rule;
        rule.line = lineno;

        std::string actions;
        size_t lb = line.find('{');
        if (lb != std::string::npos) {
            size_t rb = line.rfind('}');
            if (rb == std::string::npos || rb < lb)
                throw GrammarError(where + ": unterminated action block");
            actions = line.substr(lb + 1, rb - lb - 1);
            line = trim(line.substr(0, lb));
        }

        std::vector<std::string> parts = split_ws(line);
        if (parts.size() < 3 || parts[1] != "->")
            throw GrammarError(where + ": expected `LHS -> sym ...`");
        rule.lhs = parts[0];
        bool head_set = false;
        for (size_t i = 2; i < parts.size(); ++i) {
            if (parts[i].rfind("@head=", 0) == 0) {
                rule.head = std::stoi(parts[i].substr(6));
                head_set = true;
                continue;
            }
            rule.rhs.push_back(parse_symbol(parts[i], where));
        }
        if (rule.rhs.empty()) throw GrammarError(where + ": empty productions are not allowed");
        if (!head_set) rule.head = 1;
        if (rule.head < 1 || rule.head > static_cast<int>(rule.rhs.size()))
            throw GrammarError(where + ": @head out of range");

        rule.actions = parse_actions(actions, where);
        for (const GrammarAction& a : rule.actions) {
            auto it = action_arity.find(a.name);
            if (it == action_arity.end())
                action_arity.emplace(a.name, a.args.size());
            else if (it->second != a.args.size())
                throw GrammarError(where + ": action arity mismatch for " + a.name);
            for (const ActionArg& arg : a.args) {
                if (arg.is_constant) continue;
                const std::string& first = arg.path.front().first;
                bool found = first == rule.lhs;
                for (const GrammarSymbol& s : rule.rhs)
                    found = found || (s.kind == GrammarSymbol::Kind::NonTerminal && s.text == first);
                if (!found)
                    throw GrammarError(where + ": action references symbol " + first +
                                       " absent from the rule");
            }
        }

        g.nonterminals.insert(rule.lhs);
        g.rules.push_back(std::move(rule));
    }

    if (g.rules.empty()) throw GrammarError(origin + ": no rules");
    g.start = g.rules.front().lhs;

    for (const GrammarRule& r : g.rules)
        for (const GrammarSymbol& s : r.rhs)
            if (s.kind == GrammarSymbol::Kind::NonTerminal && !g.nonterminals.count(s.text))
                throw GrammarError(origin + ":" + std::to_string(r.line) +
                                   ": undefined nonterminal " + s.text);

    // Cyclic unit-rule chains would make the set of parses infinite.
    std::map<std::string, std::vector<std::string>> unit_edges;
    for (const GrammarRule& r : g.rules)
        if (r.rhs.size() == 1 && r.rhs[0].kind == GrammarSymbol::Kind::NonTerminal)
            unit_edges[r.lhs].push_back(r.rhs[0].text);
    std::map<std::string, int> mark;  // 0 new, 1 active, 2 done
    std::function<void(const std::string&)> visit = [&](const std::string& nt) {
        mark[nt] = 1;
        for (const std::string& next : unit_edges[nt]) {
            if (mark[next] == 1)
                throw GrammarError(origin + ": cyclic unit-rule chain through " + next);
            if (mark[next] == 0) visit(next);
        }
        mark[nt] = 2;
    };
    for (const auto& [nt, _] : unit_edges)
        if (mark[nt] == 0) visit(nt);

    std::set<std::string> reachable{g.start};
    bool grew = true;
    while (grew) {
        grew = false;
        for (const GrammarRule& r : g.rules) {
            if (!reachable.count(r.lhs)) continue;
            for (const GrammarSymbol& s : r.rhs)
                if (s.kind == GrammarSymbol::Kind::NonTerminal && reachable.insert(s.text).second)
                    grew = true;
        }
    }
    for (const std::string& nt : g.nonterminals)
        if (!reachable.count(nt)) g.warnings.push_back("unreachable nonterminal " + nt);

    return g;
}

Grammar load_grammar(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GrammarError("cannot open grammar file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_grammar_text(buf.str(), path);
}

}  // namespace noyau
