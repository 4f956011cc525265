#include <cctype>
#include <fstream>
#include <sstream>

#include "noyau/engine.hpp"

namespace noyau {

namespace {

struct Tok {
    enum Kind { Name, Var, Int, LPar, RPar, LBrack, RBrack, Comma, Amp, Arrow, Colon, Dot, Minus, Plus, End };
    Kind kind;
    std::string text;
    long value = 0;
};

bool name_start(unsigned char c) {
    return std::islower(c) || c == '_' || c >= 0x80;
}

bool name_char(unsigned char c) {
    return std::isalnum(c) || c == '_' || c >= 0x80;
}

class Lexer {
public:
    Lexer(const std::string& s, const std::string& where) : s_(s), where_(where) { advance(); }

    const Tok& peek() const { return tok_; }

    Tok next() {
        Tok t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw KbError(where_ + ": " + msg);
    }

private:
    void advance() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ >= s_.size()) {
            tok_ = {Tok::End, ""};
            return;
        }
        unsigned char c = s_[pos_];
        switch (c) {
            case '(': tok_ = {Tok::LPar, "("}; ++pos_; return;
            case ')': tok_ = {Tok::RPar, ")"}; ++pos_; return;
            case '[': tok_ = {Tok::LBrack, "["}; ++pos_; return;
            case ']': tok_ = {Tok::RBrack, "]"}; ++pos_; return;
            case ',': tok_ = {Tok::Comma, ","}; ++pos_; return;
            case '&': tok_ = {Tok::Amp, "&"}; ++pos_; return;
            case ':': tok_ = {Tok::Colon, ":"}; ++pos_; return;
            case '.': tok_ = {Tok::Dot, "."}; ++pos_; return;
            case '+': tok_ = {Tok::Plus, "+"}; ++pos_; return;
            case '\'': {
                size_t end = s_.find('\'', pos_ + 1);
                if (end == std::string::npos) fail("unterminated quoted name");
                tok_ = {Tok::Name, s_.substr(pos_ + 1, end - pos_ - 1)};
                pos_ = end + 1;
                return;
            }
            default: break;
        }
        if (c == '-') {
            if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
                tok_ = {Tok::Arrow, "->"};
                pos_ += 2;
            } else {
                tok_ = {Tok::Minus, "-"};
                ++pos_;
            }
            return;
        }
        if (std::isdigit(c)) {
            size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            tok_ = {Tok::Int, s_.substr(start, pos_ - start)};
            tok_.value = std::stol(tok_.text);
            return;
        }
        if (std::isupper(c)) {
            size_t start = pos_;
            while (pos_ < s_.size() && name_char(s_[pos_])) ++pos_;
            tok_ = {Tok::Var, s_.substr(start, pos_ - start)};
            return;
        }
        if (name_start(c)) {
            size_t start = pos_;
            while (pos_ < s_.size() && name_char(s_[pos_])) ++pos_;
            tok_ = {Tok::Name, s_.substr(start, pos_ - start)};
            return;
        }
        fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
    }

    const std::string& s_;
    std::string where_;
    size_t pos_ = 0;
    Tok tok_;
};

class StatementParser {
public:
    StatementParser(const std::string& text, const std::string& where) : lex_(text, where) {}

    // rule := [body] ('->' heads | ':' heads [blockers]) '.'
    Rule parse_rule() {
        Rule r;
        if (lex_.peek().kind != Tok::Arrow && lex_.peek().kind != Tok::Colon) {
            if (lex_.peek().kind == Tok::Name && lex_.peek().text == "true") {
                lex_.next();
            } else {
                r.body = literal_conjunction(Tok::Amp);
            }
        }
        Tok sep = lex_.next();
        if (sep.kind == Tok::Arrow) {
            r.kind = Rule::Kind::Strict;
            r.heads = literal_conjunction(Tok::Amp);
        } else if (sep.kind == Tok::Colon) {
            r.kind = Rule::Kind::Default;
            r.heads = literal_conjunction(Tok::Amp);
            if (lex_.peek().kind == Tok::LBrack) {
                lex_.next();
                if (lex_.peek().kind != Tok::RBrack) r.blockers = literal_conjunction(Tok::Comma);
                expect(Tok::RBrack, "']'");
            }
        } else {
            lex_.fail("expected '->' or ':' in rule");
        }
        expect(Tok::Dot, "'.' at end of statement");
        if (lex_.peek().kind != Tok::End) lex_.fail("trailing tokens after '.'");
        return r;
    }

private:
    std::vector<Literal> literal_conjunction(Tok::Kind sep) {
        std::vector<Literal> out;
        out.push_back(literal());
        while (lex_.peek().kind == sep) {
            lex_.next();
            out.push_back(literal());
        }
        return out;
    }

    Literal literal() {
        bool positive = true;
        if (lex_.peek().kind == Tok::Minus) {
            lex_.next();
            positive = false;
        }
        Tok name = lex_.next();
        if (name.kind != Tok::Name) lex_.fail("expected predicate name");
        if (lex_.peek().kind != Tok::LPar) return Literal(positive, Term::sym(name.text));
        lex_.next();
        std::vector<Term> args;
        args.push_back(term());
        while (lex_.peek().kind == Tok::Comma) {
            lex_.next();
            args.push_back(term());
        }
        expect(Tok::RPar, "')'");
        return Literal(positive, Term::app(name.text, std::move(args)));
    }

    Term term() {
        Tok t = lex_.next();
        switch (t.kind) {
            case Tok::Int:
                return Term::integer(t.value);
            case Tok::Var: {
                Term v = Term::var(t.text);
                // time arithmetic: T+1 / T-1
                if (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
                    std::string op = lex_.next().kind == Tok::Plus ? "+" : "-";
                    Tok k = lex_.next();
                    if (k.kind != Tok::Int) lex_.fail("expected integer offset after '" + op + "'");
                    return Term::app(op, {std::move(v), Term::integer(k.value)});
                }
                return v;
            }
            case Tok::Name: {
                if (lex_.peek().kind != Tok::LPar) return Term::sym(t.text);
                lex_.next();
                std::vector<Term> args;
                args.push_back(term());
                while (lex_.peek().kind == Tok::Comma) {
                    lex_.next();
                    args.push_back(term());
                }
                expect(Tok::RPar, "')'");
                return Term::app(t.text, std::move(args));
            }
            default:
                lex_.fail("expected term, got '" + t.text + "'");
        }
        return Term::sym("");  // unreachable
    }

    void expect(Tok::Kind k, const std::string& what) {
        if (lex_.next().kind != k) lex_.fail("expected " + what);
    }

    Lexer lex_;
};

void collect_vars(const Term& t, std::set<std::string>& out) {
    if (t.is_var()) out.insert(t.name);
    for (const Term& a : t.args) collect_vars(a, out);
}

void validate_rule(const Rule& r, const std::string& where,
                   std::map<std::string, size_t>& arities) {
    std::set<std::string> body_vars;
    for (const Literal& l : r.body) collect_vars(l.atom, body_vars);
    auto check_bound = [&](const std::vector<Literal>& lits, const char* part) {
        for (const Literal& l : lits) {
            std::set<std::string> vars;
            collect_vars(l.atom, vars);
            for (const std::string& v : vars)
                if (!body_vars.count(v))
                    throw KbError(where + ": unsafe variable " + v + " in " + part + " of rule `" +
                                  r.str() + "`");
        }
    };
    check_bound(r.heads, "consequent");
    check_bound(r.blockers, "blockers");

    auto check_arity = [&](const std::vector<Literal>& lits) {
        for (const Literal& l : lits) {
            size_t n = l.arity();
            auto it = arities.find(l.pred());
            if (it == arities.end())
                arities.emplace(l.pred(), n);
            else if (it->second != n)
                throw KbError(where + ": arity clash for predicate " + l.pred() + " (" +
                              std::to_string(n) + " vs " + std::to_string(it->second) + ")");
        }
    };
    check_arity(r.body);
    check_arity(r.heads);
    check_arity(r.blockers);
}

}  // namespace

std::string Rule::str() const {
    std::string out;
    for (size_t i = 0; i < body.size(); ++i) {
        if (i) out += " & ";
        out += body[i].str();
    }
    if (body.empty()) out += "true";
    out += kind == Kind::Strict ? " -> " : " : ";
    for (size_t i = 0; i < heads.size(); ++i) {
        if (i) out += " & ";
        out += heads[i].str();
    }
    if (kind == Kind::Default) {
        out += " [";
        for (size_t i = 0; i < blockers.size(); ++i) {
            if (i) out += ", ";
            out += blockers[i].str();
        }
        out += "]";
    }
    out += " .";
    return out;
}

std::vector<Rule> KnowledgeBase::rules_in_stage(const std::string& stage) const {
    std::vector<Rule> out;
    for (const Rule& r : rules)
        if (r.stage == stage) out.push_back(r);
    return out;
}

KnowledgeBase parse_kb_text(const std::string& text, const std::string& origin) {
    KnowledgeBase kb;
    std::map<std::string, size_t> arities;
    std::string stage;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string where = origin + ":" + std::to_string(lineno);
        std::string annotation;
        size_t cut = line.find('%');
        if (cut != std::string::npos) {
            annotation = line.substr(cut + 1);
            while (!annotation.empty() && annotation.front() == ' ') annotation.erase(0, 1);
            while (!annotation.empty() &&
                   (annotation.back() == ' ' || annotation.back() == '\r'))
                annotation.pop_back();
            line.erase(cut);
        }
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        size_t first = line.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        line.erase(0, first);

        if (line[0] == '#') {
            std::istringstream ds(line);
            std::string directive;
            ds >> directive;
            if (directive == "#sort") {
                std::string pred;
                ds >> pred;
                if (pred.empty()) throw KbError(where + ": #sort needs a predicate name");
                std::vector<std::string> arg_sorts;
                std::string spec;
                while (ds >> spec) {
                    size_t colon = spec.find(':');
                    arg_sorts.push_back(colon == std::string::npos ? spec
                                                                   : spec.substr(colon + 1));
                }
                if (arg_sorts.empty()) throw KbError(where + ": #sort needs argument sorts");
                kb.sorts[pred] = arg_sorts;
            } else if (directive == "#const") {
                std::string name;
                ds >> name;
                if (name.empty()) throw KbError(where + ": #const needs a name");
                kb.consts.push_back(name);
            } else if (directive == "#stage") {
                ds >> stage;
                if (stage.empty()) throw KbError(where + ": #stage needs a name");
            } else {
                throw KbError(where + ": unknown directive " + directive);
            }
            continue;
        }

        StatementParser sp(line, where);
        Rule r = sp.parse_rule();
        r.annotation = annotation;
        r.stage = stage;
        r.line = lineno;
        validate_rule(r, where, arities);
        kb.rules.push_back(std::move(r));
    }
    return kb;
}

KnowledgeBase parse_kb(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw KbError("cannot open rule file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_kb_text(buf.str(), path);
}

}  // namespace noyau
