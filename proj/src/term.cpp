#include "noyau/term.hpp"

#include <sstream>

namespace noyau {

Term Term::sym(std::string s) {
    Term t;
    t.kind = Kind::Sym;
    t.name = std::move(s);
    return t;
}

Term Term::integer(long v) {
    Term t;
    t.kind = Kind::Int;
    t.value = v;
    return t;
}

Term Term::var(std::string s) {
    Term t;
    t.kind = Kind::Var;
    t.name = std::move(s);
    return t;
}

Term Term::app(std::string functor, std::vector<Term> args) {
    Term t;
    t.kind = Kind::App;
    t.name = std::move(functor);
    t.args = std::move(args);
    return t;
}

Term Term::combine(Term f, Term a) {
    return app("combine", {std::move(f), std::move(a)});
}

Term Term::ref_temp(Term t) {
    return app("ref_temp", {std::move(t)});
}

bool Term::is_ground() const {
    if (kind == Kind::Var) return false;
    for (const Term& a : args)
        if (!a.is_ground()) return false;
    return true;
}

std::string Term::str() const {
    switch (kind) {
        case Kind::Sym:
        case Kind::Var:
            return name;
        case Kind::Int:
            return std::to_string(value);
        case Kind::App: {
            std::string out = name;
            out += '(';
            for (size_t i = 0; i < args.size(); ++i) {
                if (i) out += ", ";
                out += args[i].str();
            }
            out += ')';
            return out;
        }
    }
    return {};
}

bool operator==(const Term& a, const Term& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Term::Kind::Int:
            return a.value == b.value;
        case Term::Kind::Sym:
        case Term::Kind::Var:
            return a.name == b.name;
        case Term::Kind::App:
            return a.name == b.name && a.args == b.args;
    }
    return false;
}

bool operator<(const Term& a, const Term& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    switch (a.kind) {
        case Term::Kind::Int:
            return a.value < b.value;
        case Term::Kind::Sym:
        case Term::Kind::Var:
            return a.name < b.name;
        case Term::Kind::App:
            if (a.name != b.name) return a.name < b.name;
            return a.args < b.args;
    }
    return false;
}

std::string Literal::str() const {
    return positive ? atom.str() : "-" + atom.str();
}

std::string Literal::display() const {
    return positive ? atom.str() : "¬" + atom.str();
}

bool operator==(const Literal& a, const Literal& b) {
    return a.positive == b.positive && a.atom == b.atom;
}

bool operator<(const Literal& a, const Literal& b) {
    if (a.atom != b.atom) return a.atom < b.atom;
    return a.positive < b.positive;
}

Literal make_vrai(Term pred, Term agent, Term time, bool positive) {
    return Literal(positive,
                   Term::app("vrai", {std::move(pred), std::move(agent), std::move(time)}));
}

bool is_pred(const Literal& l, const std::string& name, size_t arity) {
    return l.atom.name == name &&
           (arity == 0 ? !l.atom.is_app() : (l.atom.is_app() && l.atom.args.size() == arity));
}

}  // namespace noyau
