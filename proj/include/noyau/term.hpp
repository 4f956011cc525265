#ifndef noyau_term_hpp
#define noyau_term_hpp

#include <string>
#include <vector>

namespace noyau {

// First-order terms: symbols, integers, variables (rule files only) and
// applications f(t1, ..., tn). combine(x, y), ref_temp(x) and non(x) are
// ordinary applications.
struct Term {
    enum class Kind { Sym, Int, Var, App };

    Kind kind = Kind::Sym;
    std::string name;        // Sym / Var / App functor
    long value = 0;          // Int
    std::vector<Term> args;  // App

    static Term sym(std::string s);
    static Term integer(long v);
    static Term var(std::string s);
    static Term app(std::string functor, std::vector<Term> args);
    static Term combine(Term f, Term a);
    static Term ref_temp(Term t);

    bool is_sym() const { return kind == Kind::Sym; }
    bool is_int() const { return kind == Kind::Int; }
    bool is_var() const { return kind == Kind::Var; }
    bool is_app() const { return kind == Kind::App; }
    bool is_ground() const;

    std::string str() const;  // canonical text, e.g. combine(heurter, Auteur)

    friend bool operator==(const Term& a, const Term& b);
    friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
    friend bool operator<(const Term& a, const Term& b);
};

// A signed atom. The atom itself is a Term whose head is the predicate name
// (0-ary predicates are plain symbols). Classical negation: p and -p are
// distinct atoms that may not co-exist in a consistent model.
struct Literal {
    bool positive = true;
    Term atom;

    Literal() = default;
    Literal(bool pos, Term a) : positive(pos), atom(std::move(a)) {}

    Literal negated() const { return Literal(!positive, atom); }
    const std::string& pred() const { return atom.name; }
    size_t arity() const { return atom.is_app() ? atom.args.size() : 0; }

    std::string str() const;      // DSL form: -vrai(arrêter, B, 2)
    std::string display() const;  // report form: ¬vrai(arrêter, B, 2)

    friend bool operator==(const Literal& a, const Literal& b);
    friend bool operator!=(const Literal& a, const Literal& b) { return !(a == b); }
    friend bool operator<(const Literal& a, const Literal& b);
};

// Helpers for the report pipeline's literal shapes.
Literal make_vrai(Term pred, Term agent, Term time, bool positive = true);
bool is_pred(const Literal& l, const std::string& name, size_t arity);

}  // namespace noyau

#endif
