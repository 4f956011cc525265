#include <algorithm>
#include <cassert>
#include <functional>
#include <optional>

#include "noyau/engine.hpp"

namespace noyau {

namespace {

bool is_arith(const Term& t) {
    return t.is_app() && (t.name == "+" || t.name == "-") && t.args.size() == 2 &&
           t.args[0].is_var() && t.args[1].is_int();
}

using Binding = std::map<std::string, Term>;

// Sort inference: a variable takes the sort declared for the argument
// position it occupies, predicate and functor positions alike.
void infer_var_sorts(const Term& t, const std::string& slot,
                     const std::map<std::string, std::vector<std::string>>& decls,
                     std::map<std::string, std::string>& out, const std::string& where) {
    if (t.is_var()) {
        if (slot == "any") return;
        auto it = out.find(t.name);
        if (it == out.end())
            out[t.name] = slot;
        else if (it->second != slot)
            throw KbError(where + ": variable " + t.name + " used with conflicting sorts " +
                          it->second + " and " + slot);
        return;
    }
    if (is_arith(t)) {
        infer_var_sorts(t.args[0], slot, decls, out, where);
        return;
    }
    if (t.is_app()) {
        auto it = decls.find(t.name);
        for (size_t i = 0; i < t.args.size(); ++i) {
            std::string s = "any";
            if (it != decls.end() && i < it->second.size()) s = it->second[i];
            infer_var_sorts(t.args[i], s, decls, out, where);
        }
    }
}

bool unify(const Term& pattern, const Term& ground, Binding& b) {
    if (pattern.is_var()) {
        auto it = b.find(pattern.name);
        if (it != b.end()) return it->second == ground;
        b.emplace(pattern.name, ground);
        return true;
    }
    if (pattern.kind != ground.kind) return false;
    switch (pattern.kind) {
        case Term::Kind::Int:
            return pattern.value == ground.value;
        case Term::Kind::Sym:
            return pattern.name == ground.name;
        case Term::Kind::App: {
            if (pattern.name != ground.name || pattern.args.size() != ground.args.size())
                return false;
            for (size_t i = 0; i < pattern.args.size(); ++i)
                if (!unify(pattern.args[i], ground.args[i], b)) return false;
            return true;
        }
        default:
            return false;
    }
}

struct SubstResult {
    Term term;
    bool out_of_range = false;
};

SubstResult substitute(const Term& t, const Binding& b,
                       const std::map<std::string, std::string>& var_sorts,
                       const Domain& dom) {
    if (t.is_var()) {
        auto it = b.find(t.name);
        assert(it != b.end());
        return {it->second, false};
    }
    if (is_arith(t)) {
        auto it = b.find(t.args[0].name);
        assert(it != b.end());
        if (!it->second.is_int())
            throw KbError("arithmetic over non-integer value for variable " + t.args[0].name);
        long v = it->second.value + (t.name == "+" ? t.args[1].value : -t.args[1].value);
        bool oor = false;
        auto s = var_sorts.find(t.args[0].name);
        if (s != var_sorts.end()) {
            auto r = dom.int_sorts.find(s->second);
            if (r != dom.int_sorts.end())
                oor = v < r->second.lo || v > r->second.guard_hi;
        }
        return {Term::integer(v), oor};
    }
    if (t.is_app()) {
        Term out = t;
        bool oor = false;
        for (size_t i = 0; i < t.args.size(); ++i) {
            SubstResult r = substitute(t.args[i], b, var_sorts, dom);
            out.args[i] = std::move(r.term);
            oor = oor || r.out_of_range;
        }
        return {std::move(out), oor};
    }
    return {t, false};
}

struct GroundLit {
    Literal lit;
    bool out_of_range = false;
};

GroundLit ground_literal(const Literal& l, const Binding& b,
                         const std::map<std::string, std::string>& var_sorts,
                         const Domain& dom) {
    SubstResult r = substitute(l.atom, b, var_sorts, dom);
    return {Literal(l.positive, std::move(r.term)), r.out_of_range};
}

}  // namespace

int GroundProgram::intern(const Literal& l) {
    auto it = ids.find(l);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(lits.size());
    lits.push_back(l);
    ids.emplace(l, id);
    return id;
}

int GroundProgram::lookup(const Literal& l) const {
    auto it = ids.find(l);
    return it == ids.end() ? -1 : it->second;
}

void GroundProgram::finalize() {
    complement.assign(lits.size(), -1);
    for (size_t i = 0; i < lits.size(); ++i)
        complement[i] = lookup(lits[i].negated());
}

std::vector<Literal> GroundProgram::to_literals(const std::vector<bool>& in) const {
    std::vector<Literal> out;
    for (size_t i = 0; i < lits.size(); ++i)
        if (in[i]) out.push_back(lits[i]);
    std::sort(out.begin(), out.end());
    return out;
}

GroundProgram ground(const KnowledgeBase& kb, const Domain& dom,
                     const std::vector<Literal>& facts) {
    GroundProgram p;

    std::set<Term> static_set(dom.static_facts.begin(), dom.static_facts.end());
    auto add_fact = [&p](const Literal& l) {
        GroundRule r;
        r.heads.push_back(p.intern(l));
        p.rules.push_back(std::move(r));
    };
    for (const Term& t : dom.static_facts) add_fact(Literal(true, t));
    for (const Literal& f : facts) {
        if (!f.atom.is_ground()) throw KbError("non-ground fact: " + f.str());
        add_fact(f);
    }

    for (size_t ri = 0; ri < kb.rules.size(); ++ri) {
        const Rule& rule = kb.rules[ri];
        std::string where = "rule `" + rule.str() + "`";
        p.instances_per_rule[static_cast<int>(ri)] = 0;

        std::map<std::string, std::string> var_sorts;
        auto infer_all = [&](const std::vector<Literal>& lits) {
            for (const Literal& l : lits)
                infer_var_sorts(l.atom, "any", kb.sorts, var_sorts, where);
        };
        infer_all(rule.body);
        infer_all(rule.heads);
        infer_all(rule.blockers);

        // Static body literals are evaluated during grounding: positive ones
        // bind variables by joining against the static facts; a classically
        // negated static atom can never be derived, so such a rule is dead.
        std::vector<const Literal*> static_body;
        std::vector<const Literal*> dynamic_body;
        bool dead = false;
        for (const Literal& l : rule.body) {
            if (dom.static_preds.count(l.pred())) {
                if (!l.positive) dead = true;
                static_body.push_back(&l);
            } else {
                dynamic_body.push_back(&l);
            }
        }
        if (dead) continue;

        std::set<std::string> all_vars;
        for (const Literal& l : rule.body) {
            std::set<std::string> vs;
            std::function<void(const Term&)> rec = [&](const Term& t) {
                if (t.is_var()) vs.insert(t.name);
                for (const Term& a : t.args) rec(a);
            };
            rec(l.atom);
            all_vars.insert(vs.begin(), vs.end());
        }

        auto emit = [&](const Binding& b) {
            GroundRule gr;
            gr.is_default = rule.kind == Rule::Kind::Default;
            gr.source = static_cast<int>(ri);

            for (const Literal* l : static_body) {
                GroundLit g = ground_literal(*l, b, var_sorts, dom);
                if (g.out_of_range) return;
                if (!static_set.count(g.lit.atom)) return;
            }
            std::vector<Literal> body_l, head_l, blk_l;
            for (const Literal* l : dynamic_body) {
                GroundLit g = ground_literal(*l, b, var_sorts, dom);
                if (g.out_of_range) return;
                body_l.push_back(std::move(g.lit));
            }
            for (const Literal& l : rule.heads) {
                GroundLit g = ground_literal(l, b, var_sorts, dom);
                if (g.out_of_range) return;
                head_l.push_back(std::move(g.lit));
            }
            for (const Literal& l : rule.blockers) {
                GroundLit g = ground_literal(l, b, var_sorts, dom);
                if (g.out_of_range) continue;  // vacuous blocker, drop it
                if (dom.static_preds.count(l.pred())) {
                    // Blocker over a static: contradicted forever if the
                    // negated justification holds statically, vacuous else.
                    if (!g.lit.positive && static_set.count(g.lit.atom)) return;
                    continue;
                }
                blk_l.push_back(std::move(g.lit));
            }
            for (const Literal& l : body_l) gr.body.push_back(p.intern(l));
            for (const Literal& l : head_l) gr.heads.push_back(p.intern(l));
            for (const Literal& l : blk_l) gr.blockers.push_back(p.intern(l));
            p.rules.push_back(std::move(gr));
            ++p.instances_per_rule[static_cast<int>(ri)];
        };

        // Join static body literals left to right, then enumerate whatever
        // variables remain over their sort domains.
        std::function<void(size_t, Binding&)> join = [&](size_t idx, Binding& b) {
            if (idx == static_body.size()) {
                std::vector<std::string> free_vars;
                for (const std::string& v : all_vars)
                    if (!b.count(v)) free_vars.push_back(v);

                std::function<void(size_t, Binding&)> cart = [&](size_t vi, Binding& bb) {
                    if (vi == free_vars.size()) {
                        emit(bb);
                        return;
                    }
                    const std::string& v = free_vars[vi];
                    auto s = var_sorts.find(v);
                    if (s == var_sorts.end())
                        throw KbError(where + ": no sort known for variable " + v);
                    auto ints = dom.int_sorts.find(s->second);
                    if (ints != dom.int_sorts.end()) {
                        for (long x = ints->second.lo; x <= ints->second.hi; ++x) {
                            bb[v] = Term::integer(x);
                            cart(vi + 1, bb);
                        }
                        bb.erase(v);
                        return;
                    }
                    auto terms = dom.sorts.find(s->second);
                    if (terms == dom.sorts.end() || terms->second.empty())
                        throw KbError(where + ": empty domain for sort " + s->second +
                                      " of variable " + v);
                    for (const Term& t : terms->second) {
                        bb[v] = t;
                        cart(vi + 1, bb);
                    }
                    bb.erase(v);
                };
                cart(0, b);
                return;
            }
            for (const Term& fact : dom.static_facts) {
                Binding b2 = b;
                if (unify(static_body[idx]->atom, fact, b2)) join(idx + 1, b2);
            }
        };
        Binding b;
        join(0, b);
    }

    p.finalize();
    return p;
}

std::vector<GroundRule> reduct(const GroundProgram& p, const std::vector<bool>& candidate) {
    std::vector<GroundRule> out;
    for (const GroundRule& r : p.rules) {
        if (!r.is_default) {
            out.push_back(r);
            continue;
        }
        bool contradicted = false;
        auto check = [&](int id) {
            int c = p.complement[id];
            if (c >= 0 && candidate[c]) contradicted = true;
        };
        for (int id : r.heads) check(id);
        for (int id : r.blockers) check(id);
        if (contradicted) continue;
        GroundRule d = r;
        d.is_default = false;
        d.blockers.clear();
        out.push_back(std::move(d));
    }
    return out;
}

ModelBits least_model(const GroundProgram& p, const std::vector<GroundRule>& rules) {
    ModelBits m;
    m.in.assign(p.lits.size(), false);

    std::vector<int> remaining(rules.size(), 0);
    std::vector<std::vector<int>> watchers(p.lits.size());
    std::vector<int> queue;

    for (size_t i = 0; i < rules.size(); ++i) {
        remaining[i] = static_cast<int>(rules[i].body.size());
        for (int id : rules[i].body) watchers[id].push_back(static_cast<int>(i));
        if (remaining[i] == 0) queue.push_back(static_cast<int>(i));
    }

    std::vector<int> lit_queue;
    auto add_lit = [&](int id) {
        if (m.in[id]) return;
        m.in[id] = true;
        lit_queue.push_back(id);
    };

    while (!queue.empty() || !lit_queue.empty()) {
        while (!queue.empty()) {
            int r = queue.back();
            queue.pop_back();
            for (int h : rules[r].heads) add_lit(h);
        }
        while (!lit_queue.empty()) {
            int id = lit_queue.back();
            lit_queue.pop_back();
            for (int r : watchers[id])
                if (--remaining[r] == 0) queue.push_back(r);
        }
    }

    for (size_t i = 0; i < p.lits.size() && !m.inconsistent; ++i)
        if (m.in[i] && p.complement[i] >= 0 && m.in[p.complement[i]]) m.inconsistent = true;
    return m;
}

bool StableModel::contains(const Literal& l) const {
    return std::binary_search(literals.begin(), literals.end(), l);
}

namespace {

// Branch over the reduct-survival of ground defaults with smodels-style
// propagation; every leaf candidate is verified against the definition
// M = least_model(reduct(P, M)).
class StableSearch {
public:
    explicit StableSearch(const GroundProgram& p) : p_(p) {
        for (size_t i = 0; i < p.rules.size(); ++i)
            if (p.rules[i].is_default) defaults_.push_back(static_cast<int>(i));
    }

    std::set<std::vector<Literal>> run() {
        std::vector<int8_t> state(defaults_.size(), UNDEC);
        search(state);
        return results_;
    }

private:
    enum : int8_t { UNDEC = 0, IN = 1, OUT = 2 };

    ModelBits model_with(const std::vector<int8_t>& state, bool include_undec) const {
        std::vector<GroundRule> rules;
        for (const GroundRule& r : p_.rules)
            if (!r.is_default) rules.push_back(r);
        for (size_t di = 0; di < defaults_.size(); ++di) {
            if (state[di] == IN || (include_undec && state[di] == UNDEC)) {
                GroundRule d = p_.rules[defaults_[di]];
                d.is_default = false;
                d.blockers.clear();
                rules.push_back(std::move(d));
            }
        }
        return least_model(p_, rules);
    }

    bool contradicted(int rule_idx, const std::vector<bool>& m) const {
        const GroundRule& r = p_.rules[rule_idx];
        auto check = [&](int id) {
            int c = p_.complement[id];
            return c >= 0 && m[c];
        };
        for (int id : r.heads)
            if (check(id)) return true;
        for (int id : r.blockers)
            if (check(id)) return true;
        return false;
    }

    void search(std::vector<int8_t>& state) {
        ModelBits lower;
        while (true) {
            lower = model_with(state, false);
            if (lower.inconsistent) return;
            ModelBits upper = model_with(state, true);
            bool changed = false;
            for (size_t di = 0; di < defaults_.size(); ++di) {
                if (state[di] != UNDEC) continue;
                if (contradicted(defaults_[di], lower.in)) {
                    state[di] = OUT;
                    changed = true;
                } else if (!contradicted(defaults_[di], upper.in)) {
                    state[di] = IN;
                    changed = true;
                }
            }
            if (!changed) break;
        }

        int branch = -1;
        for (size_t di = 0; di < defaults_.size(); ++di)
            if (state[di] == UNDEC) {
                branch = static_cast<int>(di);
                break;
            }

        if (branch < 0) {
            verify(lower.in);
            return;
        }
        std::vector<int8_t> copy = state;
        copy[branch] = IN;
        search(copy);
        copy = state;
        copy[branch] = OUT;
        search(copy);
    }

    void verify(const std::vector<bool>& candidate) {
        ModelBits m = least_model(p_, reduct(p_, candidate));
        if (m.inconsistent) return;
        if (m.in != candidate) return;
        results_.insert(p_.to_literals(candidate));
    }

    const GroundProgram& p_;
    std::vector<int> defaults_;
    std::set<std::vector<Literal>> results_;
};

}  // namespace

std::vector<StableModel> stable_models(const GroundProgram& p) {
    StableSearch search(p);
    std::vector<StableModel> out;
    for (const std::vector<Literal>& lits : search.run()) out.push_back(StableModel{lits});
    return out;
}

}  // namespace noyau
