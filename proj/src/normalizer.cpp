#include <algorithm>
#include <cassert>

#include "noyau/normalizer.hpp"

namespace noyau {

namespace {

const std::set<std::string> kFirstPerson = {"je", "me", "moi", "mon", "ma",
                                            "mes", "nous", "notre", "nos"};
const std::set<std::string> kPluralPossessives = {"leur", "leurs"};
const std::set<std::string> kSingularPossessives = {"son", "sa", "ses"};
const std::set<std::string> kThirdPronouns = {"il", "elle", "ils", "elles", "lui"};

bool is_noun(const Token& t) {
    return t.tag.rfind("NOM", 0) == 0 || t.tag.rfind("NAM", 0) == 0;
}

bool is_plural(const Token& t) {
    return t.tag.find("pl") != std::string::npos;
}

bool type_compatible(const Token& t, const Lexicon& lexicon) {
    return lexicon.has_type(t.lemma, "agent") || lexicon.has_type(t.lemma, "véhicule");
}

class UnionFind {
public:
    const std::string& find(const std::string& x) {
        auto it = parent_.find(x);
        if (it == parent_.end()) {
            parent_[x] = x;
            return parent_.find(x)->first;
        }
        if (it->second == x) return it->first;
        std::string root = find(it->second);
        parent_[x] = root;
        return parent_.find(x)->second;
    }

    void unite(const std::string& a, const std::string& b) {
        std::string ra = find(a), rb = find(b);
        if (ra != rb) parent_[ra] = rb;
    }

    bool same(const std::string& a, const std::string& b) { return find(a) == find(b); }

private:
    std::map<std::string, std::string> parent_;
};

RelationSet substitute_atom(const RelationSet& relations, const std::string& from,
                            const std::string& to) {
    RelationSet out;
    for (Relation r : relations) {
        for (std::string& a : r.args)
            if (a == from) a = to;
        out.insert(std::move(r));
    }
    return out;
}

bool is_symbol_constant(const std::string& s) {
    return s.size() == 1 && s[0] >= 'A' && s[0] <= 'Z';
}

}  // namespace

AnaphoraResult resolve_anaphora(const RelationSet& relations,
                                const std::vector<const Token*>& tokens,
                                const Lexicon& lexicon) {
    (void)relations;
    AnaphoraResult out;
    for (size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = *tokens[i];
        bool personal = t.tag.rfind("PRO:PER", 0) == 0;
        bool possessive = t.tag.rfind("DET:POS", 0) == 0;
        if (!personal && !possessive) continue;

        if (kFirstPerson.count(t.lemma)) {
            out.corefs.push_back({t.atom, kAuthorEntity});
            continue;
        }
        bool third = (possessive && (kSingularPossessives.count(t.lemma) ||
                                     kPluralPossessives.count(t.lemma))) ||
                     (personal && kThirdPronouns.count(t.lemma));
        if (!third) continue;

        bool want_plural = kPluralPossessives.count(t.lemma) ||
                           t.lemma == "ils" || t.lemma == "elles";
        const Token* antecedent = nullptr;
        for (size_t k = i; k-- > 0;) {
            const Token& c = *tokens[k];
            if (!is_noun(c)) continue;
            if (is_plural(c) != want_plural) continue;
            if (!type_compatible(c, lexicon)) continue;
            antecedent = &c;
            break;
        }
        if (antecedent)
            out.corefs.push_back({t.atom, antecedent->atom});
        else
            out.unresolved.push_back(t.atom);
    }
    std::sort(out.corefs.begin(), out.corefs.end());
    return out;
}

RelationSet apply_metonymy(const RelationSet& relations, const std::vector<CorefFact>& corefs,
                           const ReportSymbols& symbols, const Lexicon& lexicon) {
    UnionFind classes;
    for (const CorefFact& c : corefs) classes.unite(c.left, c.right);

    RelationSet current = relations;
    for (size_t guard = 0; guard <= relations.size(); ++guard) {
        const Relation* hit = nullptr;
        for (const Relation& r : current) {
            if (r.name != "qualif_n" || r.args.size() != 2) continue;
            const std::string& x = r.args[0];
            const std::string& y = r.args[1];
            auto info = symbols.by_atom.find(x);
            if (info == symbols.by_atom.end()) continue;
            if (!lexicon.has_type(info->second.lemma, "agent")) continue;
            if (!is_symbol_constant(y)) continue;
            hit = &r;
            break;
        }
        if (!hit) return current;

        std::string x = hit->args[0];
        std::string y = hit->args[1];
        assert(x != y && "symbols are irreducible");
        current.erase(*hit);

        RelationSet next;
        for (Relation r : current) {
            for (std::string& a : r.args)
                if (a == x || (a != y && classes.same(a, x))) a = y;
            next.insert(std::move(r));
        }
        current = std::move(next);
    }
    return current;
}

RelationSet fold_support_verbs(const RelationSet& relations, const ReportSymbols& symbols,
                               const Lexicon& lexicon) {
    auto support_feature = [&](const std::string& atom) -> const std::string* {
        auto info = symbols.by_atom.find(atom);
        const std::string& key = info == symbols.by_atom.end() ? atom : info->second.lemma;
        auto it = lexicon.supports.find(key);
        return it == lexicon.supports.end() ? nullptr : &it->second;
    };

    RelationSet current = relations;
    while (true) {
        std::vector<const Relation*> supports;
        for (const Relation& r : current)
            if (r.name == "support" && r.args.size() == 2 && support_feature(r.args[0]))
                supports.push_back(&r);
        if (supports.empty()) return current;

        // Innermost first: fold a support whose target is not itself folded away.
        const Relation* pick = nullptr;
        for (const Relation* s : supports) {
            bool target_is_source = false;
            for (const Relation* other : supports)
                target_is_source = target_is_source || other->args[0] == s->args[1];
            if (!target_is_source) {
                pick = s;
                break;
            }
        }
        if (!pick) return current;  // cyclic support chain, leave untouched

        std::string s = pick->args[0];
        std::string v = pick->args[1];
        const std::string* feature = support_feature(s);
        current.erase(*pick);
        current = substitute_atom(current, s, v);
        if (feature && !feature->empty()) current.insert({"qualif_v", {v, *feature}});
    }
}

std::vector<VoiceFact> detect_passive(const RelationSet& relations,
                                      const ReportSymbols& symbols) {
    auto lemma_of = [&](const std::string& atom) {
        auto it = symbols.by_atom.find(atom);
        return it == symbols.by_atom.end() ? atom : it->second.lemma;
    };

    std::set<std::string> verbs;
    for (const Relation& r : relations) {
        if (r.name != "support" || r.args.size() != 2) continue;
        const std::string& aux = r.args[0];
        if (lemma_of(aux) != "être") continue;
        bool by_phrase = false, participle = false;
        for (const Relation& q : relations) {
            if (q.name == "compl_v" && q.args.size() == 3 && q.args[1] == aux &&
                lemma_of(q.args[0]) == "par")
                by_phrase = true;
            if (q.name == "qualif_v" && q.args.size() == 2 && q.args[0] == aux &&
                q.args[1] == "PASSÉ")
                participle = true;
        }
        if (by_phrase || participle) verbs.insert(r.args[1]);
    }
    std::vector<VoiceFact> out;
    for (const std::string& v : verbs) out.push_back({v});
    return out;
}

RelationSet rewrite_mwes(const RelationSet& relations, const TaggedReport& report,
                         const Lexicon& lexicon) {
    if (lexicon.mwes.empty()) return relations;

    // (member atoms, entity) per occurrence, leftmost-longest per sentence
    std::vector<std::pair<std::set<std::string>, std::string>> matches;
    for (const auto& sentence : report.sentences) {
        size_t i = 0;
        while (i < sentence.size()) {
            const Lexicon::Mwe* best = nullptr;
            for (const Lexicon::Mwe& mwe : lexicon.mwes) {
                if (i + mwe.lemmas.size() > sentence.size()) continue;
                bool match = true;
                for (size_t k = 0; k < mwe.lemmas.size() && match; ++k)
                    match = sentence[i + k].lemma == mwe.lemmas[k];
                if (match && (!best || mwe.lemmas.size() > best->lemmas.size())) best = &mwe;
            }
            if (best) {
                std::set<std::string> members;
                for (size_t k = 0; k < best->lemmas.size(); ++k)
                    members.insert(sentence[i + k].atom);
                matches.emplace_back(std::move(members), best->entity);
                i += best->lemmas.size();
            } else {
                ++i;
            }
        }
    }
    if (matches.empty()) return relations;

    RelationSet out;
    for (const Relation& r : relations) {
        Relation rewritten = r;
        bool internal = false;
        for (const auto& [members, entity] : matches) {
            int inside = 0;
            for (const std::string& a : r.args)
                if (members.count(a)) ++inside;
            if (inside >= 2) internal = true;
            for (std::string& a : rewritten.args)
                if (members.count(a)) a = entity;
        }
        if (!internal) out.insert(std::move(rewritten));
    }
    return out;
}

NormalizeResult normalize(const RelationSet& relations, const TaggedReport& report,
                          const Lexicon& lexicon) {
    NormalizeResult out;
    RelationSet current = rewrite_mwes(relations, report, lexicon);

    AnaphoraResult ana = resolve_anaphora(current, report.all_tokens(), lexicon);
    out.corefs = ana.corefs;
    out.unresolved = ana.unresolved;

    UnionFind classes;
    for (const CorefFact& c : ana.corefs) classes.unite(c.left, c.right);
    {
        RelationSet next;
        for (Relation r : current) {
            for (std::string& a : r.args)
                if (a != kAuthorEntity && classes.same(a, kAuthorEntity)) a = kAuthorEntity;
            next.insert(std::move(r));
        }
        current = std::move(next);
    }

    current = apply_metonymy(current, ana.corefs, report.symbols, lexicon);
    out.voice = detect_passive(current, report.symbols);
    current = fold_support_verbs(current, report.symbols, lexicon);

    out.relations = std::move(current);
    return out;
}

}  // namespace noyau
