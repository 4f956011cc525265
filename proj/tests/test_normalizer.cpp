#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "noyau/normalizer.hpp"

using namespace noyau;
using noyau::testing::make_report;

namespace {

const Lexicon& shipped_lexicon() { return noyau::testing::shipped_resources().lexicon; }

RelationSet rels(std::initializer_list<Relation> items) {
    RelationSet out;
    for (const Relation& r : items) out.insert(r);
    return out;
}

}  // namespace

TEST_CASE("anaphora on report (1): j' and son") {
    TaggedReport r = noyau::testing::shipped_report("report1.txt");
    AnaphoraResult ana = resolve_anaphora({}, r.all_tokens(), shipped_lexicon());
    bool je_to_author = false, son_to_vehicle = false;
    for (const CorefFact& c : ana.corefs) {
        if (c.left == "je" && c.right == kAuthorEntity) je_to_author = true;
        if (c.left == "son" && c.right == "véhicule") son_to_vehicle = true;
    }
    CHECK(je_to_author);
    CHECK(son_to_vehicle);
    CHECK(ana.unresolved.empty());
}

TEST_CASE("anaphora: no pronouns, empty result") {
    TaggedReport r = make_report("le/le/DET:ART feu/feu/NOM");
    AnaphoraResult ana = resolve_anaphora({}, r.all_tokens(), shipped_lexicon());
    CHECK(ana.corefs.empty());
}

TEST_CASE("anaphora picks the nearest preceding compatible noun") {
    // "le véhicule A ... son conducteur": conducteur follows the possessive,
    // so the antecedent is véhicule.
    TaggedReport r = make_report(
        "le/le/DET:ART véhicule/véhicule/NOM A/A/NAM roulait/rouler/VER:impf "
        "son/son/DET:POS conducteur/conducteur/NOM dormait/dormir/VER:impf");
    AnaphoraResult ana = resolve_anaphora({}, r.all_tokens(), shipped_lexicon());

    // oracle: score candidates by recency among preceding, agreeing nouns
    const Token* expected = nullptr;
    for (const Token* t : r.all_tokens()) {
        if (t->lemma == "son") break;
        bool noun = t->tag.rfind("NOM", 0) == 0 || t->tag.rfind("NAM", 0) == 0;
        bool compat = shipped_lexicon().has_type(t->lemma, "agent") ||
                      shipped_lexicon().has_type(t->lemma, "véhicule");
        bool singular = t->tag.find("pl") == std::string::npos;
        if (noun && compat && singular) expected = t;
    }
    REQUIRE(expected != nullptr);
    CHECK(expected->lemma == "véhicule");
    bool found = false;
    for (const CorefFact& c : ana.corefs)
        found = found || (c.left == "son" && c.right == expected->atom);
    CHECK(found);
}

TEST_CASE("anaphora: unresolvable pronoun is recorded, not fatal") {
    TaggedReport r = make_report("il/il/PRO:PER roulait/rouler/VER:impf");
    AnaphoraResult ana = resolve_anaphora({}, r.all_tokens(), shipped_lexicon());
    CHECK(ana.corefs.empty());
    REQUIRE(ana.unresolved.size() == 1);
    CHECK(ana.unresolved[0] == "il");
}

TEST_CASE("metonymy: the two applications of the paper example") {
    TaggedReport r = noyau::testing::shipped_report("report1.txt");
    RelationSet input = rels({{"qualif_n", {"véhicule", "B"}},
                              {"qualif_n", {"conducteur", "son"}},
                              {"compl_v", {"par", "être2", "véhicule"}},
                              {"sujet", {"avoir2", "conducteur"}}});
    std::vector<CorefFact> corefs = {{"son", "véhicule"}};
    RelationSet out = apply_metonymy(input, corefs, r.symbols, shipped_lexicon());

    // first application replaces véhicule and son by B, the second conducteur
    CHECK(out.contains({"compl_v", {"par", "être2", "B"}}));
    CHECK(out.contains({"sujet", {"avoir2", "B"}}));
    for (const Relation& rel : out) CHECK(rel.name != "qualif_n");
    CHECK(out.size() == 2);
}

TEST_CASE("metonymy: no agent-typed qualif_n leaves the set unchanged") {
    TaggedReport r = noyau::testing::shipped_report("report1.txt");
    RelationSet input = rels({{"qualif_n", {"feu", "rouge"}}, {"sujet", {"être1", "je"}}});
    CHECK(apply_metonymy(input, {}, r.symbols, shipped_lexicon()) == input);
}

TEST_CASE("metonymy is confluent: reversed pick order, same fixpoint") {
    TaggedReport r = make_report(
        "véhicule/véhicule/NOM B/B/NAM conducteur/conducteur/NOM C/C/NAM");
    RelationSet input = rels({{"qualif_n", {"véhicule", "B"}},
                              {"qualif_n", {"conducteur", "C"}},
                              {"sujet", {"p", "véhicule"}},
                              {"objet", {"p", "conducteur"}}});

    // oracle: same algorithm picking the LAST candidate each round
    RelationSet expected = input;
    const Lexicon& lex = shipped_lexicon();
    while (true) {
        const Relation* hit = nullptr;
        for (const Relation& rel : expected) {
            if (rel.name != "qualif_n") continue;
            auto info = r.symbols.by_atom.find(rel.args[0]);
            if (info == r.symbols.by_atom.end()) continue;
            if (!lex.has_type(info->second.lemma, "agent")) continue;
            if (rel.args[1].size() != 1 || rel.args[1][0] < 'A' || rel.args[1][0] > 'Z')
                continue;
            hit = &rel;  // keep scanning: last wins
        }
        if (!hit) break;
        std::string x = hit->args[0], y = hit->args[1];
        expected.erase(*hit);
        RelationSet next;
        for (Relation rel : expected) {
            for (std::string& a : rel.args)
                if (a == x) a = y;
            next.insert(std::move(rel));
        }
        expected = std::move(next);
    }
    CHECK(apply_metonymy(input, {}, r.symbols, lex) == expected);
}

TEST_CASE("support folding: features transfer") {
    TaggedReport r = noyau::testing::shipped_report("report1.txt");
    RelationSet input = rels({{"support", {"avoir2", "arrêter"}},
                              {"sujet", {"avoir2", "B"}},
                              {"qualif_v", {"avoir2", "NEG"}}});
    RelationSet out = fold_support_verbs(input, r.symbols, shipped_lexicon());
    CHECK(out == rels({{"sujet", {"arrêter", "B"}}, {"qualif_v", {"arrêter", "NEG"}}}));
}

TEST_CASE("support folding: identity without support relations") {
    TaggedReport r = noyau::testing::shipped_report("report1.txt");
    RelationSet input = rels({{"sujet", {"percuter", "B"}}});
    CHECK(fold_support_verbs(input, r.symbols, shipped_lexicon()) == input);
}

TEST_CASE("support folding: chains fold innermost first") {
    TaggedReport r = make_report(
        "a/avoir/AVOIR:pres e/être/AUX:pper p/percuter/VER:pper x/xx/NOM");
    // support(avoir, être), support(être, percuter): all mentions end at percuter
    RelationSet input = rels({{"support", {"avoir", "être"}},
                              {"support", {"être", "percuter"}},
                              {"sujet", {"avoir", "xx"}},
                              {"qualif_v", {"avoir", "NEG"}}});
    RelationSet out = fold_support_verbs(input, r.symbols, shipped_lexicon());

    // oracle: repeated single-step substitution to fixpoint
    RelationSet expected = input;
    while (true) {
        const Relation* pick = nullptr;
        for (const Relation& rel : expected) {
            if (rel.name != "support") continue;
            bool target_is_source = false;
            for (const Relation& other : expected)
                if (other.name == "support" && other.args[0] == rel.args[1])
                    target_is_source = true;
            if (!target_is_source) {
                pick = &rel;
                break;
            }
        }
        if (!pick) break;
        std::string s = pick->args[0], v = pick->args[1];
        expected.erase(*pick);
        RelationSet next;
        for (Relation rel : expected) {
            for (std::string& arg : rel.args)
                if (arg == s) arg = v;
            next.insert(std::move(rel));
        }
        expected = std::move(next);
    }
    CHECK(out == expected);
    CHECK(out.contains({"sujet", {"percuter", "xx"}}));
    CHECK(out.contains({"qualif_v", {"percuter", "NEG"}}));
    for (const Relation& rel : out) CHECK(rel.name != "support");
}

TEST_CASE("support with inherent polarity adds the feature") {
    TaggedReport r = make_report("o/oublier/VER:pper f/freiner/VER:infi");
    RelationSet input = rels({{"support", {"oublier", "freiner"}},
                              {"sujet", {"oublier", "B"}}});
    RelationSet out = fold_support_verbs(input, r.symbols, shipped_lexicon());
    CHECK(out.contains({"sujet", {"freiner", "B"}}));
    CHECK(out.contains({"qualif_v", {"freiner", "NEG"}}));
}

TEST_CASE("passive detection: truth table of the two triggers") {
    TaggedReport r = noyau::testing::shipped_report("report1.txt");

    RelationSet both = rels({{"support", {"être2", "percuter"}},
                             {"compl_v", {"par", "être2", "véhicule"}},
                             {"qualif_v", {"être2", "PASSÉ"}}});
    RelationSet par_only = rels({{"support", {"être2", "percuter"}},
                                 {"compl_v", {"par", "être2", "véhicule"}}});
    RelationSet participle_only = rels({{"support", {"être2", "percuter"}},
                                        {"qualif_v", {"être2", "PASSÉ"}}});
    RelationSet neither = rels({{"support", {"être2", "percuter"}}});
    RelationSet active = rels({{"sujet", {"percuter", "B"}},
                               {"objet", {"percuter", "A"}},
                               {"qualif_v", {"percuter", "PASSÉ"}}});

    auto passive_verbs = [&](const RelationSet& s) {
        std::vector<std::string> out;
        for (const VoiceFact& v : detect_passive(s, r.symbols)) out.push_back(v.verb);
        return out;
    };
    CHECK(passive_verbs(both) == std::vector<std::string>{"percuter"});
    CHECK(passive_verbs(par_only) == std::vector<std::string>{"percuter"});
    CHECK(passive_verbs(participle_only) == std::vector<std::string>{"percuter"});
    CHECK(passive_verbs(neither).empty());
    CHECK(passive_verbs(active).empty());
}

TEST_CASE("même_ref closure is an equivalence relation") {
    std::mt19937 rng(42);
    const char* atoms[] = {"a", "b", "c", "d", "Auteur"};
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<CorefFact> corefs;
        int n = static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i)
            corefs.push_back({atoms[rng() % 5], atoms[rng() % 5]});

        // closure by repeated symmetric/transitive extension
        std::set<std::pair<std::string, std::string>> closure;
        for (const CorefFact& c : corefs) {
            closure.emplace(c.left, c.right);
            closure.emplace(c.right, c.left);
        }
        for (const char* a : atoms) closure.emplace(a, a);
        bool grew = true;
        while (grew) {
            grew = false;
            auto snapshot = closure;
            for (auto& [x, y] : snapshot)
                for (auto& [y2, z] : snapshot)
                    if (y == y2 && !closure.count({x, z})) {
                        closure.emplace(x, z);
                        grew = true;
                    }
        }
        for (auto& [x, y] : closure) {
            CHECK(closure.count({y, x}) == 1);  // symmetric
            CHECK(closure.count({x, x}) == 1);  // reflexive on mentioned atoms
        }
    }
}

TEST_CASE("normalize on report (1): the full preprocessing chain") {
    const PipelineResources& res = noyau::testing::shipped_resources();
    TaggedReport r = noyau::testing::shipped_report("report1.txt");
    auto analyses = parse(r.sentences[0], res.grammar);
    auto sets = distinct_relation_sets(analyses);

    // find the printed candidate
    std::vector<std::string> expected = noyau::testing::printed_relation_listing();
    std::sort(expected.begin(), expected.end());
    const RelationSet* printed = nullptr;
    for (const RelationSet& s : sets) {
        auto rendered = render_relation_set(s, r.symbols);
        std::sort(rendered.begin(), rendered.end());
        if (rendered == expected) printed = &s;
    }
    REQUIRE(printed != nullptr);

    NormalizeResult norm = normalize(*printed, r, res.lexicon);
    CHECK(norm.relations.contains({"sujet", {"percuter", "Auteur"}}));
    CHECK(norm.relations.contains({"sujet", {"arrêter", "B"}}));
    CHECK(norm.relations.contains({"qualif_v", {"arrêter", "NEG"}}));
    CHECK(norm.relations.contains({"compl_n", {"au", "arrêt", "feu_rouge"}}));
    CHECK(norm.relations.contains({"relation", {"PRÉ", "percuter", "être1"}}));
    for (const Relation& rel : norm.relations) {
        CHECK(rel.name != "support");
        for (const std::string& a : rel.args) {
            CHECK(a != "je");
            CHECK(a != "véhicule");
            CHECK(a != "conducteur");
            CHECK(a != "son");
        }
    }
    REQUIRE(norm.voice.size() == 1);
    CHECK(norm.voice[0].verb == "percuter");
}

TEST_CASE("metonymy and support folding never grow the relation set") {
    TaggedReport r = noyau::testing::shipped_report("report1.txt");
    std::mt19937 rng(7331);
    const char* names[] = {"sujet", "objet", "qualif_n", "qualif_v", "support", "compl_v"};
    const char* words[] = {"véhicule", "conducteur", "son", "B", "avoir2", "arrêter", "feu"};
    for (int trial = 0; trial < 40; ++trial) {
        RelationSet input;
        int n = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) {
            Relation rel;
            rel.name = names[rng() % 6];
            size_t arity = rel.name == "compl_v" ? 3 : 2;
            for (size_t k = 0; k < arity; ++k) rel.args.push_back(words[rng() % 7]);
            input.insert(std::move(rel));
        }
        std::vector<CorefFact> corefs = {{"son", "véhicule"}};
        CHECK(apply_metonymy(input, corefs, r.symbols, shipped_lexicon()).size() <=
              input.size());
        CHECK(fold_support_verbs(input, r.symbols, shipped_lexicon()).size() <=
              input.size());
    }
}
