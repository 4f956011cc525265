#ifndef noyau_tests_helpers_hpp
#define noyau_tests_helpers_hpp

#include <string>

#include "noyau/pipeline.hpp"

namespace noyau::testing {

inline std::string data_path(const std::string& name) {
    return std::string(NOYAU_DATA_DIR) + "/" + name;
}

inline RunConfig shipped_config() {
    RunConfig c;
    c.grammar_path = data_path("grammar.txt");
    c.lexicon_path = data_path("lexicon.txt");
    c.semrules_path = data_path("semantic.rules");
    c.kb_path = data_path("norms.kb");
    c.ontology_path = data_path("ontology.txt");
    return c;
}

inline const PipelineResources& shipped_resources() {
    static PipelineResources res = load_resources(shipped_config());
    return res;
}

inline TaggedReport shipped_report(const std::string& name) {
    return load_tagged_report(data_path("reports/" + name));
}

// Tagged-report text from "surface/lemma/tag surface/lemma/tag ..." with "//"
// separating sentences.
inline TaggedReport make_report(const std::string& compact, const std::string& id = "test") {
    std::string text;
    std::string tok;
    auto flush_tok = [&]() {
        if (tok.empty()) return;
        if (tok == "//") {
            text += '\n';
        } else {
            size_t a = tok.find('/');
            size_t b = tok.find('/', a + 1);
            text += tok.substr(0, a) + "\t" + tok.substr(a + 1, b - a - 1) + "\t" +
                    tok.substr(b + 1) + "\n";
        }
        tok.clear();
    };
    for (char c : compact) {
        if (c == ' ') {
            flush_tok();
        } else {
            tok += c;
        }
    }
    flush_tok();
    return parse_tagged_report(text, id);
}

// The §2.2 relation listing for report (1), as rendered strings.
inline std::vector<std::string> printed_relation_listing() {
    return {
        "relation(PRÉ, être2, être1)",
        "support(être2, percuter)",
        "support(avoir, arrêter)",
        "sujet(être1, je)",
        "sujet(être2, je)",
        "sujet(avoir, conducteur)",
        "objet(avoir, s')",
        "compl_v(à1, être1, arrêt)",
        "compl_v(à2, être2, arrière)",
        "compl_v(par, être2, véhicule)",
        "compl_n(au, arrêt, feu)",
        "qualif_n(feu, rouge)",
        "qualif_n(véhicule, B)",
        "qualif_n(conducteur, son)",
        "qualif_v(être1, PPRES)",
        "qualif_v(être2, PASSÉ)",
        "qualif_v(avoir, PPRES)",
        "qualif_v(avoir, NEG)",
    };
}

}  // namespace noyau::testing

#endif
