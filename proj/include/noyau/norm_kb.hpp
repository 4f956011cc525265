#ifndef noyau_norm_kb_hpp
#define noyau_norm_kb_hpp

#include <stdexcept>
#include <string>
#include <vector>

#include "noyau/engine.hpp"

namespace noyau {

struct OntologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NormError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Kernel predicates: everything the cause search consumes reduces to these.
const std::vector<std::string>& kernel_predicates();

struct Ontology {
    std::vector<std::string> actions;
    std::vector<std::string> effects;
    std::vector<std::pair<std::string, std::string>> raison_pot;   // action -> effect
    std::vector<std::pair<std::string, std::string>> incompatible_decl;

    // Symmetric closure of the declared pairs plus incompatible(E, non(E)).
    std::vector<std::pair<Term, Term>> incompatible_pairs() const;
    bool has_effect(const std::string& name) const;
    bool has_action(const std::string& name) const;
};

Ontology load_ontology(const std::string& path);
Ontology parse_ontology_text(const std::string& text, const std::string& origin = "<ontology>");

struct NormKb {
    KnowledgeBase kb;  // file rules plus materialized bridge and capacity rules
    Ontology ontology;
    std::vector<std::string> warnings;
};

NormKb load_norm_kb(const std::string& kb_path, const std::string& ontology_path);
NormKb make_norm_kb(KnowledgeBase kb, Ontology ontology);

Domain norm_domain(const Ontology& ontology, const std::vector<std::string>& agents,
                   long tmax, long headroom = 1);

struct NormResult {
    GroundProgram program;
    std::vector<StableModel> models;
};

NormResult solve_norms(const NormKb& nkb, const std::vector<Literal>& facts,
                       const std::vector<std::string>& agents, long tmax, long headroom = 1);

// Derived ±vrai literals of the unique stable model (the kernel reduction).
std::vector<Literal> kernel_closure(const NormKb& nkb, const std::vector<Literal>& facts,
                                    const std::vector<std::string>& agents, long tmax);

// doit / en_mesure / disponible literals of the unique stable model.
std::vector<Literal> duty_and_capacity(const NormKb& nkb, const std::vector<Literal>& facts,
                                       const std::vector<std::string>& agents, long tmax);

}  // namespace noyau

#endif
