#ifndef noyau_relation_hpp
#define noyau_relation_hpp

#include <set>
#include <string>
#include <vector>

#include "noyau/token.hpp"

namespace noyau {

// A surface relation over word atoms and feature constants, e.g.
// sujet(être1, je) or qualif_v(avoir2, NEG).
struct Relation {
    std::string name;
    std::vector<std::string> args;

    friend bool operator==(const Relation& a, const Relation& b) {
        return a.name == b.name && a.args == b.args;
    }
    friend bool operator<(const Relation& a, const Relation& b) {
        if (a.name != b.name) return a.name < b.name;
        return a.args < b.args;
    }
};

// Sorted, duplicate-free relation set.
struct RelationSet {
    std::vector<Relation> items;

    void insert(Relation r);
    void erase(const Relation& r);
    bool contains(const Relation& r) const;
    bool empty() const { return items.empty(); }
    size_t size() const { return items.size(); }

    auto begin() const { return items.begin(); }
    auto end() const { return items.end(); }

    friend bool operator==(const RelationSet& a, const RelationSet& b) {
        return a.items == b.items;
    }
    friend bool operator<(const RelationSet& a, const RelationSet& b) {
        return a.items < b.items;
    }
};

// Occurrence numbers are shown only when the rendered set mentions several
// occurrences of the same lemma.
std::string render_relation(const Relation& r, const ReportSymbols& symbols,
                            const std::map<std::string, int>& mentioned);
std::vector<std::string> render_relation_set(const RelationSet& set, const ReportSymbols& symbols);

}  // namespace noyau

#endif
