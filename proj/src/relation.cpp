#include <algorithm>

#include "noyau/relation.hpp"

namespace noyau {

void RelationSet::insert(Relation r) {
    auto it = std::lower_bound(items.begin(), items.end(), r);
    if (it == items.end() || !(*it == r)) items.insert(it, std::move(r));
}

void RelationSet::erase(const Relation& r) {
    auto it = std::lower_bound(items.begin(), items.end(), r);
    if (it != items.end() && *it == r) items.erase(it);
}

bool RelationSet::contains(const Relation& r) const {
    return std::binary_search(items.begin(), items.end(), r);
}

std::string render_relation(const Relation& r, const ReportSymbols& symbols,
                            const std::map<std::string, int>& mentioned) {
    std::string out = r.name;
    out += '(';
    for (size_t i = 0; i < r.args.size(); ++i) {
        if (i) out += ", ";
        out += symbols.display(r.args[i], mentioned);
    }
    out += ')';
    return out;
}

std::vector<std::string> render_relation_set(const RelationSet& set,
                                             const ReportSymbols& symbols) {
    std::set<std::string> atoms;
    for (const Relation& r : set)
        for (const std::string& a : r.args) atoms.insert(a);
    std::map<std::string, int> mentioned = symbols.lemma_counts(atoms);

    std::vector<std::string> out;
    out.reserve(set.size());
    for (const Relation& r : set) out.push_back(render_relation(r, symbols, mentioned));
    return out;
}

}  // namespace noyau
