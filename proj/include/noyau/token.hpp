#ifndef noyau_token_hpp
#define noyau_token_hpp

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace noyau {

struct ReportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Token {
    std::string surface;
    std::string lemma;
    std::string tag;
    int index = 0;     // 1-based position within the sentence
    int sentence = 0;  // 0-based sentence number
    std::string atom;  // report-unique name: lemma, or lemma+ordinal when repeated
};

// Word atoms display as their bare lemma unless the rendered set mentions
// several occurrences of that lemma (être1/être2 style).
struct ReportSymbols {
    struct Info {
        std::string lemma;
        int ordinal = 1;
    };
    std::map<std::string, Info> by_atom;

    bool is_token(const std::string& atom) const { return by_atom.count(atom) != 0; }
    std::string display(const std::string& atom, const std::map<std::string, int>& mentioned_lemma_counts) const;
    std::map<std::string, int> lemma_counts(const std::set<std::string>& atoms) const;
};

struct TaggedReport {
    std::string id;
    std::vector<std::vector<Token>> sentences;
    ReportSymbols symbols;

    std::vector<const Token*> all_tokens() const;
};

TaggedReport load_tagged_report(const std::string& path);
TaggedReport parse_tagged_report(const std::string& text, const std::string& id);
std::string serialize_tagged_report(const TaggedReport& report);

// Assigns atoms: lemma alone when the lemma occurs once in the report,
// lemma+ordinal otherwise. Also fills the symbol table.
void assign_atoms(TaggedReport& report);

}  // namespace noyau

#endif
