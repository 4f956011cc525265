#ifndef noyau_lexicon_hpp
#define noyau_lexicon_hpp

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "noyau/token.hpp"

namespace noyau {

struct LexiconError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Lexicon {
    struct Mwe {
        std::vector<std::string> lemmas;
        std::string entity;
    };

    std::map<std::string, std::string> val_sem;          // lemma -> semantic value
    std::map<std::string, std::set<std::string>> type_of;  // lemma -> type labels
    std::map<std::string, std::string> supports;         // lemma -> "" or introduced feature (NEG)
    std::vector<Mwe> mwes;

    bool has_type(const std::string& key, const std::string& label) const {
        auto it = type_of.find(key);
        return it != type_of.end() && it->second.count(label) != 0;
    }
};

Lexicon load_lexicon(const std::string& path);
Lexicon parse_lexicon_text(const std::string& text, const std::string& origin = "<lexicon>");

// Replaces each leftmost-longest, non-overlapping match of an MWE lemma
// sequence by a single entity token and re-indexes the sentence.
std::vector<Token> fold_mwes(const std::vector<Token>& sentence, const Lexicon& lexicon);

}  // namespace noyau

#endif
