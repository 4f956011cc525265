#include <fstream>
#include <sstream>

#include "noyau/lexicon.hpp"

namespace noyau {

Lexicon parse_lexicon_text(const std::string& text, const std::string& origin) {
    Lexicon lex;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string where = origin + ":" + std::to_string(lineno);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "val_sem") {
            std::string lemma, value;
            ls >> lemma >> value;
            if (lemma.empty() || value.empty())
                throw LexiconError(where + ": val_sem needs <lemma> <value>");
            auto it = lex.val_sem.find(lemma);
            if (it != lex.val_sem.end() && it->second != value)
                throw LexiconError(where + ": conflicting val_sem for " + lemma + " (" +
                                   it->second + " vs " + value + ")");
            lex.val_sem[lemma] = value;
        } else if (kind == "type") {
            std::string lemma, label;
            ls >> lemma >> label;
            if (lemma.empty() || label.empty())
                throw LexiconError(where + ": type needs <lemma> <label>");
            lex.type_of[lemma].insert(label);
        } else if (kind == "support") {
            std::string lemma, feature;
            ls >> lemma >> feature;
            if (lemma.empty()) throw LexiconError(where + ": support needs <lemma>");
            lex.supports[lemma] = feature;  // empty or an introduced feature like NEG
        } else if (kind == "mwe") {
            Lexicon::Mwe mwe;
            std::string word;
            bool arrow = false;
            while (ls >> word) {
                if (word == "->") {
                    arrow = true;
                    continue;
                }
                if (arrow) {
                    if (!mwe.entity.empty())
                        throw LexiconError(where + ": mwe entity must be a single word");
                    mwe.entity = word;
                } else {
                    mwe.lemmas.push_back(word);
                }
            }
            if (!arrow || mwe.entity.empty() || mwe.lemmas.empty())
                throw LexiconError(where + ": mwe needs <lemma>+ -> <entity>");
            lex.mwes.push_back(std::move(mwe));
        } else {
            throw LexiconError(where + ": unknown entry kind " + kind);
        }
    }
    return lex;
}

Lexicon load_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LexiconError("cannot open lexicon file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_lexicon_text(buf.str(), path);
}

std::vector<Token> fold_mwes(const std::vector<Token>& sentence, const Lexicon& lexicon) {
    std::vector<Token> out;
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
            Token folded;
            for (size_t k = 0; k < best->lemmas.size(); ++k) {
                if (k) folded.surface += ' ';
                folded.surface += sentence[i + k].surface;
            }
            folded.lemma = best->entity;
            folded.tag = "MWE";
            folded.sentence = sentence[i].sentence;
            out.push_back(std::move(folded));
            i += best->lemmas.size();
        } else {
            out.push_back(sentence[i]);
            ++i;
        }
    }
    for (size_t k = 0; k < out.size(); ++k) {
        out[k].index = static_cast<int>(k) + 1;
        out[k].atom.clear();
    }
    // Re-derive local atoms so folded sentences stay usable on their own.
    std::map<std::string, int> totals;
    for (const Token& t : out) ++totals[t.lemma];
    std::map<std::string, int> seen;
    for (Token& t : out) {
        int ord = ++seen[t.lemma];
        t.atom = totals[t.lemma] > 1 ? t.lemma + std::to_string(ord) : t.lemma;
    }
    return out;
}

}  // namespace noyau
