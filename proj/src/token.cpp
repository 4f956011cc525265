#include <filesystem>
#include <fstream>
#include <sstream>

#include "noyau/token.hpp"

namespace noyau {

std::string ReportSymbols::display(const std::string& atom,
                                   const std::map<std::string, int>& mentioned) const {
    auto it = by_atom.find(atom);
    if (it == by_atom.end()) return atom;
    auto n = mentioned.find(it->second.lemma);
    if (n != mentioned.end() && n->second > 1) return atom;
    return it->second.lemma;
}

std::map<std::string, int> ReportSymbols::lemma_counts(const std::set<std::string>& atoms) const {
    std::map<std::string, int> counts;
    for (const std::string& a : atoms) {
        auto it = by_atom.find(a);
        if (it != by_atom.end()) ++counts[it->second.lemma];
    }
    return counts;
}

std::vector<const Token*> TaggedReport::all_tokens() const {
    std::vector<const Token*> out;
    for (const auto& s : sentences)
        for (const Token& t : s) out.push_back(&t);
    return out;
}

void assign_atoms(TaggedReport& report) {
    std::map<std::string, int> totals;
    for (const auto& s : report.sentences)
        for (const Token& t : s) ++totals[t.lemma];

    report.symbols.by_atom.clear();
    std::map<std::string, int> seen;
    for (auto& s : report.sentences) {
        for (Token& t : s) {
            int ord = ++seen[t.lemma];
            t.atom = totals[t.lemma] > 1 ? t.lemma + std::to_string(ord) : t.lemma;
            report.symbols.by_atom[t.atom] = {t.lemma, ord};
        }
    }
}

TaggedReport parse_tagged_report(const std::string& text, const std::string& id) {
    TaggedReport report;
    report.id = id;
    std::vector<Token> sentence;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    auto flush = [&]() {
        if (!sentence.empty()) {
            report.sentences.push_back(sentence);
            sentence.clear();
        }
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] == '#') continue;
        if (line.empty()) {
            flush();
            continue;
        }
        size_t t1 = line.find('\t');
        size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos)
            throw ReportError(id + ": line " + std::to_string(lineno) +
                              ": expected surface<TAB>lemma<TAB>tag");
        Token tok;
        tok.surface = line.substr(0, t1);
        tok.lemma = line.substr(t1 + 1, t2 - t1 - 1);
        tok.tag = line.substr(t2 + 1);
        if (tok.lemma.empty() || tok.tag.empty())
            throw ReportError(id + ": line " + std::to_string(lineno) +
                              ": empty lemma or tag");
        tok.index = static_cast<int>(sentence.size()) + 1;
        tok.sentence = static_cast<int>(report.sentences.size());
        sentence.push_back(std::move(tok));
    }
    flush();

    if (report.sentences.empty()) throw ReportError(id + ": empty report");
    assign_atoms(report);
    return report;
}

TaggedReport load_tagged_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ReportError("cannot open report file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_tagged_report(buf.str(), std::filesystem::path(path).stem().string());
}

std::string serialize_tagged_report(const TaggedReport& report) {
    std::string out;
    for (size_t i = 0; i < report.sentences.size(); ++i) {
        if (i) out += '\n';
        for (const Token& t : report.sentences[i]) {
            out += t.surface;
            out += '\t';
            out += t.lemma;
            out += '\t';
            out += t.tag;
            out += '\n';
        }
    }
    return out;
}

}  // namespace noyau
