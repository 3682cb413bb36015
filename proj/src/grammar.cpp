#include "relparse/grammar.hpp"

#include <map>

namespace relparse {

int Grammar::terminal_index(const std::string& name) const {
    for (size_t i = 0; i < terminals.size(); ++i)
        if (terminals[i] == name) return static_cast<int>(i);
    return -1;
}

int Grammar::nonterminal_index(const std::string& name) const {
    for (size_t i = 0; i < nonterminals.size(); ++i)
        if (nonterminals[i] == name) return static_cast<int>(i);
    return -1;
}

size_t Grammar::alternative_count() const {
    size_t n = 0;
    for (const auto& r : rules) n += r.alternatives.size();
    return n;
}

size_t Grammar::symbol_count() const {
    size_t n = 0;
    for (const auto& r : rules)
        for (const auto& a : r.alternatives) n += a.symbols.size();
    return n;
}

namespace {

struct Token {
    enum Kind { Name, Terminal, Colon, Pipe, Semi, End } kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        skip_ws();
        int line = line_, col = col_;
        if (pos_ >= s_.size()) return {Token::End, "", line, col};
        char c = s_[pos_];
        if (c == ':') { advance(); return {Token::Colon, ":", line, col}; }
        if (c == '|') { advance(); return {Token::Pipe, "|", line, col}; }
        if (c == ';') { advance(); return {Token::Semi, ";", line, col}; }
        if (c == '\'') {
            advance();
            std::string t;
            while (pos_ < s_.size() && s_[pos_] != '\'' && s_[pos_] != '\n') {
                t += s_[pos_];
                advance();
            }
            if (pos_ >= s_.size() || s_[pos_] != '\'')
                throw GrammarError("unterminated terminal literal", line, col);
            advance();
            if (t.empty()) throw GrammarError("empty terminal literal", line, col);
            return {Token::Terminal, t, line, col};
        }
        if (is_name_char(c)) {
            std::string t;
            while (pos_ < s_.size() && is_name_char(s_[pos_])) {
                t += s_[pos_];
                advance();
            }
            return {Token::Name, t, line, col};
        }
        throw GrammarError(std::string("unexpected character '") + c + "'", line, col);
    }

private:
    static bool is_name_char(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
               (c >= '0' && c <= '9') || c == '_';
    }
    void advance() {
        if (s_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
        ++pos_;
    }
    void skip_ws() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') advance();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else {
                break;
            }
        }
    }
    const std::string& s_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

struct RawAlt {
    // (is_terminal, name, line, col) per symbol
    struct Sym { bool term; std::string name; int line, col; };
    std::vector<Sym> syms;
};

} // namespace

Grammar parse_grammar(const std::string& text) {
    Lexer lx(text);
    Token t = lx.next();

    if (t.kind != Token::Name || t.text != "start")
        throw GrammarError("expected 'start <Name>;' declaration", t.line, t.col);
    Token startTok = lx.next();
    if (startTok.kind != Token::Name)
        throw GrammarError("expected start symbol name", startTok.line, startTok.col);
    t = lx.next();
    if (t.kind != Token::Semi)
        throw GrammarError("expected ';' after start declaration", t.line, t.col);

    std::vector<std::string> ntNames;
    std::vector<std::vector<RawAlt>> ntAlts;
    std::map<std::string, int> ntIndex;

    t = lx.next();
    while (t.kind != Token::End) {
        if (t.kind != Token::Name)
            throw GrammarError("expected nonterminal name", t.line, t.col);
        if (ntIndex.count(t.text))
            throw GrammarError("duplicate definition of nonterminal " + t.text, t.line, t.col);
        ntIndex[t.text] = static_cast<int>(ntNames.size());
        ntNames.push_back(t.text);
        ntAlts.emplace_back();
        auto& alts = ntAlts.back();

        Token colon = lx.next();
        if (colon.kind != Token::Colon)
            throw GrammarError("expected ':' after nonterminal name", colon.line, colon.col);

        RawAlt cur;
        for (;;) {
            Token s = lx.next();
            if (s.kind == Token::Name) {
                cur.syms.push_back({false, s.text, s.line, s.col});
            } else if (s.kind == Token::Terminal) {
                cur.syms.push_back({true, s.text, s.line, s.col});
            } else if (s.kind == Token::Pipe) {
                alts.push_back(std::move(cur));
                cur = RawAlt();
            } else if (s.kind == Token::Semi) {
                alts.push_back(std::move(cur));
                break;
            } else {
                throw GrammarError("unexpected end of rule", s.line, s.col);
            }
        }
        t = lx.next();
    }

    if (!ntIndex.count(startTok.text))
        throw GrammarError("undeclared start symbol " + startTok.text,
                           startTok.line, startTok.col);

    Grammar g;
    g.nonterminals = ntNames;
    g.start = ntIndex[startTok.text];
    std::map<std::string, int> termIndex;

    g.rules.resize(ntNames.size());
    for (size_t i = 0; i < ntNames.size(); ++i) {
        int altNo = 0;
        for (const auto& raw : ntAlts[i]) {
            Alternative alt;
            alt.label = ntNames[i] + "." + std::to_string(++altNo);
            for (const auto& sym : raw.syms) {
                GrammarSymbol gs;
                if (sym.term) {
                    auto it = termIndex.find(sym.name);
                    if (it == termIndex.end()) {
                        termIndex[sym.name] = static_cast<int>(g.terminals.size());
                        g.terminals.push_back(sym.name);
                        it = termIndex.find(sym.name);
                    }
                    gs.is_terminal = true;
                    gs.index = it->second;
                } else {
                    auto it = ntIndex.find(sym.name);
                    if (it == ntIndex.end())
                        throw GrammarError("undeclared symbol " + sym.name, sym.line, sym.col);
                    gs.is_terminal = false;
                    gs.index = it->second;
                }
                alt.symbols.push_back(gs);
            }
            g.rules[i].alternatives.push_back(std::move(alt));
        }
    }
    return g;
}

} // namespace relparse
