#include "relparse/gen.hpp"

#include <algorithm>

namespace relparse {

namespace {

// Minimal number of tokens each nonterminal can still produce; huge when the
// nonterminal cannot terminate (callers prune those grammars beforehand).
std::vector<size_t> min_tokens(const Grammar& g) {
    const size_t kInf = 1u << 20;
    std::vector<size_t> m(g.nonterminals.size(), kInf);
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t nt = 0; nt < g.rules.size(); ++nt) {
            for (const auto& alt : g.rules[nt].alternatives) {
                size_t c = 0;
                for (const auto& s : alt.symbols)
                    c += s.is_terminal ? 1 : std::min(kInf, m[s.index]);
                if (c < m[nt]) {
                    m[nt] = c;
                    changed = true;
                }
            }
        }
    }
    return m;
}

} // namespace

std::vector<TokenId> gen_corpus(const Grammar& g, size_t target_tokens, uint64_t seed,
                                size_t depth_bound) {
    std::mt19937_64 rng(seed);
    std::vector<size_t> mintok = min_tokens(g);
    std::vector<TokenId> out;

    struct Item {
        bool terminal;
        int index;
        size_t depth;
    };
    std::vector<Item> work; // processed back-to-front, so push reversed
    work.push_back({false, g.start, 0});

    while (!work.empty()) {
        Item it = work.back();
        work.pop_back();
        if (it.terminal) {
            out.push_back(it.index);
            continue;
        }
        const Rule& rule = g.rules[it.index];
        // choose an alternative: while under target and depth allows, prefer a
        // uniformly random one; otherwise the minimal-length alternative
        size_t pick = 0;
        bool expanding = out.size() < target_tokens && it.depth < depth_bound;
        if (expanding) {
            pick = rng() % rule.alternatives.size();
        } else {
            size_t best = ~size_t(0);
            for (size_t a = 0; a < rule.alternatives.size(); ++a) {
                size_t c = 0;
                for (const auto& s : rule.alternatives[a].symbols)
                    c += s.is_terminal ? 1 : mintok[s.index];
                if (c < best) {
                    best = c;
                    pick = a;
                }
            }
        }
        const Alternative& alt = rule.alternatives[pick];
        for (auto itr = alt.symbols.rbegin(); itr != alt.symbols.rend(); ++itr)
            work.push_back({itr->is_terminal, itr->index, it.depth + 1});
    }
    return out;
}

std::string random_grammar_text(std::mt19937_64& rng, const RandomGrammarParams& p) {
    auto rnd = [&](int lo, int hi) { return lo + static_cast<int>(rng() % (hi - lo + 1)); };
    int nNt = rnd(1, p.max_nonterminals);
    int nT = rnd(1, p.max_terminals);
    std::string text = "start N0;\n";
    for (int nt = 0; nt < nNt; ++nt) {
        text += "N" + std::to_string(nt) + " :";
        int nAlt = rnd(1, p.max_alternatives);
        for (int a = 0; a < nAlt; ++a) {
            if (a) text += " |";
            int nSym = rnd(0, p.max_symbols);
            for (int s = 0; s < nSym; ++s) {
                if (rng() % 2)
                    text += " 't" + std::to_string(rnd(0, nT - 1)) + "'";
                else
                    text += " N" + std::to_string(rnd(0, nNt - 1));
            }
        }
        text += " ;\n";
    }
    return text;
}

} // namespace relparse
