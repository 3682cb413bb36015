#include "relparse/tables_io.hpp"

namespace relparse {
namespace io {

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == ' ' || c == '%' || c == '\n' || c == '\t') {
            char buf[4];
            std::snprintf(buf, sizeof buf, "%%%02x", static_cast<unsigned char>(c));
            out += buf;
        } else {
            out += c;
        }
    }
    return out.empty() ? "%00" : out;
}

std::string unesc(const std::string& s) {
    if (s == "%00") return "";
    std::string out;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size()) {
            out += static_cast<char>(std::stoi(s.substr(i + 1, 2), nullptr, 16));
            i += 2;
        } else {
            out += s[i];
        }
    }
    return out;
}

std::string write_value(const ForestSemiring& sr, ForestSemiring::Value v) {
    const auto& n = sr.arena->node(v);
    switch (n.kind) {
    case ForestArena::Kind::Empty: return "E";
    case ForestArena::Kind::Eps: return "e";
    case ForestArena::Kind::Leaf: return "d" + std::to_string(n.trans);
    case ForestArena::Kind::Cat:
        return "(c" + write_value(sr, n.a) + write_value(sr, n.b) + ")";
    case ForestArena::Kind::Alt:
        return "(a" + write_value(sr, n.a) + write_value(sr, n.b) + ")";
    }
    return "E";
}

namespace {
ForestSemiring::Value parse_forest(const ForestSemiring& sr, const std::string& s,
                                   size_t& i) {
    if (s[i] == 'E') { ++i; return sr.arena->empty(); }
    if (s[i] == 'e') { ++i; return sr.arena->eps(); }
    if (s[i] == 'd') {
        size_t j = ++i;
        while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])))) ++j;
        TransId d = std::stoi(s.substr(i, j - i));
        i = j;
        return sr.arena->leaf(d);
    }
    // "(c...)" or "(a...)"
    char op = s[i + 1];
    i += 2;
    auto a = parse_forest(sr, s, i);
    auto b = parse_forest(sr, s, i);
    ++i; // ')'
    return op == 'c' ? sr.arena->cat(a, b) : sr.arena->alt(a, b);
}
} // namespace

void read_value(const ForestSemiring& sr, const std::string& s, ForestSemiring::Value& v) {
    size_t i = 0;
    v = parse_forest(sr, s, i);
}

} // namespace io

AnyTables load_tables(std::istream& is) {
    std::string word, version;
    is >> word >> version;
    if (word != "relparse-tables" || version != "1")
        throw Error("unrecognized tables file header");
    std::string kindWord, kind;
    is >> kindWord >> kind;
    if (kindWord != "semiring") throw Error("tables file: missing semiring");
    size_t np;
    is >> word >> np; // priority-labels
    std::vector<std::string> plabels(np);
    for (auto& l : plabels) {
        is >> l;
        l = io::unesc(l);
    }

    auto nofix = [](const Rtn&, auto&) {};
    if (kind == "bool") return io::load_body(is, BoolSemiring{}, nofix);
    if (kind == "count") return io::load_body(is, CountSemiring{}, nofix);
    if (kind == "forest") return io::load_body(is, ForestSemiring{}, nofix);
    if (kind == "first") return io::load_body(is, FirstSemiring{}, nofix);
    if (kind == "priority") {
        return io::load_body(is, PrioritySemiring{},
                             [&](const Rtn& r, PrioritySemiring& s) {
                                 s.rank = priority_ranks(r, plabels);
                             });
    }
    throw Error("tables file: unknown semiring kind " + kind);
}

} // namespace relparse
