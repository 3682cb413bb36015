// tables_io.hpp - versioned text serialization of generated parser tables
#pragma once

#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <variant>

#include "relparse/engine.hpp"

namespace relparse {

namespace io {
std::string esc(const std::string& s);
std::string unesc(const std::string& s);

// Space-free value encodings per semiring.
inline std::string write_value(const BoolSemiring&, char v) { return v ? "1" : "0"; }
inline std::string write_value(const CountSemiring&, const BigNat& v) {
    return v.to_decimal();
}
std::string write_value(const ForestSemiring& sr, ForestSemiring::Value v);
inline std::string write_value(const FirstSemiring&, const FirstSemiring::Value& v) {
    if (v.tag == 0) return "0";
    if (v.tag == 2) return "a";
    std::string s = "s";
    for (TransId d : v.seq) s += ":" + std::to_string(d);
    return s;
}
inline std::string write_value(const PrioritySemiring&, const PrioritySemiring::Value& v) {
    if (!v.some) return "-";
    std::string s = "p";
    for (TransId d : v.seq) s += ":" + std::to_string(d);
    return s;
}

inline void read_value(const BoolSemiring&, const std::string& s, char& v) { v = s == "1"; }
inline void read_value(const CountSemiring&, const std::string& s, BigNat& v) {
    v = BigNat::from_decimal(s);
}
void read_value(const ForestSemiring& sr, const std::string& s, ForestSemiring::Value& v);
inline void read_value(const FirstSemiring&, const std::string& s,
                       FirstSemiring::Value& v) {
    if (s == "0") { v = {}; return; }
    if (s == "a") { v = FirstSemiring::ambig(); return; }
    v.tag = 1;
    v.seq.clear();
    for (size_t i = 1; i < s.size();) {
        size_t j = s.find(':', i + 1);
        if (j == std::string::npos) j = s.size();
        v.seq.push_back(std::stoi(s.substr(i + 1, j - i - 1)));
        i = j;
    }
}
inline void read_value(const PrioritySemiring&, const std::string& s,
                       PrioritySemiring::Value& v) {
    if (s == "-") { v = {}; return; }
    v.some = true;
    v.seq.clear();
    for (size_t i = 1; i < s.size();) {
        size_t j = s.find(':', i + 1);
        if (j == std::string::npos) j = s.size();
        v.seq.push_back(std::stoi(s.substr(i + 1, j - i - 1)));
        i = j;
    }
}
} // namespace io

template <class S>
void save_tables(const ParserTables<S>& T, std::ostream& os,
                 const std::vector<std::string>& priority_labels = {}) {
    const S& sr = T.prims.sr;
    os << "relparse-tables 1\n";
    os << "semiring " << to_string(S::kKind) << "\n";
    os << "priority-labels " << priority_labels.size() << "\n";
    for (const auto& l : priority_labels) os << io::esc(l) << "\n";

    const Rtn& r = T.rtn;
    os << "states " << r.state_count() << " " << r.start << " " << r.stop << "\n";
    for (const auto& nm : r.state_names) os << io::esc(nm) << "\n";
    os << "terminals " << r.terminals.size() << "\n";
    for (const auto& t : r.terminals) os << io::esc(t) << "\n";
    os << "labels " << r.labels.size() << "\n";
    for (const auto& l : r.labels) os << io::esc(l) << "\n";
    os << "transitions " << r.transitions.size() << "\n";
    for (const Transition& t : r.transitions) {
        switch (t.kind) {
        case TransKind::Shift:
            os << "S " << t.source << " " << t.terminal << " " << t.continuation << "\n";
            break;
        case TransKind::Call:
            os << "C " << t.source << " " << t.callee << " " << t.continuation << "\n";
            break;
        case TransKind::Reduce:
            os << "R " << t.source << " " << t.label << "\n";
            break;
        }
    }
    os << "class " << to_string(T.analysis.ambiguity_class) << "\n";
    auto bits = [&](const std::vector<char>& v) {
        std::string s;
        for (char c : v) s += c ? '1' : '0';
        return s;
    };
    os << "nullable " << bits(T.analysis.nullable) << "\n";
    os << "reachable " << bits(T.analysis.reachable) << "\n";

    os << "trans-values " << T.prims.trans_val.size() << "\n";
    for (const auto& v : T.prims.trans_val) os << io::write_value(sr, v) << "\n";
    os << "vnull " << T.prims.vnull.size() << "\n";
    for (const auto& v : T.prims.vnull) os << io::write_value(sr, v) << "\n";
    size_t nz = 0;
    for (const auto& v : T.prims.vreach)
        if (!sr.is_zero(v)) ++nz;
    os << "vreach " << nz << "\n";
    for (size_t i = 0; i < T.prims.vreach.size(); ++i)
        if (!sr.is_zero(T.prims.vreach[i]))
            os << i << " " << io::write_value(sr, T.prims.vreach[i]) << "\n";

    const auto& lams = ClosureTableAccess<S>::lams(T.closures);
    os << "lams " << lams.size() << "\n";
    for (const auto& ps : lams) {
        os << ps.size();
        for (const auto& p : ps)
            os << " " << io::write_value(sr, p.first) << " "
               << io::write_value(sr, p.second);
        os << "\n";
    }
    os << "atomics " << T.closures.atomic_count() << "\n";
    for (size_t a = 0; a < T.closures.atomic_count(); ++a) {
        const auto& at = T.closures.atomic(static_cast<AtomicId>(a));
        os << at.owner << " " << at.reach << " " << at.accept << " " << at.keys.size();
        for (size_t k = 0; k < at.keys.size(); ++k) {
            os << " " << at.keys[k] << " " << at.pairs[k].size();
            for (const auto& pr : at.pairs[k]) os << " " << pr.first << " " << pr.second;
        }
        os << "\n";
    }
    os << "end\n";
}

using AnyTables = std::variant<std::unique_ptr<ParserTables<BoolSemiring>>,
                               std::unique_ptr<ParserTables<CountSemiring>>,
                               std::unique_ptr<ParserTables<ForestSemiring>>,
                               std::unique_ptr<ParserTables<FirstSemiring>>,
                               std::unique_ptr<ParserTables<PrioritySemiring>>>;

AnyTables load_tables(std::istream& is);

namespace io {

// Shared loader body, templated over the semiring. The fixup hook runs once
// the RTN is available, before any semiring additions happen (the priority
// ranks need it).
template <class S, class Fix>
std::unique_ptr<ParserTables<S>> load_body(std::istream& is, S sr, Fix fixup) {
    auto expect = [&](const std::string& word) {
        std::string w;
        is >> w;
        if (w != word) throw Error("tables file: expected '" + word + "', got '" + w + "'");
    };
    auto T = std::make_unique<ParserTables<S>>();
    Rtn& r = T->rtn;
    size_t n;
    expect("states");
    is >> n >> r.start >> r.stop;
    r.state_names.resize(n);
    for (auto& nm : r.state_names) {
        is >> nm;
        nm = unesc(nm);
    }
    size_t k;
    expect("terminals");
    is >> k;
    r.terminals.resize(k);
    for (auto& t : r.terminals) {
        is >> t;
        t = unesc(t);
    }
    expect("labels");
    is >> k;
    r.labels.resize(k);
    for (auto& l : r.labels) {
        is >> l;
        l = unesc(l);
    }
    expect("transitions");
    is >> k;
    r.transitions.resize(k);
    for (auto& t : r.transitions) {
        std::string kind;
        is >> kind;
        if (kind == "S") {
            t.kind = TransKind::Shift;
            is >> t.source >> t.terminal >> t.continuation;
        } else if (kind == "C") {
            t.kind = TransKind::Call;
            is >> t.source >> t.callee >> t.continuation;
        } else if (kind == "R") {
            t.kind = TransKind::Reduce;
            is >> t.source >> t.label;
        } else {
            throw Error("tables file: bad transition kind " + kind);
        }
    }
    r.freeze();
    fixup(r, sr);

    expect("class");
    std::string cls;
    is >> cls;
    StateAnalysis& an = T->analysis;
    if (cls == "Finite") an.ambiguity_class = AmbiguityClass::Finite;
    else if (cls == "RegularInfinite") an.ambiguity_class = AmbiguityClass::RegularInfinite;
    else an.ambiguity_class = AmbiguityClass::NonregularInfinite;
    auto read_bits = [&](std::vector<char>& v) {
        std::string s;
        is >> s;
        v.assign(s.size(), 0);
        for (size_t i = 0; i < s.size(); ++i) v[i] = s[i] == '1';
    };
    expect("nullable");
    read_bits(an.nullable);
    expect("reachable");
    read_bits(an.reachable);
    an.productive.assign(n, 1);

    PrimitiveTable<S>& pt = T->prims;
    pt.sr = sr;
    pt.rtn = &T->rtn;
    pt.n = n;
    std::string raw;
    expect("trans-values");
    is >> k;
    pt.trans_val.resize(k);
    for (auto& v : pt.trans_val) {
        is >> raw;
        read_value(sr, raw, v);
    }
    expect("vnull");
    is >> k;
    pt.vnull.resize(k);
    for (auto& v : pt.vnull) {
        is >> raw;
        read_value(sr, raw, v);
    }
    expect("vreach");
    is >> k;
    pt.vreach.assign(n * n, sr.zero());
    for (size_t i = 0; i < k; ++i) {
        size_t idx;
        is >> idx >> raw;
        read_value(sr, raw, pt.vreach[idx]);
    }
    pt.reach_list.assign(n, {});
    for (size_t s = 0; s < n; ++s)
        for (size_t t = 0; t < n; ++t)
            if (!sr.is_zero(pt.vreach[s * n + t]))
                pt.reach_list[s].push_back(static_cast<StateId>(t));
    for (size_t s = 0; s < n; ++s)
        if ((an.reachable[s] || s == static_cast<size_t>(r.start) ||
             s == static_cast<size_t>(r.stop)) &&
            an.nullable[s])
            pt.skip_candidates.push_back(static_cast<StateId>(s));

    expect("lams");
    is >> k;
    std::vector<std::vector<typename ClosureTable<S>::Pair>> lams(k);
    for (auto& ps : lams) {
        size_t np;
        is >> np;
        ps.resize(np);
        for (auto& p : ps) {
            is >> raw;
            read_value(sr, raw, p.first);
            is >> raw;
            read_value(sr, raw, p.second);
        }
    }
    expect("atomics");
    is >> k;
    std::vector<typename ClosureTable<S>::Atomic> atomics(k);
    std::vector<AtomicId> init(n, kNoAtomic);
    std::vector<AtomicId> reach(n * n, kNoAtomic);
    for (size_t a = 0; a < k; ++a) {
        auto& at = atomics[a];
        size_t nkeys;
        is >> at.owner >> at.reach >> at.accept >> nkeys;
        at.keys.resize(nkeys);
        at.pairs.resize(nkeys);
        for (size_t i = 0; i < nkeys; ++i) {
            size_t np;
            is >> at.keys[i] >> np;
            at.pairs[i].resize(np);
            for (auto& pr : at.pairs[i]) is >> pr.first >> pr.second;
        }
        if (at.reach == kNoState)
            init[at.owner] = static_cast<AtomicId>(a);
        else
            reach[at.owner * n + at.reach] = static_cast<AtomicId>(a);
    }
    expect("end");
    ClosureTableAccess<S>::assemble(T->closures, &T->prims, n, std::move(init),
                                    std::move(reach), std::move(atomics), std::move(lams));
    T->build_shift_index();
    return T;
}

} // namespace io

} // namespace relparse
