// closures.hpp - automata for null-closed atomic closures, with wrap lists
#pragma once

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "relparse/primitives.hpp"

namespace relparse {

using LamId = int32_t;
using AtomicId = int32_t;

constexpr LamId kLamEmpty = 0; // the empty relation (zero)
constexpr LamId kLamUnit = 1;  // coefficient list [(one, one)]

constexpr AtomicId kNoAtomic = -1;

// The automaton family witnessing regularity of the closures N(C(s)):
// Init(s) plus Reach(s,t) for every t that can top a configuration reachable
// from s without shifts. Labels split off by derivatives are represented by
// wrap-coefficient lists [(L_i, R_i)] with wrap(D, lam) = sum_i L_i * D * R_i.
template <class S>
class ClosureTable {
public:
    using Value = typename S::Value;
    using Pair = std::pair<Value, Value>;

    struct Atomic {
        StateId owner;       // s of N(C(s))
        StateId reach;       // t of Reach(s,t); kNoState for Init(s)
        LamId accept;        // atomic_epsilon; kLamEmpty for Init states
        std::vector<StateId> keys;                             // derive keys, sorted
        std::vector<std::vector<std::pair<LamId, AtomicId>>> pairs; // parallel to keys
    };

    ClosureTable() = default;

    const S& semiring() const { return prims_->sr; }
    const PrimitiveTable<S>& prims() const { return *prims_; }

    AtomicId init_id(StateId s) const { return init_[s]; }
    AtomicId reach_id(StateId s, StateId t) const { return reach_[s * n_ + t]; }
    const Atomic& atomic(AtomicId a) const { return atomics_[a]; }
    size_t atomic_count() const { return atomics_.size(); }
    size_t family_size(StateId s) const { return family_size_[s]; }

    LamId atomic_epsilon(AtomicId a) const { return atomics_[a].accept; }

    // derive(a, u): the (label, target) pairs of the derivative by u; empty
    // span when u is not a key.
    const std::vector<std::pair<LamId, AtomicId>>* derive(AtomicId a, StateId u) const {
        const Atomic& at = atomics_[a];
        auto it = std::lower_bound(at.keys.begin(), at.keys.end(), u);
        if (it == at.keys.end() || *it != u) return nullptr;
        return &at.pairs[it - at.keys.begin()];
    }
    const std::vector<StateId>& derive_keys(AtomicId a) const { return atomics_[a].keys; }

    const std::vector<Pair>& lam_pairs(LamId l) const { return lams_[l]; }
    size_t lam_count() const { return lams_.size(); }

    // wrap(D, lam) = sum_i L_i * D * R_i, addition in list order.
    Value wrap(const Value& delta, LamId l) const {
        const S& sr = prims_->sr;
        const auto& ps = lams_[l];
        if (ps.empty()) return sr.zero();
        Value acc = sr.mul(ps[0].first, sr.mul(delta, ps[0].second));
        for (size_t i = 1; i < ps.size(); ++i)
            acc = sr.add(acc, sr.mul(ps[i].first, sr.mul(delta, ps[i].second)));
        return acc;
    }

    // sum_i L_i * R_i; for commutative semirings wrap(D, lam) = D * scalar.
    const Value& lam_scalar(LamId l) const { return lam_scalar_[l]; }

    std::string atomic_tag(AtomicId a) const {
        const Atomic& at = atomics_[a];
        const Rtn& rtn = *prims_->rtn;
        if (at.reach == kNoState) return "I(" + rtn.state_names[at.owner] + ")";
        return "R(" + rtn.state_names[at.owner] + "," + rtn.state_names[at.reach] + ")";
    }

    template <class T>
    friend ClosureTable<T> build_closure_table(const Rtn&, const StateAnalysis&,
                                               const PrimitiveTable<T>&);

    // Table assembly (used by the builder and the tables-file loader).
    struct Assembly;

private:
    const PrimitiveTable<S>* prims_ = nullptr;
    size_t n_ = 0;
    std::vector<AtomicId> init_;
    std::vector<AtomicId> reach_;
    std::vector<Atomic> atomics_;
    std::vector<std::vector<Pair>> lams_;
    std::vector<Value> lam_scalar_;
    std::vector<size_t> family_size_;

    void finish_scalars() {
        const S& sr = prims_->sr;
        lam_scalar_.clear();
        lam_scalar_.reserve(lams_.size());
        for (const auto& ps : lams_) {
            Value acc = sr.zero();
            for (const auto& p : ps) acc = sr.add(acc, sr.mul(p.first, p.second));
            lam_scalar_.push_back(acc);
        }
    }

    template <class T>
    friend struct ClosureTableAccess;
};

// Loader back-door: tables_io reconstructs the private arrays directly.
template <class S>
struct ClosureTableAccess {
    static void assemble(ClosureTable<S>& ct, const PrimitiveTable<S>* prims, size_t n,
                         std::vector<AtomicId> init, std::vector<AtomicId> reach,
                         std::vector<typename ClosureTable<S>::Atomic> atomics,
                         std::vector<std::vector<typename ClosureTable<S>::Pair>> lams) {
        ct.prims_ = prims;
        ct.n_ = n;
        ct.init_ = std::move(init);
        ct.reach_ = std::move(reach);
        ct.atomics_ = std::move(atomics);
        ct.lams_ = std::move(lams);
        ct.family_size_.assign(n, 0);
        for (const auto& a : ct.atomics_) ++ct.family_size_[a.owner];
        ct.finish_scalars();
    }
    static const std::vector<std::vector<typename ClosureTable<S>::Pair>>&
    lams(const ClosureTable<S>& ct) {
        return ct.lams_;
    }
};

namespace detail {

// Builder for the wrap-coefficient lists of the rewritten label equations.
template <class S>
class LamSolver {
public:
    using Value = typename S::Value;
    using Pair = std::pair<Value, Value>;

    LamSolver(const Rtn& rtn, const StateAnalysis& an, const PrimitiveTable<S>& pt,
              std::vector<std::vector<Pair>>& lams, bool cyclic)
        : rtn_(rtn), an_(an), pt_(pt), lams_(lams), cyclic_(cyclic) {
        if (cyclic_) solve_scalars();
    }

    // Candidate reach targets t' of a derivative by u: sources of calls whose
    // continuation is u.
    std::vector<StateId> targets_of(StateId u) const {
        std::vector<StateId> out;
        for (TransId d : pt_.calls_by_continuation[u]) {
            StateId src = rtn_.transitions[d].source;
            if (std::find(out.begin(), out.end(), src) == out.end()) out.push_back(src);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // Lam id for the call-split label of (u, t, t'); kLamEmpty when empty.
    LamId call_split(StateId u, StateId t, StateId tp) {
        uint64_t key = pack(u, t, tp);
        auto it = memo_.find(key);
        if (it != memo_.end()) {
            if (it->second == kInProgress)
                throw Error("internal: label recursion cycle in Finite grammar");
            return it->second;
        }
        if (cyclic_) {
            const size_t n = rtn_.state_count();
            const Value& f = scalar_[(u * n + t) * n + tp];
            LamId l = pt_.sr.is_zero(f) ? kLamEmpty : intern({{pt_.sr.one(), f}});
            memo_[key] = l;
            return l;
        }
        memo_[key] = kInProgress;
        std::vector<Pair> list;
        Value base = pt_.call_value(u, t, tp);
        if (!pt_.sr.is_zero(base)) list.emplace_back(pt_.sr.one(), base);
        const std::vector<StateId> trs = reach_targets(u, tp);
        for (StateId ur : pt_.skip_candidates) {
            for (StateId trv : trs) {
                Value coeff = pt_.call_value(u, trv, tp);
                if (pt_.sr.is_zero(coeff)) continue;
                LamId inner = call_split(ur, t, trv);
                if (inner == kLamEmpty) continue;
                for (const Pair& p : lams_[inner])
                    list.emplace_back(pt_.sr.mul(pt_.vnull[ur], p.first),
                                      pt_.sr.mul(p.second, coeff));
            }
        }
        LamId l = list.empty() ? kLamEmpty : intern(merge(std::move(list)));
        memo_[key] = l;
        return l;
    }

    // Distinct reach states of the callees of calls from tp with continuation u.
    std::vector<StateId> reach_targets(StateId u, StateId tp) const {
        std::vector<StateId> trs;
        for (TransId d : pt_.calls_by_continuation[u]) {
            const Transition& c = rtn_.transitions[d];
            if (c.source != tp) continue;
            for (StateId treach : pt_.reach_list[c.callee])
                if (std::find(trs.begin(), trs.end(), treach) == trs.end())
                    trs.push_back(treach);
        }
        std::sort(trs.begin(), trs.end());
        return trs;
    }

    // Lam id for the accept label of Reach(s, t).
    LamId accept(StateId s, StateId t) {
        std::vector<Pair> list;
        const Value& base = pt_.reach_of(s, t);
        if (!pt_.sr.is_zero(base)) list.emplace_back(pt_.sr.one(), base);
        for (StateId ur : pt_.skip_candidates) {
            for (StateId trv : pt_.reach_list[s]) {
                LamId inner = call_split(ur, t, trv);
                if (inner == kLamEmpty) continue;
                const Value& coeff = pt_.reach_of(s, trv);
                for (const Pair& p : lams_[inner])
                    list.emplace_back(pt_.sr.mul(pt_.vnull[ur], p.first),
                                      pt_.sr.mul(p.second, coeff));
            }
        }
        return list.empty() ? kLamEmpty : intern(merge(std::move(list)));
    }

private:
    static constexpr LamId kInProgress = -2;

    uint64_t pack(StateId a, StateId b, StateId c) const {
        const uint64_t n = rtn_.state_count();
        return (static_cast<uint64_t>(a) * n + b) * n + c;
    }

    LamId intern(std::vector<Pair> list) {
        lams_.push_back(std::move(list));
        return static_cast<LamId>(lams_.size() - 1);
    }

    // Merge terms with equal left coefficient, then equal right coefficient;
    // stable, so the elaboration order stays deterministic.
    std::vector<Pair> merge(std::vector<Pair> in) {
        const S& sr = pt_.sr;
        std::vector<Pair> out;
        for (auto& p : in) {
            bool merged = false;
            for (auto& q : out) {
                if (sr.equal(q.first, p.first)) {
                    q.second = sr.add(q.second, p.second);
                    merged = true;
                    break;
                }
            }
            if (!merged) out.push_back(std::move(p));
        }
        std::vector<Pair> out2;
        for (auto& p : out) {
            bool merged = false;
            for (auto& q : out2) {
                if (sr.equal(q.second, p.second)) {
                    q.first = sr.add(q.first, p.first);
                    merged = true;
                    break;
                }
            }
            if (!merged) out2.push_back(std::move(p));
        }
        return out2;
    }

    // Cyclic path: commutative scalar system solved by fixpoint iteration.
    void solve_scalars() {
        const size_t n = rtn_.state_count();
        const S& sr = pt_.sr;
        scalar_.assign(n * n * n, sr.zero());

        struct Slot { StateId u, tp; std::vector<StateId> trs; };
        std::vector<Slot> slots;
        for (size_t u = 0; u < n; ++u)
            for (StateId tp : targets_of(static_cast<StateId>(u)))
                slots.push_back({static_cast<StateId>(u), tp,
                                 reach_targets(static_cast<StateId>(u), tp)});

        bool changed = true;
        while (changed) {
            changed = false;
            for (const Slot& sl : slots) {
                for (size_t t = 0; t < n; ++t) {
                    Value acc = pt_.call_value(sl.u, static_cast<StateId>(t), sl.tp);
                    for (StateId ur : pt_.skip_candidates) {
                        for (StateId trv : sl.trs) {
                            Value coeff = pt_.call_value(sl.u, trv, sl.tp);
                            if (sr.is_zero(coeff)) continue;
                            const Value& inner = scalar_[(ur * n + t) * n + trv];
                            if (sr.is_zero(inner)) continue;
                            acc = sr.add(acc, sr.mul(pt_.vnull[ur], sr.mul(inner, coeff)));
                        }
                    }
                    Value& slot = scalar_[(sl.u * n + t) * n + sl.tp];
                    if (!sr.equal(acc, slot)) {
                        slot = acc;
                        changed = true;
                    }
                }
            }
        }
    }

    const Rtn& rtn_;
    const StateAnalysis& an_;
    const PrimitiveTable<S>& pt_;
    std::vector<std::vector<Pair>>& lams_;
    bool cyclic_;
    std::unordered_map<uint64_t, LamId> memo_;
    std::vector<Value> scalar_;
};

} // namespace detail

template <class S>
ClosureTable<S> build_closure_table(const Rtn& rtn, const StateAnalysis& analysis,
                                    const PrimitiveTable<S>& prims) {
    ClosureTable<S> ct;
    ct.prims_ = &prims;
    const size_t n = rtn.state_count();
    ct.n_ = n;
    ct.init_.assign(n, kNoAtomic);
    ct.reach_.assign(n * n, kNoAtomic);
    ct.family_size_.assign(n, 0);

    const S& sr = prims.sr;
    ct.lams_.clear();
    ct.lams_.push_back({});                       // kLamEmpty
    ct.lams_.push_back({{sr.one(), sr.one()}});   // kLamUnit

    StructureTables st = compute_structure(rtn, analysis.nullable);

    std::vector<char> build_for = analysis.reachable;
    build_for[rtn.start] = 1;
    build_for[rtn.stop] = 1;

    const bool cyclic = analysis.ambiguity_class == AmbiguityClass::RegularInfinite;
    detail::LamSolver<S> solver(rtn, analysis, prims, ct.lams_, cyclic);

    // Allocate atomic states.
    for (size_t s = 0; s < n; ++s) {
        if (!build_for[s]) continue;
        ct.init_[s] = static_cast<AtomicId>(ct.atomics_.size());
        ct.atomics_.push_back({static_cast<StateId>(s), kNoState, kLamEmpty, {}, {}});
        for (size_t t = 0; t < n; ++t) {
            if (!st.top_at(static_cast<StateId>(s), static_cast<StateId>(t))) continue;
            ct.reach_[s * n + t] = static_cast<AtomicId>(ct.atomics_.size());
            ct.atomics_.push_back({static_cast<StateId>(s), static_cast<StateId>(t),
                                   kLamEmpty, {}, {}});
        }
    }

    // Derive tables and accept labels.
    for (AtomicId a = 0; a < static_cast<AtomicId>(ct.atomics_.size()); ++a) {
        auto& at = ct.atomics_[a];
        if (at.reach == kNoState) {
            // Init(s): non-guided derivative to Reach(s,u), non-accepting.
            for (size_t u = 0; u < n; ++u) {
                AtomicId target = ct.reach_[at.owner * n + u];
                if (target == kNoAtomic) continue;
                at.keys.push_back(static_cast<StateId>(u));
                at.pairs.push_back({{kLamUnit, target}});
            }
        } else {
            at.accept = solver.accept(at.owner, at.reach);
            // derive by u: pairs (call_split(u, t, t'), Reach(s, t'))
            for (size_t u = 0; u < n; ++u) {
                std::vector<std::pair<LamId, AtomicId>> pairs;
                for (StateId tp : solver.targets_of(static_cast<StateId>(u))) {
                    AtomicId target = ct.reach_[at.owner * n + tp];
                    if (target == kNoAtomic) continue;
                    LamId l = solver.call_split(static_cast<StateId>(u), at.reach, tp);
                    if (l == kLamEmpty) continue;
                    pairs.emplace_back(l, target);
                }
                if (!pairs.empty()) {
                    at.keys.push_back(static_cast<StateId>(u));
                    at.pairs.push_back(std::move(pairs));
                }
            }
        }
        ++ct.family_size_[at.owner];
    }

    ct.finish_scalars();
    return ct;
}

} // namespace relparse
