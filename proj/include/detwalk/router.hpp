#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "detwalk/markov.hpp"

namespace detwalk {

enum class TieOrder { Ascending, Descending };

/// Per-vertex SRT-router: the greedy low-discrepancy sequence over N(v),
/// generated incrementally in serve order. Prefix counts over each row track
/// the transition probabilities within discrepancy 1 at every prefix.
///
/// Selection is exact double arithmetic with no tolerance injected; a linear
/// scan over N(v) per emission. Counts are 64-bit; callers guard the 2^53
/// horizon.
class RouterState {
public:
    explicit RouterState(const TransitionMatrix& P,
                         TieOrder tie = TieOrder::Ascending);
    // the matrix must outlive the router
    explicit RouterState(TransitionMatrix&&, TieOrder = TieOrder::Ascending) =
        delete;

    /// Emits sigma_v(X_v): the candidate u in T_i(v) minimizing
    /// (count+1)/P(v,u), ties by prescribed vertex-id order. Increments
    /// the counts. Throws EmptyCandidateSet on floating-point pathology
    /// (impossible in exact arithmetic).
    int next(int v);

    /// Emits `count` tokens from v; returns per-destination totals as
    /// (vertex, tokens) pairs in ascending vertex order.
    std::vector<std::pair<int, std::int64_t>> serve(int v, std::int64_t count);

    /// max_u |c_{v,u} - X_v * P(v,u)| — the Prop.-2.1 discrepancy at the
    /// current prefix.
    double audit(int v) const;
    double audit_max() const;

    std::int64_t served_total(int v) const { return served_[v]; }
    /// Count of emissions v -> u so far; u must be in N(v).
    std::int64_t count(int v, int u) const;

    const TransitionMatrix& matrix() const { return *P_; }
    TieOrder tie_order() const { return tie_; }

    /// Debug sink, invoked as trace(v, i, u) for sigma_v(i) = u.
    std::function<void(int, std::int64_t, int)> trace;

private:
    const TransitionMatrix* P_;
    TieOrder tie_;
    std::vector<std::int64_t> served_;                 // X_v
    std::vector<std::vector<std::int64_t>> counts_;    // per support index
};

}  // namespace detwalk
