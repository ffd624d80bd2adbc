#include "detwalk/router.hpp"

#include <algorithm>
#include <cmath>

namespace detwalk {

RouterState::RouterState(const TransitionMatrix& P, TieOrder tie)
    : P_(&P), tie_(tie), served_(P.n, 0), counts_(P.n) {
    for (int v = 0; v < P.n; ++v) counts_[v].assign(P.support[v].size(), 0);
}

int RouterState::next(int v) {
    const auto& nbrs = P_->support[v];
    auto& cnt = counts_[v];
    const std::int64_t i = served_[v];

    int best = -1;
    double best_key = 0.0;
    for (std::size_t idx = 0; idx < nbrs.size(); ++idx) {
        const double p = P_->rows(v, nbrs[idx]);
        if (static_cast<double>(cnt[idx]) - static_cast<double>(i + 1) * p >= 0.0)
            continue;  // not in T_i(v)
        const double key = (static_cast<double>(cnt[idx]) + 1.0) / p;
        const bool take =
            best < 0 || key < best_key ||
            (key == best_key && tie_ == TieOrder::Descending);
        // neighbors are scanned in ascending id order, so keeping the first
        // minimizer realizes the ascending tie rule and replacing on equal
        // keys realizes the descending one
        if (take) {
            best = static_cast<int>(idx);
            best_key = key;
        }
    }
    if (best < 0) throw EmptyCandidateSet(v);
    ++cnt[best];
    ++served_[v];
    if (trace) trace(v, i, nbrs[best]);
    return nbrs[best];
}

std::vector<std::pair<int, std::int64_t>> RouterState::serve(
    int v, std::int64_t count) {
    std::vector<std::int64_t> emitted(P_->support[v].size(), 0);
    const auto& nbrs = P_->support[v];
    for (std::int64_t j = 0; j < count; ++j) {
        const int u = next(v);
        const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), u);
        ++emitted[static_cast<std::size_t>(it - nbrs.begin())];
    }
    std::vector<std::pair<int, std::int64_t>> row;
    for (std::size_t idx = 0; idx < nbrs.size(); ++idx)
        if (emitted[idx] > 0) row.emplace_back(nbrs[idx], emitted[idx]);
    return row;
}

double RouterState::audit(int v) const {
    const auto& nbrs = P_->support[v];
    double worst = 0.0;
    for (std::size_t idx = 0; idx < nbrs.size(); ++idx)
        worst = std::max(worst,
                         std::abs(static_cast<double>(counts_[v][idx]) -
                                  static_cast<double>(served_[v]) *
                                      P_->rows(v, nbrs[idx])));
    return worst;
}

double RouterState::audit_max() const {
    double worst = 0.0;
    for (int v = 0; v < P_->n; ++v) worst = std::max(worst, audit(v));
    return worst;
}

std::int64_t RouterState::count(int v, int u) const {
    const auto& nbrs = P_->support[v];
    const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), u);
    if (it == nbrs.end() || *it != u) return 0;
    return counts_[v][static_cast<std::size_t>(it - nbrs.begin())];
}

}  // namespace detwalk
