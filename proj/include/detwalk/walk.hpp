#pragma once

#include <cstdint>
#include <vector>

#include "detwalk/markov.hpp"
#include "detwalk/router.hpp"

namespace detwalk {

using VectorI = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

struct WalkOptions {
    TieOrder tie = TieOrder::Ascending;
    /// Running per-vertex max of |X - M| across all prefixes (cheap).
    bool track_max_visit_gap = true;
    /// Running max over support pairs of the cumulative flow discrepancy
    /// |sum_t (Z - chi P)|, evaluated after every step via the router's
    /// cumulative counts.
    bool track_flow_discrepancy = true;
    /// Retain per-step inflow imbalances phi^(t) for the exact-identity
    /// audits; O(T n) memory.
    bool retain_history = false;
    /// Serve vertices in descending id within a step (equivalence probe;
    /// router states are per-vertex so the result must not change).
    bool serve_descending = false;
};

/// k-token deterministic walk (chi, Z, X) run in lockstep with the expected
/// random-walk process (mu, M).
class Walk {
public:
    Walk(const TransitionMatrix& P, const VectorI& mu0, WalkOptions opts = {});
    // the matrix must outlive the walk
    Walk(TransitionMatrix&&, const VectorI&, WalkOptions = {}) = delete;

    void step();
    void run(long steps);

    long time() const { return t_; }
    std::int64_t tokens() const { return k_; }
    const VectorI& chi() const { return chi_; }
    const VectorI& visits() const { return visits_; }  // X^(t)
    const Vector& mu() const { return mu_; }
    const Vector& expected_visits() const { return M_; }  // M^(t)
    const std::vector<long>& first_visit() const { return first_visit_; }
    bool covered() const;

    /// Per-vertex |X_w^(T) - M_w^(T)| at the current time.
    Vector visit_discrepancy() const;
    /// Per-vertex |pi_w - X_w^(T)/(kT)|; requires T >= 1.
    Vector frequency_error(const Vector& pi) const;

    double max_flow_discrepancy() const { return max_flow_disc_; }
    const Vector& max_visit_gap() const { return max_visit_gap_; }
    const std::vector<Vector>& phi_history() const;

    RouterState& router() { return router_; }
    const RouterState& router() const { return router_; }
    const TransitionMatrix& matrix() const { return *P_; }

    bool ergodic_checked() const { return ergodic_; }
    bool reversible_checked() const { return reversible_; }

private:
    const TransitionMatrix* P_;
    WalkOptions opts_;
    RouterState router_;
    VectorI chi_, visits_;
    Vector mu_, M_;
    std::vector<long> first_visit_;  // -1 while unvisited
    std::vector<Vector> phi_history_;
    std::int64_t k_ = 0;
    long t_ = 0;
    double max_flow_disc_ = 0.0;
    Vector max_visit_gap_;
    bool ergodic_ = false, reversible_ = false;
};

struct CoverTimeReport {
    bool covered = false;
    long t_cover = -1;  // minimal T with X_v^(T) >= 1 for all v
    long horizon = 0;
    std::vector<long> first_visit;
    std::int64_t k = 0;
};

/// Steps W until every vertex has been visited or t_max is reached.
CoverTimeReport cover_time(Walk& W, long t_max);

/// Max over w of the residual of the exact identity
///   chi_w^(T) - mu_w^(T) = sum_t sum_u phi_u^(t) (P^(T-t-1)_{u,w} - pi_w).
/// Requires retain_history.
double identity_residual_step(const Walk& W, const Vector& pi);

/// Reindexed cumulative variant:
///   X_w^(T) - M_w^(T) = sum_{t<=T-2} sum_u Phi_u^(T-t-2) (P^t_{u,w} - pi_w)
/// with Phi the prefix sums of phi. Requires retain_history.
double identity_residual_cumulative(const Walk& W, const Vector& pi);

}  // namespace detwalk
