#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "detwalk/errors.hpp"

namespace detwalk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Module-level tolerances. Overridable, defaults chosen so double
/// precision never produces false failures on entries >= 1e-8.
struct Tolerances {
    double row_sum = 1e-12;
    double stationary_residual = 1e-10;
    double distribution_sum = 1e-10;
    double reversibility = 1e-10;
    double subnormal = 1e-15;
};

/// Row-stochastic matrix with its support structure. Entries are exact
/// zeros or positives; u is in N(v) iff P(v,u) > 0, no thresholding.
struct TransitionMatrix {
    int n = 0;
    Matrix rows;
    std::vector<std::vector<int>> support;  // N(v), ascending vertex id
    std::vector<int> degree;                // delta(v) = |N(v)|
    std::vector<std::string> warnings;      // e.g. SubnormalEntry

    double operator()(int u, int v) const { return rows(u, v); }
};

TransitionMatrix validate(const Matrix& raw, const Tolerances& tol = {});

bool check_irreducible(const TransitionMatrix& P);

/// Period-1 test via the BFS-level gcd over support edges.
/// Throws NotIrreducible if P is not irreducible.
bool check_aperiodic(const TransitionMatrix& P);

bool check_ergodic(const TransitionMatrix& P);

/// Unique fixed point pi P = pi. Dense linear solve for n <= 4096,
/// power iteration beyond that.
Vector stationary_distribution(const TransitionMatrix& P,
                               const Tolerances& tol = {});

/// xi P^t by t successive vector-matrix products.
Vector evolve(const Vector& xi, const TransitionMatrix& P, long t);

/// (1/2) * ||xi - zeta||_1
double tv_distance(const Vector& xi, const Vector& zeta);

bool check_reversible(const TransitionMatrix& P, const Vector& pi,
                      double tol = 1e-10);

struct MixingProfile {
    std::vector<double> tv_curve;          // max_u Dtv(P^t_{u,.}, pi), t = 0..
    std::vector<double> d_bar_curve;       // max_{u,v} Dtv(P^t_{u,.}, P^t_{v,.})
    std::vector<double> separation_curve;  // s(t) = max_{u,v}(1 - P^t_{u,v}/pi_v)
    std::map<double, long> tau;            // eps -> tau(eps); -1 if unreached
    long t_star = -1;                      // tau(1/4)
    bool complete = true;                  // false iff some tau hit t_max
};

/// Maintains all n rows of P^t by repeated multiplication. Runs until every
/// requested epsilon is crossed (the curves extend a little past 2*t_star so
/// the separation-floor quantities are available), capped at t_max. An
/// unreached threshold is reported via tau = -1 and complete = false, with
/// the partial profile returned.
MixingProfile mixing_profile(const TransitionMatrix& P, const Vector& pi,
                             long t_max,
                             const std::vector<double>& eps_list = {0.25});

}  // namespace detwalk
