#include "detwalk/markov.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace detwalk {

TransitionMatrix validate(const Matrix& raw, const Tolerances& tol) {
    if (raw.rows() != raw.cols() || raw.rows() == 0)
        throw BadParams("transition matrix must be square and nonempty");
    if (!raw.allFinite())
        throw BadParams("transition matrix contains non-finite entries");

    const int n = static_cast<int>(raw.rows());
    TransitionMatrix P;
    P.n = n;
    P.rows = raw;
    P.support.resize(n);
    P.degree.resize(n);

    for (int v = 0; v < n; ++v) {
        double sum = 0.0;
        for (int u = 0; u < n; ++u) {
            const double p = raw(v, u);
            if (p < 0.0) throw NegativeEntry(v, u);
            if (p > 0.0) {
                P.support[v].push_back(u);
                if (p < tol.subnormal)
                    P.warnings.push_back("SubnormalEntry at (" +
                                         std::to_string(v) + "," +
                                         std::to_string(u) + ")");
            }
            sum += p;
        }
        const double dev = std::abs(sum - 1.0);
        if (dev > tol.row_sum) throw NotStochastic(v, dev);
        P.degree[v] = static_cast<int>(P.support[v].size());
        // row sums to 1 within tolerance, so degree >= 1 always holds here
    }
    return P;
}

namespace {

// BFS over the support digraph; returns reached flags.
std::vector<char> reach(const std::vector<std::vector<int>>& adj, int src) {
    std::vector<char> seen(adj.size(), 0);
    std::deque<int> q{src};
    seen[src] = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int u : adj[v])
            if (!seen[u]) {
                seen[u] = 1;
                q.push_back(u);
            }
    }
    return seen;
}

}  // namespace

bool check_irreducible(const TransitionMatrix& P) {
    auto fwd = reach(P.support, 0);
    if (std::find(fwd.begin(), fwd.end(), 0) != fwd.end()) return false;
    std::vector<std::vector<int>> rev(P.n);
    for (int v = 0; v < P.n; ++v)
        for (int u : P.support[v]) rev[u].push_back(v);
    auto bwd = reach(rev, 0);
    return std::find(bwd.begin(), bwd.end(), 0) == bwd.end();
}

bool check_aperiodic(const TransitionMatrix& P) {
    if (!check_irreducible(P)) throw NotIrreducible();
    // BFS levels from vertex 0; period = gcd over support edges (u -> v)
    // of level(u) + 1 - level(v).
    std::vector<long> level(P.n, -1);
    std::deque<int> q{0};
    level[0] = 0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int u : P.support[v])
            if (level[u] < 0) {
                level[u] = level[v] + 1;
                q.push_back(u);
            }
    }
    long g = 0;
    for (int v = 0; v < P.n; ++v)
        for (int u : P.support[v])
            g = std::gcd(g, std::abs(level[v] + 1 - level[u]));
    return g == 1;
}

bool check_ergodic(const TransitionMatrix& P) {
    return check_irreducible(P) && check_aperiodic(P);
}

Vector stationary_distribution(const TransitionMatrix& P,
                               const Tolerances& tol) {
    if (!check_ergodic(P)) throw NotErgodic("matrix is not ergodic");

    const int n = P.n;
    Vector pi(n);
    if (n <= 4096) {
        // (P^T - I) x = 0 with the last equation replaced by sum x = 1.
        Matrix A = P.rows.transpose() - Matrix::Identity(n, n);
        A.row(n - 1).setOnes();
        Vector b = Vector::Zero(n);
        b(n - 1) = 1.0;
        pi = A.partialPivLu().solve(b);
    } else {
        pi = Vector::Constant(n, 1.0 / n);
        for (long it = 0; it < 1000000; ++it) {
            Vector next = P.rows.transpose() * pi;
            if ((next - pi).lpNorm<1>() <= 1e-12) {
                pi = next;
                break;
            }
            pi = next;
        }
    }
    pi /= pi.sum();
    const double residual = (P.rows.transpose() * pi - pi).lpNorm<1>();
    if (residual > tol.stationary_residual || pi.minCoeff() <= 0.0)
        throw SolverFailure(residual);
    return pi;
}

Vector evolve(const Vector& xi, const TransitionMatrix& P, long t) {
    if (xi.size() != P.n) throw DimensionMismatch("evolve: size mismatch");
    Vector v = xi;
    for (long s = 0; s < t; ++s) v = P.rows.transpose() * v;
    return v;
}

double tv_distance(const Vector& xi, const Vector& zeta) {
    if (xi.size() != zeta.size())
        throw DimensionMismatch("tv_distance: size mismatch");
    return 0.5 * (xi - zeta).lpNorm<1>();
}

bool check_reversible(const TransitionMatrix& P, const Vector& pi,
                      double tol) {
    Matrix flow = pi.asDiagonal() * P.rows;
    return (flow - flow.transpose()).cwiseAbs().maxCoeff() <= tol;
}

namespace {

double max_row_tv(const Matrix& Pt, const Vector& pi) {
    double worst = 0.0;
    for (int u = 0; u < Pt.rows(); ++u)
        worst = std::max(worst, 0.5 * (Pt.row(u).transpose() - pi).lpNorm<1>());
    return worst;
}

double d_bar(const Matrix& Pt) {
    double worst = 0.0;
    for (int u = 0; u < Pt.rows(); ++u)
        for (int v = u + 1; v < Pt.rows(); ++v)
            worst = std::max(
                worst, 0.5 * (Pt.row(u) - Pt.row(v)).lpNorm<1>());
    return worst;
}

double separation(const Matrix& Pt, const Vector& pi) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int u = 0; u < Pt.rows(); ++u)
        for (int v = 0; v < Pt.cols(); ++v)
            worst = std::max(worst, 1.0 - Pt(u, v) / pi(v));
    return worst;
}

}  // namespace

MixingProfile mixing_profile(const TransitionMatrix& P, const Vector& pi,
                             long t_max,
                             const std::vector<double>& eps_list) {
    if (t_max < 1) throw BadParams("mixing_profile: t_max must be >= 1");
    MixingProfile prof;
    for (double eps : eps_list) prof.tau[eps] = -1;
    prof.tau[0.25] = -1;

    Matrix Pt = Matrix::Identity(P.n, P.n);
    long tail = -1;  // record until 2*t_star + 3 once t_star is known
    for (long t = 0; t <= t_max; ++t) {
        const double tv = max_row_tv(Pt, pi);
        prof.tv_curve.push_back(tv);
        prof.d_bar_curve.push_back(d_bar(Pt));
        prof.separation_curve.push_back(separation(Pt, pi));
        for (auto& [eps, tau] : prof.tau)
            if (tau < 0 && tv <= eps) tau = t;
        if (prof.t_star < 0 && prof.tau[0.25] >= 0) {
            prof.t_star = prof.tau[0.25];
            tail = 2 * prof.t_star + 3;
        }
        const bool all_crossed = std::all_of(
            prof.tau.begin(), prof.tau.end(),
            [](const auto& kv) { return kv.second >= 0; });
        if (all_crossed && t >= tail && tail >= 0) break;
        if (t < t_max) Pt = Pt * P.rows;
    }
    prof.complete = std::all_of(prof.tau.begin(), prof.tau.end(),
                                [](const auto& kv) { return kv.second >= 0; });
    return prof;
}

}  // namespace detwalk
