#include "detwalk/walk.hpp"

#include <algorithm>
#include <cmath>

namespace detwalk {

namespace {
constexpr double kCounterGuard = 9007199254740992.0;  // 2^53
}

Walk::Walk(const TransitionMatrix& P, const VectorI& mu0, WalkOptions opts)
    : P_(&P), opts_(opts), router_(P, opts.tie) {
    if (mu0.size() != P.n)
        throw DimensionMismatch("token placement size != n");
    if ((mu0.array() < 0).any())
        throw BadParams("token placement has a negative entry");
    k_ = mu0.sum();
    if (k_ < 1) throw NoTokens();

    chi_ = mu0;
    visits_ = VectorI::Zero(P.n);
    mu_ = mu0.cast<double>();
    M_ = Vector::Zero(P.n);
    max_visit_gap_ = Vector::Zero(P.n);
    first_visit_.assign(P.n, -1);
    for (int v = 0; v < P.n; ++v)
        if (chi_(v) > 0) first_visit_[v] = 0;

    ergodic_ = check_ergodic(P);
    if (ergodic_)
        reversible_ = check_reversible(P, stationary_distribution(P));
}

void Walk::step() {
    if (static_cast<double>(k_) * static_cast<double>(t_ + 1) >= kCounterGuard)
        throw HorizonOverflow("k*T would exceed the 2^53 counter guard");

    visits_ += chi_;
    M_ += mu_;

    VectorI next = VectorI::Zero(P_->n);
    for (int i = 0; i < P_->n; ++i) {
        const int v = opts_.serve_descending ? P_->n - 1 - i : i;
        if (chi_(v) == 0) continue;
        for (const auto& [u, c] : router_.serve(v, chi_(v))) next(u) += c;
    }

    // phi^(t)_u = sum_{v in N(u)} (Z_{v,u} - chi_v P_{v,u})
    //           = chi_u^(t+1) - (chi^(t) P)_u
    if (opts_.retain_history)
        phi_history_.push_back(next.cast<double>() -
                               P_->rows.transpose() * chi_.cast<double>());
    mu_ = P_->rows.transpose() * mu_;
    chi_ = next;
    ++t_;

    for (int v = 0; v < P_->n; ++v)
        if (first_visit_[v] < 0 && chi_(v) > 0) first_visit_[v] = t_;

    if (opts_.track_max_visit_gap)
        max_visit_gap_ = max_visit_gap_.cwiseMax(
            (visits_.cast<double>() - M_).cwiseAbs());
    if (opts_.track_flow_discrepancy)
        max_flow_disc_ = std::max(max_flow_disc_, router_.audit_max());
}

void Walk::run(long steps) {
    if (steps < 0) throw BadParams("run: negative step count");
    for (long s = 0; s < steps; ++s) step();
}

bool Walk::covered() const {
    return std::all_of(first_visit_.begin(), first_visit_.end(),
                       [](long t) { return t >= 0; });
}

Vector Walk::visit_discrepancy() const {
    return (visits_.cast<double>() - M_).cwiseAbs();
}

Vector Walk::frequency_error(const Vector& pi) const {
    if (t_ < 1) throw BadParams("frequency_error requires T >= 1");
    const double kT = static_cast<double>(k_) * static_cast<double>(t_);
    return (pi - visits_.cast<double>() / kT).cwiseAbs();
}

const std::vector<Vector>& Walk::phi_history() const {
    if (!opts_.retain_history) throw HistoryNotRetained();
    return phi_history_;
}

CoverTimeReport cover_time(Walk& W, long t_max) {
    if (t_max < 1) throw BadParams("cover_time: t_max must be >= 1");
    while (!W.covered() && W.time() < t_max) W.step();
    CoverTimeReport rep;
    rep.covered = W.covered();
    rep.horizon = t_max;
    rep.first_visit = W.first_visit();
    rep.k = W.tokens();
    if (rep.covered)
        rep.t_cover =
            *std::max_element(rep.first_visit.begin(), rep.first_visit.end()) +
            1;
    return rep;
}

double identity_residual_step(const Walk& W, const Vector& pi) {
    const auto& phis = W.phi_history();
    const long T = W.time();
    if (T < 1) return 0.0;
    const Matrix& P = W.matrix().rows;
    Vector rhs = Vector::Zero(pi.size());
    Matrix Ps = Matrix::Identity(pi.size(), pi.size());
    for (long s = 0; s < T; ++s) {
        const Vector& phi = phis[static_cast<std::size_t>(T - 1 - s)];
        rhs += Ps.transpose() * phi - pi * phi.sum();
        if (s + 1 < T) Ps = Ps * P;
    }
    const Vector lhs = W.chi().cast<double>() - W.mu();
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

double identity_residual_cumulative(const Walk& W, const Vector& pi) {
    const auto& phis = W.phi_history();
    const long T = W.time();
    const Vector lhs = W.visits().cast<double>() - W.expected_visits();
    if (T < 2) return lhs.cwiseAbs().maxCoeff();
    const Matrix& P = W.matrix().rows;

    std::vector<Vector> prefix(phis.size());  // Phi^(s) = sum_{t'<=s} phi^(t')
    Vector acc = Vector::Zero(pi.size());
    for (std::size_t s = 0; s < phis.size(); ++s) {
        acc += phis[s];
        prefix[s] = acc;
    }

    Vector rhs = Vector::Zero(pi.size());
    Matrix Pt = Matrix::Identity(pi.size(), pi.size());
    for (long t = 0; t <= T - 2; ++t) {
        const Vector& Phi = prefix[static_cast<std::size_t>(T - t - 2)];
        rhs += Pt.transpose() * Phi - pi * Phi.sum();
        if (t + 1 <= T - 2) Pt = Pt * P;
    }
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace detwalk
