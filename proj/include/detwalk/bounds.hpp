#pragma once

#include "detwalk/markov.hpp"

namespace detwalk::bounds {

/// m' = max_u delta(u)/pi_u, over the support degree (self-loops count).
inline double m_prime(const TransitionMatrix& P, const Vector& pi) {
    double worst = 0.0;
    for (int u = 0; u < P.n; ++u)
        worst = std::max(worst, P.degree[u] / pi(u));
    return worst;
}

/// Per-vertex cap on |X_w^(T) - M_w^(T)|: 3 pi_w t* m'.
inline double visit_bound(double pi_w, double t_star, double m_prime) {
    return 3.0 * pi_w * t_star * m_prime;
}

/// Cap on |pi_w - X_w^(T)/(kT)|: 3t*/(2T) + 3 pi_w t* m'/(kT).
inline double frequency_bound(double t_star, double T, double pi_w,
                              double m_prime, double k) {
    return 3.0 * t_star / (2.0 * T) +
           3.0 * pi_w * t_star * m_prime / (k * T);
}

/// Horizon after which |pi_w - X_w^(T)/(kT)| <= eps, in the Delta/pi_min
/// packaging: T >= 3(1/2 + pi_w Delta/(pi_min k)) t* / eps.
inline double frequency_threshold(double t_star, double pi_w, double delta_max,
                                  double pi_min, double k, double eps) {
    return 3.0 * (0.5 + pi_w * delta_max / (pi_min * k)) * t_star / eps;
}

/// Constant K with |pi_w - X_w^(T)/(kT)| <= K pi_w / T.
inline double frequency_constant(double t_star, double pi_w, double m_prime,
                                 double k) {
    return 3.0 * t_star / (2.0 * pi_w) + 3.0 * t_star * m_prime / k;
}

/// Cover-time cap: 2t* + 1 + 12 m' t* / k.
inline double cover_bound(double t_star, double m_prime, double k) {
    return 2.0 * t_star + 1.0 + 12.0 * m_prime * t_star / k;
}

/// Rotor-router (simple random walk) specialization: 2t* + 1 + 24 m t* / k.
inline double rotor_cover_bound(double t_star, double m, double k) {
    return 2.0 * t_star + 1.0 + 24.0 * m * t_star / k;
}

/// Cap on sum_{t<T} Dtv(P^t_{v,.}, pi): (1-gamma)/(1-2gamma) * tau(gamma).
inline double tv_sum_bound(double tau_gamma, double gamma) {
    if (gamma <= 0.0 || gamma >= 0.5)
        throw BadGamma("gamma must lie in (0, 1/2)");
    return (1.0 - gamma) / (1.0 - 2.0 * gamma) * tau_gamma;
}

/// min_{u,w} P^t_{u,w}/pi_w >= 1/4 at t >= 2t*.
inline bool separation_floor_check(const TransitionMatrix& P, const Vector& pi,
                                   long t_star, long t) {
    if (t < 2 * t_star)
        throw PreconditionViolated("separation floor needs t >= 2t*");
    Matrix Pt = Matrix::Identity(P.n, P.n);
    for (long s = 0; s < t; ++s) Pt = Pt * P.rows;
    double ratio = std::numeric_limits<double>::infinity();
    for (int u = 0; u < P.n; ++u)
        for (int w = 0; w < P.n; ++w)
            ratio = std::min(ratio, Pt(u, w) / pi(w));
    return ratio >= 0.25 - 1e-9;
}

}  // namespace detwalk::bounds
