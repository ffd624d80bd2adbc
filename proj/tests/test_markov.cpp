#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "detwalk/builders.hpp"
#include "detwalk/markov.hpp"

using namespace detwalk;

namespace {

Matrix mat2(double a, double b, double c, double d) {
    Matrix M(2, 2);
    M << a, b, c, d;
    return M;
}

}  // namespace

TEST_CASE("validate accepts a doubly stochastic 2x2") {
    auto P = validate(mat2(0.5, 0.5, 0.5, 0.5));
    CHECK(P.n == 2);
    CHECK(P.support[0] == std::vector<int>{0, 1});
    CHECK(P.degree[0] == 2);
}

TEST_CASE("validate rejects bad rows") {
    CHECK_THROWS_AS(validate(mat2(0.6, 0.5, 0.5, 0.5)), NotStochastic);
    CHECK_THROWS_AS(validate(mat2(-0.1, 1.1, 0.5, 0.5)), NegativeEntry);
    try {
        validate(mat2(0.6, 0.5, 0.5, 0.5));
    } catch (const NotStochastic& e) {
        CHECK(e.row == 0);
        CHECK(e.deviation == doctest::Approx(0.1));
    }
}

TEST_CASE("identity matrix validates but is reducible") {
    auto P = validate(mat2(1, 0, 0, 1));
    CHECK_FALSE(check_irreducible(P));
}

TEST_CASE("support is exact: zero entries never appear") {
    auto P = validate(mat2(1, 0, 0.5, 0.5));
    CHECK(P.support[0] == std::vector<int>{0});
    CHECK(P.degree[0] == 1);
}

TEST_CASE("irreducibility") {
    CHECK(check_irreducible(validate(mat2(0, 1, 1, 0))));
    auto G = generate(GraphKind::Path, {.n = 5});
    CHECK(check_irreducible(simple_rw(G)));
}

TEST_CASE("aperiodicity") {
    CHECK_FALSE(check_aperiodic(validate(mat2(0, 1, 1, 0))));
    CHECK(check_aperiodic(validate(mat2(0.5, 0.5, 1.0, 0.0))));
    // triangle: cycle lengths 2 and 3 coexist
    auto K3 = simple_rw(generate(GraphKind::Complete, {.n = 3}));
    CHECK(check_aperiodic(K3));
    CHECK_THROWS_AS(check_aperiodic(validate(mat2(1, 0, 0, 1))),
                    NotIrreducible);
}

TEST_CASE("aperiodicity agrees with brute-force return-time gcd on K3") {
    auto P = simple_rw(generate(GraphKind::Complete, {.n = 3}));
    Matrix Pt = Matrix::Identity(3, 3);
    long g = 0;
    for (int t = 1; t <= 12; ++t) {
        Pt = Pt * P.rows;
        if (Pt(0, 0) > 0) g = std::gcd(g, static_cast<long>(t));
    }
    CHECK(g == 1);
    CHECK(check_aperiodic(P) == (g == 1));
}

TEST_CASE("stationary distribution: symmetric 2x2") {
    auto P = validate(mat2(0.5, 0.5, 0.5, 0.5));
    auto pi = stationary_distribution(P);
    CHECK(pi(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pi(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("stationary distribution: simple RW on a path is deg/2m") {
    auto G = generate(GraphKind::Path, {.n = 3});
    // bipartite, so use the lazy walk; it shares the simple walk's pi
    auto P = lazy_rw(G, 0.5);
    auto pi = stationary_distribution(P);
    CHECK(pi(0) == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(pi(1) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(pi(2) == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("stationary distribution: Metropolis is uniform") {
    for (auto kind : {GraphKind::Star, GraphKind::Path, GraphKind::Complete}) {
        auto G = generate(kind, {.n = 6});
        auto P = metropolis(G);
        auto pi = stationary_distribution(P);
        for (int v = 0; v < 6; ++v)
            CHECK(pi(v) == doctest::Approx(1.0 / 6).epsilon(1e-10));
    }
}

TEST_CASE("stationary solve is a fixed point of evolve") {
    auto G = generate(GraphKind::ER, {.n = 20, .p = 0.3, .seed = 11});
    auto P = lazy_rw(G, 0.25);
    auto pi = stationary_distribution(P);
    CHECK((evolve(pi, P, 1) - pi).lpNorm<1>() <= 1e-10);
    CHECK((evolve(pi, P, 5) - pi).lpNorm<1>() <= 1e-10);
}

TEST_CASE("non-ergodic matrices are rejected by the stationary solver") {
    CHECK_THROWS_AS(stationary_distribution(validate(mat2(1, 0, 0, 1))),
                    NotErgodic);
    CHECK_THROWS_AS(stationary_distribution(validate(mat2(0, 1, 1, 0))),
                    NotErgodic);
}

TEST_CASE("evolve basics") {
    auto P = validate(mat2(0.5, 0.5, 0.5, 0.5));
    Vector e0(2);
    e0 << 1, 0;
    CHECK((evolve(e0, P, 0) - e0).norm() == 0.0);
    CHECK((evolve(e0, P, 1) - P.rows.row(0).transpose()).norm() <= 1e-15);
    Vector mass(2);
    mass << 2, 0;
    Vector out = evolve(mass, P, 1);
    CHECK(out(0) == doctest::Approx(1.0));
    CHECK(out(1) == doctest::Approx(1.0));
}

TEST_CASE("tv distance") {
    Vector a(2), b(2), c(2);
    a << 1, 0;
    b << 0, 1;
    c << 0.75, 0.25;
    CHECK(tv_distance(a, a) == 0.0);
    CHECK(tv_distance(a, b) == doctest::Approx(1.0));
    Vector half(2);
    half << 0.5, 0.5;
    CHECK(tv_distance(half, c) == doctest::Approx(0.25));
    Vector bad(3);
    CHECK_THROWS_AS(tv_distance(a, bad), DimensionMismatch);
}

TEST_CASE("reversibility checks") {
    auto G = generate(GraphKind::ER, {.n = 12, .p = 0.4, .seed = 3});
    auto P = simple_rw(G);
    auto pi = stationary_distribution(lazy_rw(G, 0.5));
    CHECK(check_reversible(P, pi, 1e-10));

    Matrix M(3, 3);
    M << 0, 0.7, 0.3, 0.2, 0, 0.8, 0.5, 0.5, 0;
    auto Q = validate(M);
    auto piQ = stationary_distribution(Q);
    CHECK_FALSE(check_reversible(Q, piQ, 1e-10));

    Matrix one(1, 1);
    one << 1;
    auto P1 = validate(one);
    Vector pi1(1);
    pi1 << 1;
    CHECK(check_reversible(P1, pi1, 1e-10));
}

TEST_CASE("mixing profile on the 2x2 uniform chain") {
    auto P = validate(mat2(0.5, 0.5, 0.5, 0.5));
    auto pi = stationary_distribution(P);
    auto prof = mixing_profile(P, pi, 100);
    CHECK(prof.t_star == 1);
    CHECK(prof.tv_curve[0] == doctest::Approx(0.5));
    CHECK(prof.tv_curve[1] == doctest::Approx(0.0));
}

TEST_CASE("mixing profile matches the (3/4,1/4) closed form") {
    auto P = validate(mat2(0.75, 0.25, 0.25, 0.75));
    auto pi = stationary_distribution(P);
    auto prof = mixing_profile(P, pi, 100);
    // Dtv at t is (1/2)^(t+1) from the second eigenvalue 1/2
    for (std::size_t t = 0; t < prof.tv_curve.size(); ++t)
        CHECK(prof.tv_curve[t] ==
              doctest::Approx(std::pow(0.5, t + 1)).epsilon(1e-10));
    CHECK(prof.t_star == 1);
}

TEST_CASE("mixing profile on K5: t* = 1") {
    auto P = simple_rw(generate(GraphKind::Complete, {.n = 5}));
    auto pi = stationary_distribution(P);
    auto prof = mixing_profile(P, pi, 50);
    CHECK(prof.t_star == 1);
    CHECK(prof.tv_curve[1] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("mixing profile horizon exhaustion is a flag") {
    auto G = generate(GraphKind::Path, {.n = 16});
    auto P = lazy_rw(G, 0.5);
    auto pi = stationary_distribution(P);
    auto prof = mixing_profile(P, pi, 3, {0.25, 1e-6});
    CHECK_FALSE(prof.complete);
    CHECK(prof.tau.at(1e-6) == -1);
}

TEST_CASE("mixing profile invariants on an ergodic reversible chain") {
    auto G = generate(GraphKind::ER, {.n = 14, .p = 0.35, .seed = 5});
    auto P = lazy_rw(G, 0.3);
    auto pi = stationary_distribution(P);
    REQUIRE(check_reversible(P, pi, 1e-10));
    auto prof = mixing_profile(P, pi, 2000, {0.25, 0.05});
    REQUIRE(prof.complete);
    const long ts = prof.t_star;

    SUBCASE("tv curve is nonincreasing") {
        for (std::size_t t = 1; t < prof.tv_curve.size(); ++t)
            CHECK(prof.tv_curve[t] <= prof.tv_curve[t - 1] + 1e-12);
    }
    SUBCASE("d_bar(t*) <= 1/2") {
        CHECK(prof.d_bar_curve[static_cast<std::size_t>(ts)] <=
              0.5 + 1e-9);
    }
    SUBCASE("Lemma 4.4: s(2t) <= 1 - (1 - d_bar(t))^2") {
        for (std::size_t t = 0; 2 * t < prof.separation_curve.size(); ++t) {
            const double db = prof.d_bar_curve[t];
            CHECK(prof.separation_curve[2 * t] <=
                  1.0 - (1.0 - db) * (1.0 - db) + 1e-9);
        }
    }
    SUBCASE("separation submultiplicativity probe") {
        const auto& s = prof.separation_curve;
        for (std::size_t t = 1; t < s.size(); t += 2)
            for (std::size_t tp = 1; t + tp < s.size(); tp += 3)
                CHECK(s[t + tp] <= s[t] * s[tp] + 1e-9);
    }
    SUBCASE("Lemma 4.3: P^t >= pi/4 for t >= 2t*") {
        for (std::size_t t = static_cast<std::size_t>(2 * ts);
             t < prof.separation_curve.size(); ++t)
            CHECK(prof.separation_curve[t] <= 0.75 + 1e-9);
    }
    SUBCASE("Lemma 3.4 at gamma = 1/4: partial tv sums <= 3t*") {
        double acc = 0.0;
        for (double tv : prof.tv_curve) {
            acc += tv;
            CHECK(acc <= 3.0 * static_cast<double>(ts) + 1e-6);
        }
    }
}
