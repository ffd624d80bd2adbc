#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "detwalk/router.hpp"

using namespace detwalk;

namespace {

// Independent brute force of the greedy low-discrepancy rule: counts are
// recomputed from the emitted history on every step, never incremented.
std::vector<int> oracle_sequence(const std::vector<double>& probs, int steps,
                                 bool descending_ties = false) {
    std::vector<int> seq;
    for (int i = 0; i < steps; ++i) {
        int best = -1;
        double best_key = 0.0;
        for (std::size_t u = 0; u < probs.size(); ++u) {
            const double c = static_cast<double>(
                std::count(seq.begin(), seq.end(), static_cast<int>(u)));
            if (c - (i + 1.0) * probs[u] >= 0.0) continue;
            const double key = (c + 1.0) / probs[u];
            if (best < 0 || key < best_key ||
                (key == best_key && descending_ties)) {
                best = static_cast<int>(u);
                best_key = key;
            }
        }
        REQUIRE(best >= 0);
        seq.push_back(best);
    }
    return seq;
}

TransitionMatrix row_matrix(const std::vector<double>& probs) {
    const int n = static_cast<int>(probs.size());
    Matrix M(n, n);
    for (int v = 0; v < n; ++v)
        for (int u = 0; u < n; ++u) M(v, u) = probs[u];
    return validate(M);
}

std::vector<double> random_row(std::mt19937_64& rng, int degree,
                               bool irrational) {
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    std::vector<double> row(degree);
    double sum = 0.0;
    for (auto& p : row) {
        p = irrational ? std::sqrt(unif(rng)) : unif(rng);
        sum += p;
    }
    for (auto& p : row) p /= sum;
    return row;
}

}  // namespace

TEST_CASE("uniform two-neighbor row alternates") {
    auto P = row_matrix({0.5, 0.5});
    RouterState r(P);
    for (int i = 0; i < 20; ++i) CHECK(r.next(0) == i % 2);
}

TEST_CASE("(2/3, 1/3) row emits a,a,b,a,a,b") {
    auto P = row_matrix({2.0 / 3.0, 1.0 / 3.0});
    RouterState r(P);
    const std::vector<int> expected{0, 0, 1, 0, 0, 1};
    for (int want : expected) CHECK(r.next(0) == want);
    // cross-check against the brute-force oracle
    auto seq = oracle_sequence({2.0 / 3.0, 1.0 / 3.0}, 6);
    CHECK(seq == expected);
}

TEST_CASE("uniform rows reduce to ascending round robin") {
    for (int degree = 2; degree <= 16; ++degree) {
        std::vector<double> probs(degree, 1.0 / degree);
        auto P = row_matrix(probs);
        RouterState r(P);
        for (int period = 0; period < 100; ++period)
            for (int u = 0; u < degree; ++u) CHECK(r.next(0) == u);
    }
}

TEST_CASE("router matches oracle on fuzzed rows") {
    std::mt19937_64 rng(20240817);
    for (int trial = 0; trial < 40; ++trial) {
        const int degree = 2 + static_cast<int>(rng() % 7);
        auto probs = random_row(rng, degree, trial % 2 == 1);
        auto P = row_matrix(probs);
        RouterState r(P);
        auto seq = oracle_sequence(probs, 200);
        for (int want : seq) CHECK(r.next(0) == want);
    }
}

TEST_CASE("Prop 2.1 discrepancy stays below 1 on fuzzed rows") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const int degree = 2 + static_cast<int>(rng() % 15);
        auto probs = random_row(rng, degree, trial % 3 == 0);
        auto P = row_matrix(probs);
        RouterState r(P);
        for (int z = 1; z <= 10000; ++z) {
            r.next(0);
            CHECK(r.audit(0) < 1.0 + 1e-9);
        }
    }
}

TEST_CASE("serve aggregates emissions and conserves count") {
    auto P = row_matrix({0.5, 0.5});
    RouterState r(P);

    SUBCASE("count zero leaves state unchanged") {
        auto row = r.serve(0, 0);
        CHECK(row.empty());
        CHECK(r.served_total(0) == 0);
    }
    SUBCASE("four tokens split evenly") {
        auto row = r.serve(0, 4);
        REQUIRE(row.size() == 2);
        CHECK(row[0] == std::pair<int, std::int64_t>{0, 2});
        CHECK(row[1] == std::pair<int, std::int64_t>{1, 2});
    }
}

TEST_CASE("serve prefix of the (2/3,1/3) trace") {
    auto P = row_matrix({2.0 / 3.0, 1.0 / 3.0});
    RouterState r(P);
    auto row = r.serve(0, 3);
    REQUIRE(row.size() == 2);
    CHECK(row[0].second == 2);
    CHECK(row[1].second == 1);
    CHECK(r.audit(0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("audit of a fresh state is zero") {
    auto P = row_matrix({0.25, 0.75});
    RouterState r(P);
    CHECK(r.audit(0) == 0.0);
    CHECK(r.audit_max() == 0.0);
}

TEST_CASE("determinism: identical call sequences emit identically") {
    std::mt19937_64 rng(99);
    auto probs = random_row(rng, 6, true);
    auto P = row_matrix(probs);
    RouterState a(P), b(P);
    for (int i = 0; i < 5000; ++i) CHECK(a.next(0) == b.next(0));
}

TEST_CASE("descending tie order still satisfies Prop 2.1") {
    auto probs = std::vector<double>{0.25, 0.25, 0.25, 0.25};
    auto P = row_matrix(probs);
    RouterState r(P, TieOrder::Descending);
    // reversed round robin
    for (int period = 0; period < 10; ++period)
        for (int u = 3; u >= 0; --u) CHECK(r.next(0) == u);
    CHECK(r.audit(0) < 1.0 + 1e-9);

    std::mt19937_64 rng(4);
    auto irr = random_row(rng, 5, true);
    auto Q = row_matrix(irr);
    RouterState rd(Q, TieOrder::Descending);
    for (int z = 1; z <= 20000; ++z) {
        rd.next(0);
        CHECK(rd.audit(0) < 1.0 + 1e-9);
    }
    // and matches the tie-reversed oracle
    RouterState rd2(Q, TieOrder::Descending);
    for (int want : oracle_sequence(irr, 300, true)) CHECK(rd2.next(0) == want);
}

TEST_CASE("per-vertex counts reachable through count()") {
    auto P = row_matrix({2.0 / 3.0, 1.0 / 3.0});
    RouterState r(P);
    r.serve(0, 6);
    CHECK(r.count(0, 0) == 4);
    CHECK(r.count(0, 1) == 2);
    CHECK(r.served_total(0) == 6);
}
