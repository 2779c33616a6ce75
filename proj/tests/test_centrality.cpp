#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polydyn/centrality.hpp"
#include "polydyn/dynamics.hpp"
#include "polydyn/types.hpp"

#include "helpers.hpp"

using namespace polydyn;
using test::mat;
using test::vec;

TEST_CASE("net influence is the column mean") {
    const Vector r =
        net_influence(mat({{2.0 / 3, 1.0 / 3}, {1.0 / 3, 2.0 / 3}}));
    CHECK(r(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("net influence of the identity is uniform") {
    const Vector r = net_influence(Matrix::Identity(4, 4));
    for (int i = 0; i < 4; ++i)
        CHECK(r(i) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("net influence of a consensus limit is its common row") {
    Matrix v(3, 3);
    v.row(0) = vec({0.2, 0.5, 0.3}).transpose();
    v.row(1) = v.row(0);
    v.row(2) = v.row(0);
    const Vector r = net_influence(v);
    CHECK((r - vec({0.2, 0.5, 0.3})).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("net influence rejects a non-stochastic matrix") {
    CHECK_THROWS_AS(net_influence(mat({{0.5, 0.4}, {1, 0}})),
                    std::invalid_argument);
}

TEST_CASE("alpha centrality on the symmetric 2-cycle") {
    const auto w = InfluenceMatrix::from_matrix(mat({{0, 1}, {1, 0}}));
    const Vector r = alpha_centrality(w, 0.5);
    CHECK(r(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r(1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(alpha_centrality(w, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(alpha_centrality(w, 1.0), std::invalid_argument);
}

TEST_CASE("doubly stochastic structures have uniform centrality") {
    const auto w = InfluenceMatrix::from_matrix(
        mat({{0.5, 0.25, 0.25}, {0.25, 0.5, 0.25}, {0.25, 0.25, 0.5}}));
    for (double alpha : {0.2, 0.5, 0.9}) {
        const Vector r = alpha_centrality(w, alpha);
        for (int i = 0; i < 3; ++i)
            CHECK(r(i) == doctest::Approx(1.0 / 3).epsilon(1e-10));
    }
    const Vector p = perron_centrality(w);
    for (int i = 0; i < 3; ++i)
        CHECK(p(i) == doctest::Approx(1.0 / 3).epsilon(1e-10));
}

TEST_CASE("alpha centrality equals the net influence of the matched limit") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const auto sys = test::random_system(seed, 10, 1);
        const double alpha = 0.5;
        const Vector direct = alpha_centrality(sys.w, alpha);
        const auto limit = closed_form_limit(
            sys.w, DampingMatrix::uniform(sys.w.size(), alpha), sys.x0);
        const Vector via_limit = net_influence(*limit.v);
        CHECK((direct - via_limit).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("perron centrality solves the left eigenproblem by hand") {
    const auto w = InfluenceMatrix::from_matrix(mat({{0.5, 0.5}, {1, 0}}));
    const Vector r = perron_centrality(w);
    CHECK(r(0) == doctest::Approx(2.0 / 3).epsilon(1e-10));
    CHECK(r(1) == doctest::Approx(1.0 / 3).epsilon(1e-10));
}

TEST_CASE("perron centrality matches the iterated averaging limit") {
    for (std::uint64_t seed = 20; seed <= 30; ++seed) {
        const auto sys = test::random_system(seed, 10, 1);
        const Vector pi = perron_centrality(sys.w);
        Matrix pow = sys.w.matrix();
        for (int it = 0; it < 14; ++it) pow = pow * pow;  // W^(2^14)
        const Vector via_power = net_influence(pow);
        CHECK((pi - via_power).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("perron centrality refuses non-strong or periodic structures") {
    CHECK_THROWS_AS(
        perron_centrality(InfluenceMatrix::from_matrix(mat({{0, 1}, {1, 0}}))),
        std::invalid_argument);
    CHECK_THROWS_AS(perron_centrality(InfluenceMatrix::from_matrix(
                        mat({{1, 0}, {0.5, 0.5}}))),
                    std::invalid_argument);
}

TEST_CASE("centrality vectors always sum to one") {
    for (std::uint64_t seed = 40; seed <= 60; ++seed) {
        const auto sys = test::random_system(seed, 15, 1);
        SplitMix64 rng(seed);
        const double alpha = rng.next_uniform(0.05, 0.95);
        CHECK(std::abs(alpha_centrality(sys.w, alpha).sum() - 1.0) < 1e-10);
        CHECK(std::abs(perron_centrality(sys.w).sum() - 1.0) < 1e-10);
        const auto limit = closed_form_limit(sys.w, sys.a, sys.x0);
        CHECK(std::abs(net_influence(*limit.v).sum() - 1.0) < 1e-10);
    }
}

TEST_CASE("alpha centrality satisfies its fixed point") {
    for (std::uint64_t seed = 70; seed <= 85; ++seed) {
        const auto sys = test::random_system(seed, 12, 1);
        SplitMix64 rng(seed);
        const double alpha = rng.next_uniform(0.05, 0.95);
        const Vector r = alpha_centrality(sys.w, alpha);
        const Eigen::Index n = sys.w.size();
        const Vector residual =
            r - Vector::Constant(n, (1.0 - alpha) / static_cast<double>(n)) -
            alpha * sys.w.matrix().transpose() * r;
        CHECK(residual.cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("alpha centrality approaches the perron vector as alpha grows") {
    const auto sys = test::random_system(99, 10, 1);
    const Vector pi = perron_centrality(sys.w);
    const Vector near_one = alpha_centrality(sys.w, 0.999);
    CHECK((near_one - pi).cwiseAbs().maxCoeff() < 1e-2);
}
