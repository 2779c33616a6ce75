#ifndef POLYDYN_TEST_HELPERS_HPP
#define POLYDYN_TEST_HELPERS_HPP

#include "polydyn/rng.hpp"
#include "polydyn/scenarios.hpp"
#include "polydyn/types.hpp"

#include <initializer_list>
#include <vector>

namespace polydyn::test {

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

inline Vector vec(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

/// Random strictly sub-stochastic test system, deterministic per seed.
struct RandomSystem {
    InfluenceMatrix w;
    DampingMatrix a;
    StateMatrix x0;
};

inline RandomSystem random_system(std::uint64_t seed, int max_n = 20,
                                  int max_m = 3, double a_lo = 0.05,
                                  double a_hi = 0.95) {
    SplitMix64 rng(seed);
    const int n = 2 + static_cast<int>(rng.next_index(
                          static_cast<std::uint64_t>(max_n - 1)));
    const int m =
        1 + static_cast<int>(rng.next_index(static_cast<std::uint64_t>(max_m)));
    auto w = random_strong_w(n, 0.3, rng.next());
    Vector a(n);
    for (int i = 0; i < n; ++i) a(i) = rng.next_uniform(a_lo, a_hi);
    StateMatrix x0(n, m);
    for (int i = 0; i < n; ++i)
        for (int h = 0; h < m; ++h) x0(i, h) = rng.next_uniform(-5.0, 5.0);
    return RandomSystem{std::move(w), DampingMatrix::from_diagonal(std::move(a)),
                        std::move(x0)};
}

}  // namespace polydyn::test

#endif
