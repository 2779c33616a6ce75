#include "polydyn/scenarios.hpp"

#include "polydyn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace polydyn {

double SplitMix64::next_normal() {
    // Box-Muller, cosine branch only, so one value costs exactly two draws.
    const double u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return r * std::cos(2.0 * 3.14159265358979323846 * u2);
}

namespace {

std::vector<int> shuffled_indices(int n, SplitMix64& rng) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(
            rng.next_index(static_cast<std::uint64_t>(i) + 1));
        std::swap(idx[static_cast<std::size_t>(i)],
                  idx[static_cast<std::size_t>(j)]);
    }
    return idx;
}

double truncated_normal(SplitMix64& rng, double center, double spread,
                        double lo, double hi) {
    for (int tries = 0; tries < 1000; ++tries) {
        const double v = center + spread * rng.next_normal();
        if (v >= lo && v <= hi) return v;
    }
    return std::clamp(center, lo, hi);
}

}  // namespace

InfluenceMatrix random_strong_w(int n, double extra_edge_prob,
                                std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    if (extra_edge_prob < 0.0 || extra_edge_prob > 1.0)
        throw std::invalid_argument("edge probability out of [0,1]");
    SplitMix64 rng(seed);

    // Draw order is part of the format: cycle edges are implicit, then the
    // remaining ordered pairs row by row, then the guaranteed self-loop,
    // then weights row by row over present edges in column order.
    std::vector<char> edge(static_cast<std::size_t>(n) * n, 0);
    auto at = [n, &edge](int i, int j) -> char& {
        return edge[static_cast<std::size_t>(i) * n + j];
    };
    for (int i = 0; i < n; ++i) at(i, (i + 1) % n) = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (at(i, j)) continue;
            if (rng.next_double() < extra_edge_prob) at(i, j) = 1;
        }
    const auto loop_node =
        static_cast<int>(rng.next_index(static_cast<std::uint64_t>(n)));
    at(loop_node, loop_node) = 1;

    Matrix w = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if (at(i, j)) w(i, j) = rng.next_uniform(0.1, 1.0);
        w.row(i) /= w.row(i).sum();
    }
    return InfluenceMatrix::from_matrix(std::move(w));
}

DampingMatrix uniform_damping(int n, double a) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    return DampingMatrix::uniform(n, a);
}

DampingMatrix two_value_damping(int n, double a_low, double a_high,
                                double high_fraction, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("n must be at least 1");
    if (high_fraction < 0.0 || high_fraction > 1.0)
        throw std::invalid_argument("high_fraction out of [0,1]");
    SplitMix64 rng(seed);
    const auto high_count =
        static_cast<long>(std::lround(high_fraction * n));
    const auto order = shuffled_indices(n, rng);
    Vector a = Vector::Constant(n, a_low);
    for (long r = 0; r < high_count; ++r)
        a(order[static_cast<std::size_t>(r)]) = a_high;
    return DampingMatrix::from_diagonal(std::move(a));
}

StateMatrix polytope_init(const StateMatrix& vertices,
                          const std::vector<int>& assignment) {
    const auto v = vertices.rows();
    if (v == 0) throw std::invalid_argument("no vertices");
    std::vector<long> occupancy(static_cast<std::size_t>(v), 0);
    for (int idx : assignment) {
        if (idx < 0 || idx >= v)
            throw std::invalid_argument("vertex index " + std::to_string(idx) +
                                        " out of range");
        ++occupancy[static_cast<std::size_t>(idx)];
    }
    for (Eigen::Index k = 0; k < v; ++k)
        if (occupancy[static_cast<std::size_t>(k)] == 0)
            throw std::invalid_argument("vertex " + std::to_string(k) +
                                        " has no points (vacuous)");
    StateMatrix x0(static_cast<Eigen::Index>(assignment.size()),
                   vertices.cols());
    for (std::size_t i = 0; i < assignment.size(); ++i)
        x0.row(static_cast<Eigen::Index>(i)) =
            vertices.row(assignment[i]);
    return x0;
}

StateMatrix regular_polygon(int vertices) {
    if (vertices < 1) throw std::invalid_argument("need at least one vertex");
    StateMatrix v(vertices, 2);
    const double tau = 2.0 * 3.14159265358979323846;
    for (int k = 0; k < vertices; ++k) {
        const double angle = tau * k / vertices;
        v(k, 0) = std::cos(angle);
        v(k, 1) = std::sin(angle);
    }
    return v;
}

CleavageSystem cleavage_scenario(const CleavageParams& p) {
    if (p.n < 1) throw std::invalid_argument("n must be at least 1");
    if (p.extremist_fraction < 0.0 || p.extremist_fraction > 1.0)
        throw std::invalid_argument("extremist_fraction out of [0,1]");
    if (p.pole_low > p.pole_high)
        throw std::invalid_argument("pole_low exceeds pole_high");
    if (p.a_moderate_low > p.a_moderate_high)
        throw std::invalid_argument("a_moderate_range reversed");

    SplitMix64 seeder(p.seed);
    const std::uint64_t w_seed = seeder.next();
    const std::uint64_t x_seed = seeder.next();
    const std::uint64_t a_seed = seeder.next();

    InfluenceMatrix w = random_strong_w(p.n, p.extra_edge_prob, w_seed);

    // One shared opinion distribution, concentrated around the moderate
    // center and truncated to the pole-to-pole box.
    SplitMix64 x_rng(x_seed);
    StateMatrix x0(p.n, 1);
    for (int i = 0; i < p.n; ++i)
        x0(i, 0) = truncated_normal(x_rng, p.moderate_center, p.moderate_spread,
                                    p.pole_low, p.pole_high);

    // The extremists are the agents holding the opinions nearest the poles,
    // split between the low and the high camp.
    const auto k_ext =
        static_cast<long>(std::lround(p.extremist_fraction * p.n));
    const long k_low = k_ext / 2;
    const long k_high = k_ext - k_low;
    std::vector<int> by_value(static_cast<std::size_t>(p.n));
    std::iota(by_value.begin(), by_value.end(), 0);
    std::sort(by_value.begin(), by_value.end(), [&x0](int l, int r) {
        if (x0(l, 0) != x0(r, 0)) return x0(l, 0) < x0(r, 0);
        return l < r;
    });
    std::vector<int> extremists;
    extremists.reserve(static_cast<std::size_t>(k_ext));
    for (long r = 0; r < k_low; ++r)
        extremists.push_back(by_value[static_cast<std::size_t>(r)]);
    for (long r = 0; r < k_high; ++r)
        extremists.push_back(
            by_value[static_cast<std::size_t>(p.n - 1 - r)]);

    SplitMix64 a_rng(a_seed);
    Vector a(p.n);
    for (int i = 0; i < p.n; ++i)
        a(i) = a_rng.next_uniform(p.a_moderate_low, p.a_moderate_high);
    for (int i : extremists) a(i) = p.a_extremist;

    return CleavageSystem{std::move(w), DampingMatrix::from_diagonal(std::move(a)),
                          std::move(x0), std::move(extremists)};
}

Histogram histogram(const StateMatrix& x, int bins) {
    if (x.cols() != 1)
        throw std::invalid_argument("histogram requires a one-dimensional state");
    if (x.rows() == 0) throw std::invalid_argument("empty state");
    if (bins < 1) throw std::invalid_argument("bins must be at least 1");

    const double lo = x.minCoeff();
    const double hi = x.maxCoeff();
    const double width = (hi - lo) / bins;

    Histogram h;
    h.edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) h.edges(b) = lo + width * b;
    h.edges(bins) = hi;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        long b = width > 0.0
                     ? static_cast<long>(std::floor((x(i, 0) - lo) / width))
                     : 0;
        b = std::clamp<long>(b, 0, bins - 1);
        ++h.counts[static_cast<std::size_t>(b)];
    }
    return h;
}

int count_local_modes(const Histogram& h) {
    const auto& c = h.counts;
    const std::size_t b = c.size();
    int modes = 0;
    std::size_t i = 0;
    while (i < b) {
        std::size_t j = i;
        while (j + 1 < b && c[j + 1] == c[i]) ++j;  // plateau [i, j]
        const bool rises_left = (i == 0) || (c[i - 1] < c[i]);
        const bool falls_right = (j == b - 1) || (c[j + 1] < c[i]);
        if (rises_left && falls_right && c[i] > 0) ++modes;
        i = j + 1;
    }
    return modes;
}

const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::RandomArray: return "random-array";
        case ScenarioKind::OneValueA: return "one-value-A";
        case ScenarioKind::TwoValueA: return "two-value-A";
        case ScenarioKind::Polytope: return "polytope";
        case ScenarioKind::Cleavage: return "cleavage";
    }
    return "?";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
    if (s == "random-array") return ScenarioKind::RandomArray;
    if (s == "one-value-A") return ScenarioKind::OneValueA;
    if (s == "two-value-A") return ScenarioKind::TwoValueA;
    if (s == "polytope") return ScenarioKind::Polytope;
    if (s == "cleavage") return ScenarioKind::Cleavage;
    throw std::invalid_argument("unknown scenario kind '" + s + "'");
}

ScenarioSystem build_scenario(const ScenarioSpec& spec) {
    const int n = spec.n > 0
                      ? spec.n
                      : (spec.kind == ScenarioKind::Cleavage ? 250 : 20);
    switch (spec.kind) {
        case ScenarioKind::Cleavage: {
            CleavageParams p = spec.cleavage;
            p.n = n;
            p.seed = spec.seed;
            auto sys = cleavage_scenario(p);
            return ScenarioSystem{std::move(sys.w), std::move(sys.a),
                                  std::move(sys.x0)};
        }
        case ScenarioKind::Polytope: {
            SplitMix64 seeder(spec.seed);
            const std::uint64_t w_seed = seeder.next();
            const std::uint64_t assign_seed = seeder.next();
            auto w = random_strong_w(n, spec.extra_edge_prob, w_seed);
            // every vertex gets floor(n/v) points, leftovers from vertex 0
            const int v = spec.polygon_vertices;
            if (n < v)
                throw std::invalid_argument(
                    "polytope scenario needs at least one point per vertex");
            std::vector<int> assignment(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) assignment[i] = i % v;
            SplitMix64 rng(assign_seed);
            for (int i = n - 1; i > 0; --i)
                std::swap(assignment[i],
                          assignment[rng.next_index(
                              static_cast<std::uint64_t>(i) + 1)]);
            auto x0 = polytope_init(regular_polygon(v), assignment);
            auto a = uniform_damping(n, spec.a_value);
            return ScenarioSystem{std::move(w), std::move(a), std::move(x0)};
        }
        case ScenarioKind::RandomArray:
        case ScenarioKind::OneValueA:
        case ScenarioKind::TwoValueA: {
            SplitMix64 seeder(spec.seed);
            const std::uint64_t w_seed = seeder.next();
            const std::uint64_t x_seed = seeder.next();
            const std::uint64_t a_seed = seeder.next();
            auto w = random_strong_w(n, spec.extra_edge_prob, w_seed);
            SplitMix64 x_rng(x_seed);
            StateMatrix x0(n, spec.m);
            for (int i = 0; i < n; ++i)
                for (int h = 0; h < spec.m; ++h)
                    x0(i, h) = x_rng.next_uniform(spec.x_low, spec.x_high);
            DampingMatrix a =
                spec.kind == ScenarioKind::TwoValueA
                    ? two_value_damping(n, spec.a_low, spec.a_high,
                                        spec.high_fraction, a_seed)
                    : uniform_damping(n, spec.a_value);
            return ScenarioSystem{std::move(w), std::move(a), std::move(x0)};
        }
    }
    throw std::logic_error("unreachable scenario kind");
}

}  // namespace polydyn
