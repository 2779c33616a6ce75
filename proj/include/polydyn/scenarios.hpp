#ifndef POLYDYN_SCENARIOS_HPP
#define POLYDYN_SCENARIOS_HPP

#include "polydyn/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace polydyn {

/// Strongly connected, aperiodic random influence matrix: a directed
/// Hamiltonian cycle (strong connectivity), every other ordered pair added
/// independently with extra_edge_prob, one guaranteed self-loop
/// (aperiodicity), uniform(0.1, 1) weights, rows normalized.
InfluenceMatrix random_strong_w(int n, double extra_edge_prob,
                                std::uint64_t seed);

DampingMatrix uniform_damping(int n, double a);

/// round(high_fraction * n) seeded-random nodes get a_high, the rest a_low.
DampingMatrix two_value_damping(int n, double a_low, double a_high,
                                double high_fraction, std::uint64_t seed);

/// Places point i at vertex row assignment[i]. Every vertex must be used by
/// at least one point (non-vacuous) and every index must be in range.
StateMatrix polytope_init(const StateMatrix& vertices,
                          const std::vector<int>& assignment);

/// Vertices of the regular v-gon on the unit circle (two columns).
StateMatrix regular_polygon(int vertices);

/// Community-cleavage experiment (one dimension): every agent draws an
/// initial opinion from a normal at moderate_center with standard deviation
/// moderate_spread, truncated to [pole_low, pole_high]; the extremists are
/// the round(extremist_fraction * n) agents nearest the poles, split between
/// the low and high pole, and receive susceptibility a_extremist; the
/// moderate mass draws a_ii uniformly from [a_moderate_low, a_moderate_high].
/// The network is random_strong_w.
struct CleavageParams {
    int n = 250;
    double extremist_fraction = 0.1;
    double moderate_center = 5.0;
    double moderate_spread = 4.0;
    double pole_low = -11.0;
    double pole_high = 14.0;
    double a_moderate_low = 0.30;
    double a_moderate_high = 0.99;
    double a_extremist = 0.98;
    double extra_edge_prob = 0.02;
    std::uint64_t seed = 101;
};

struct CleavageSystem {
    InfluenceMatrix w;
    DampingMatrix a;
    StateMatrix x0;
    std::vector<int> extremists;  // node indices, low-pole camp first
};

CleavageSystem cleavage_scenario(const CleavageParams& params = {});

/// Equal-width bins spanning [min, max]; bins are left-closed, the final bin
/// right-closed, so counts always sum to the number of points.
struct Histogram {
    Vector edges;              // bins + 1 boundaries
    std::vector<long> counts;  // size bins
};

/// One-dimensional state only (throws otherwise).
Histogram histogram(const StateMatrix& x, int bins);

/// Number of local maxima, merging plateaus of equal counts; a boundary bin
/// counts against its single neighbor.
int count_local_modes(const Histogram& h);

enum class ScenarioKind { RandomArray, OneValueA, TwoValueA, Polytope, Cleavage };

const char* to_string(ScenarioKind k);
ScenarioKind scenario_kind_from_string(const std::string& s);

/// Reified generator configuration; an identical spec (seed included)
/// produces a bit-identical system.
struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::RandomArray;
    int n = 0;  // 0: kind default (20, or 250 for cleavage)
    int m = 2;
    std::uint64_t seed = 1;
    double extra_edge_prob = 0.3;
    double x_low = 0.0;   // random initial coordinate range
    double x_high = 10.0;
    double a_value = 0.8;        // one-value damping
    double a_low = 0.1;          // two-value damping
    double a_high = 0.8;
    double high_fraction = 0.5;
    int polygon_vertices = 5;
    CleavageParams cleavage;
};

struct ScenarioSystem {
    InfluenceMatrix w;
    DampingMatrix a;
    StateMatrix x0;
};

ScenarioSystem build_scenario(const ScenarioSpec& spec);

}  // namespace polydyn

#endif
