#ifndef POLYDYN_STRUCTURE_HPP
#define POLYDYN_STRUCTURE_HPP

#include "polydyn/types.hpp"

#include <vector>

namespace polydyn {

enum class Connectivity { Strong, Unilateral, Weak, Disconnected };

const char* to_string(Connectivity c);

/// Structural classification of the directed graph with an edge (i, j)
/// whenever w_ij > 0.
struct StructureClass {
    Connectivity connectivity = Connectivity::Disconnected;
    /// True iff every terminal strongly connected component has cycle-length
    /// gcd 1. For a strong structure this is the usual aperiodicity of the
    /// single component.
    bool aperiodic = false;
    bool has_positive_diagonal = false;
    /// Cycle-length gcd of each terminal component, in discovery order.
    std::vector<int> terminal_periods;
};

StructureClass structure_class(const InfluenceMatrix& w);

// Graph helpers shared with the convergence classifier.

/// Tarjan decomposition; components come out in reverse topological order of
/// the condensation (sinks first).
std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& adj);

/// gcd of directed cycle lengths inside one strongly connected component,
/// computed from BFS level differences. Returns 0 for a single node with no
/// self-loop (no cycle at all).
int component_period(const std::vector<std::vector<int>>& adj,
                     const std::vector<int>& component);

/// Adjacency lists of the positive-entry pattern of a square matrix.
std::vector<std::vector<int>> positive_pattern(const Matrix& m);

}  // namespace polydyn

#endif
