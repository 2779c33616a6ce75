#ifndef POLYDYN_INVERSE_DESIGN_HPP
#define POLYDYN_INVERSE_DESIGN_HPP

#include "polydyn/dynamics.hpp"
#include "polydyn/types.hpp"

#include <optional>
#include <vector>

namespace polydyn {

enum class NodeFeasibility {
    Ok,
    ZeroDenominator,
    SignMismatch,
    MagnitudeExceeded,
    CrossDimensionInconsistent,
    Boundary,  // candidate a_ii at 0 or 1
};

/// Stable strings for scripting: "ok", "zero-denominator", "sign-mismatch",
/// "magnitude-exceeded", "cross-dimension-inconsistent", "boundary".
const char* to_string(NodeFeasibility f);

struct NodeDiagnosis {
    NodeFeasibility code = NodeFeasibility::Ok;
    std::optional<double> a;  // accepted candidate when code == Ok
};

struct FeasibilityReport {
    bool feasible = false;
    std::optional<Vector> a;  // present iff feasible
    std::vector<NodeDiagnosis> per_node;
};

/// A damping/initial-state pair that reproduces a target limit, with the
/// max-abs forward-check error.
struct DesignSolution {
    DampingMatrix a;
    StateMatrix x0;
    double residual = 0.0;
};

struct FeasibilityOptions {
    /// Candidates must lie in (interval_eps, 1 - interval_eps).
    double interval_eps = 1e-9;
    /// Per-node candidates across dimensions must agree this tightly.
    double consistency_eps = 1e-7;
};

/// The unique X(0) = (I - A)^{-1} (I - A W) X(inf) for strict interior
/// damping. (I - A) is diagonal, so this is a direct row-scaled combination,
/// not a general linear solve. Throws std::domain_error when some a_ii is 0
/// or 1.
StateMatrix solve_initial(const InfluenceMatrix& w, const DampingMatrix& a,
                          const StateMatrix& x_inf);

/// Per-node scalar feasibility of a_ii = (x_ih(inf) - x_ih(0)) /
/// (sum_j w_ij x_jh(inf) - x_ih(0)) across all dimensions h. Infeasibility
/// is an outcome, not an error. A 0/0 dimension constrains nothing and is
/// excluded from the cross-dimension consistency check; a node whose every
/// dimension is unconstraining accepts any value and gets 0.5.
FeasibilityReport solve_damping(const InfluenceMatrix& w,
                                const StateMatrix& x0,
                                const StateMatrix& x_inf,
                                const FeasibilityOptions& opts = {});

/// Member of the infinite design family: x_ih(0) = (x_ih(inf) -
/// a_ii sum_j w_ij x_jh(inf)) / (1 - a_ii) for an arbitrary interior a.
/// The same map as solve_initial; residual comes from a closed-form forward
/// check.
DesignSolution design_family(const InfluenceMatrix& w, const StateMatrix& x_inf,
                             const Vector& a);

/// The A = I/2 member: X(0) = 2 X(inf) - W X(inf), neither inflated nor
/// deflated by the damping choice.
DesignSolution unbiased_design(const InfluenceMatrix& w,
                               const StateMatrix& x_inf);

/// Entrywise alpha + beta * X. Scalars pass through the process without
/// altering the limit matrix.
StateMatrix affine_map(const StateMatrix& x, double alpha, double beta);

}  // namespace polydyn

#endif
