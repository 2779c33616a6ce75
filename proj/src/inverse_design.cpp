#include "polydyn/inverse_design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace polydyn {

const char* to_string(NodeFeasibility f) {
    switch (f) {
        case NodeFeasibility::Ok: return "ok";
        case NodeFeasibility::ZeroDenominator: return "zero-denominator";
        case NodeFeasibility::SignMismatch: return "sign-mismatch";
        case NodeFeasibility::MagnitudeExceeded: return "magnitude-exceeded";
        case NodeFeasibility::CrossDimensionInconsistent:
            return "cross-dimension-inconsistent";
        case NodeFeasibility::Boundary: return "boundary";
    }
    return "?";
}

namespace {

void require_target(const InfluenceMatrix& w, const StateMatrix& x,
                    const char* name) {
    if (x.rows() != w.size())
        throw std::invalid_argument(std::string(name) + " has " +
                                    std::to_string(x.rows()) +
                                    " rows but W is " +
                                    std::to_string(w.size()) + "x" +
                                    std::to_string(w.size()));
}

StateMatrix initial_from_damping(const InfluenceMatrix& w, const Vector& a,
                                 const StateMatrix& x_inf) {
    // x_ih(0) = (x_ih(inf) - a_ii * (W x(inf))_ih) / (1 - a_ii); the inverse
    // of (I - A) is diagonal, so no linear solve is involved.
    const StateMatrix wx = w.matrix() * x_inf;
    StateMatrix x0(x_inf.rows(), x_inf.cols());
    for (Eigen::Index i = 0; i < x_inf.rows(); ++i)
        x0.row(i) = (x_inf.row(i) - a(i) * wx.row(i)) / (1.0 - a(i));
    return x0;
}

}  // namespace

StateMatrix solve_initial(const InfluenceMatrix& w, const DampingMatrix& a,
                          const StateMatrix& x_inf) {
    require_target(w, x_inf, "X(inf)");
    if (!a.strictly_interior())
        throw std::domain_error(
            "strict interior damping required: every a_ii must lie in (0,1)");
    return initial_from_damping(w, a.diagonal(), x_inf);
}

FeasibilityReport solve_damping(const InfluenceMatrix& w,
                                const StateMatrix& x0,
                                const StateMatrix& x_inf,
                                const FeasibilityOptions& opts) {
    require_target(w, x0, "X0");
    require_target(w, x_inf, "X(inf)");
    if (x0.cols() != x_inf.cols())
        throw std::invalid_argument("X0 and X(inf) column counts differ");

    const Eigen::Index n = w.size();
    const Eigen::Index m = x0.cols();
    const StateMatrix wx = w.matrix() * x_inf;

    // Rounding-noise floor: numerator/denominator pairs below it are treated
    // as the exact 0/0 (unconstraining) case.
    const double scale =
        std::max({1.0, x0.cwiseAbs().maxCoeff(), x_inf.cwiseAbs().maxCoeff(),
                  wx.cwiseAbs().maxCoeff()});
    const double zero_tol =
        100.0 * std::numeric_limits<double>::epsilon() * scale;

    FeasibilityReport report;
    report.per_node.resize(static_cast<std::size_t>(n));
    Vector a(n);
    bool all_ok = true;

    for (Eigen::Index i = 0; i < n; ++i) {
        NodeDiagnosis& diag = report.per_node[static_cast<std::size_t>(i)];
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        bool constrained = false;
        diag.code = NodeFeasibility::Ok;

        for (Eigen::Index h = 0; h < m; ++h) {
            const double numer = x_inf(i, h) - x0(i, h);
            const double denom = wx(i, h) - x0(i, h);
            if (std::abs(numer) <= zero_tol && std::abs(denom) <= zero_tol)
                continue;  // any a_ii satisfies this dimension
            if (std::abs(denom) <= zero_tol) {
                diag.code = NodeFeasibility::ZeroDenominator;
                break;
            }
            const double candidate = numer / denom;
            if (std::abs(candidate) <= opts.interval_eps ||
                std::abs(candidate - 1.0) <= opts.interval_eps) {
                diag.code = NodeFeasibility::Boundary;
                break;
            }
            if (candidate < 0.0) {
                diag.code = NodeFeasibility::SignMismatch;
                break;
            }
            if (candidate > 1.0) {
                diag.code = NodeFeasibility::MagnitudeExceeded;
                break;
            }
            constrained = true;
            lo = std::min(lo, candidate);
            hi = std::max(hi, candidate);
        }

        if (diag.code != NodeFeasibility::Ok) {
            all_ok = false;
            continue;
        }
        if (!constrained) {
            // every dimension was 0/0: the node already sits at a fixed
            // point, any interior value works
            a(i) = 0.5;
            diag.a = 0.5;
            continue;
        }
        if (hi - lo > opts.consistency_eps) {
            diag.code = NodeFeasibility::CrossDimensionInconsistent;
            all_ok = false;
            continue;
        }
        a(i) = 0.5 * (lo + hi);
        diag.a = a(i);
    }

    report.feasible = all_ok;
    if (all_ok) report.a = std::move(a);
    return report;
}

DesignSolution design_family(const InfluenceMatrix& w, const StateMatrix& x_inf,
                             const Vector& a) {
    require_target(w, x_inf, "X(inf)");
    if (a.size() != w.size())
        throw std::invalid_argument("damping vector length mismatch");
    if (!((a.array() > 0.0).all() && (a.array() < 1.0).all()))
        throw std::domain_error(
            "design family requires every a_ii strictly inside (0,1)");

    DesignSolution sol{DampingMatrix::from_diagonal(a),
                       initial_from_damping(w, a, x_inf), 0.0};
    const LimitResult forward = closed_form_limit(w, sol.a, sol.x0);
    sol.residual = (forward.x_inf - x_inf).cwiseAbs().maxCoeff();
    return sol;
}

DesignSolution unbiased_design(const InfluenceMatrix& w,
                               const StateMatrix& x_inf) {
    require_target(w, x_inf, "X(inf)");
    return design_family(w, x_inf, Vector::Constant(w.size(), 0.5));
}

StateMatrix affine_map(const StateMatrix& x, double alpha, double beta) {
    return (beta * x).array() + alpha;
}

}  // namespace polydyn
