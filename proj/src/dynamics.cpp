#include "polydyn/dynamics.hpp"

#include "polydyn/structure.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace polydyn {

namespace {

constexpr double kSingularRcond = 1e-12;

void require_system(const InfluenceMatrix& w, const DampingMatrix& a) {
    if (w.size() != a.size())
        throw std::invalid_argument("W is " + std::to_string(w.size()) + "x" +
                                    std::to_string(w.size()) +
                                    " but A has length " +
                                    std::to_string(a.size()));
}

void require_state(const InfluenceMatrix& w, const StateMatrix& x,
                   const char* name) {
    if (x.rows() != w.size())
        throw std::invalid_argument(std::string(name) + " has " +
                                    std::to_string(x.rows()) +
                                    " rows but W is " +
                                    std::to_string(w.size()) + "x" +
                                    std::to_string(w.size()));
}

Matrix damped_walk_matrix(const InfluenceMatrix& w, const DampingMatrix& a) {
    return a.diagonal().asDiagonal() * w.matrix();
}

}  // namespace

const char* to_string(ConvergenceCase c) {
    switch (c) {
        case ConvergenceCase::Identity: return "identity";
        case ConvergenceCase::Stochastic: return "stochastic";
        case ConvergenceCase::SubstochasticMixed: return "substochastic-mixed";
        case ConvergenceCase::StrictlySubstochastic:
            return "strictly-substochastic";
    }
    return "?";
}

const char* to_string(LimitMethod m) {
    switch (m) {
        case LimitMethod::ClosedForm: return "closed-form";
        case LimitMethod::Iterative: return "iterative";
        case LimitMethod::Neumann: return "neumann";
    }
    return "?";
}

StateMatrix step(const InfluenceMatrix& w, const DampingMatrix& a,
                 const StateMatrix& xk, const StateMatrix& x0) {
    require_system(w, a);
    require_state(w, xk, "X(k)");
    require_state(w, x0, "X0");
    if (xk.cols() != x0.cols())
        throw std::invalid_argument("X(k) and X0 column counts differ");
    const auto& d = a.diagonal();
    StateMatrix social = w.matrix() * xk;
    return d.asDiagonal() * social +
           (Vector::Ones(d.size()) - d).asDiagonal() * x0;
}

Matrix evolve_v(const InfluenceMatrix& w, const DampingMatrix& a, long k) {
    require_system(w, a);
    if (k < 0) throw std::invalid_argument("k must be nonnegative");
    const Eigen::Index n = w.size();
    const auto& d = a.diagonal();
    const Vector anchor = Vector::Ones(n) - d;
    Matrix v = Matrix::Identity(n, n);
    for (long i = 0; i < k; ++i) {
        v = d.asDiagonal() * (w.matrix() * v);
        v.diagonal() += anchor;
    }
    return v;
}

double estimate_spectral_radius(const Matrix& m) {
    const Eigen::Index n = m.rows();
    if (n == 0) return 0.0;
    Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
    double lo = 0.0, hi = 0.0;
    for (int it = 0; it < 1000; ++it) {
        Vector y = m * x;
        const double mass = y.sum();
        if (mass <= std::numeric_limits<double>::min()) return 0.0;
        lo = std::numeric_limits<double>::infinity();
        hi = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (x(i) <= 0.0) continue;
            const double ratio = y(i) / x(i);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        if (!std::isfinite(lo)) return 0.0;
        if (hi - lo <= 1e-10 * std::max(1.0, hi)) break;
        x = y / mass;
    }
    return 0.5 * (lo + hi);
}

namespace {

// When I - AW is singular the unit-circle spectrum comes from the closed
// averaging blocks: terminal strongly connected components of the AW pattern
// whose nodes all have a_ii = 1. The limit exists iff each such block is
// aperiodic.
bool closed_blocks_aperiodic(const InfluenceMatrix& w, const DampingMatrix& a,
                             std::string* detail) {
    const Matrix aw = damped_walk_matrix(w, a);
    const auto adj = positive_pattern(aw);
    const auto comps = strongly_connected_components(adj);
    const int n = static_cast<int>(adj.size());
    std::vector<int> comp_of(n, -1);
    for (std::size_t c = 0; c < comps.size(); ++c)
        for (int v : comps[c]) comp_of[v] = static_cast<int>(c);

    std::vector<char> terminal(comps.size(), 1);
    for (int u = 0; u < n; ++u)
        for (int v : adj[u])
            if (comp_of[u] != comp_of[v]) terminal[comp_of[u]] = 0;

    bool all_aperiodic = true;
    int closed_blocks = 0;
    for (std::size_t c = 0; c < comps.size(); ++c) {
        if (!terminal[c]) continue;
        bool closed = true;
        for (int v : comps[c])
            if (a.diagonal()(v) != 1.0) closed = false;
        if (!closed) continue;
        ++closed_blocks;
        const int period = component_period(adj, comps[c]);
        if (period != 1) {
            all_aperiodic = false;
            if (detail) {
                std::ostringstream os;
                os << "closed averaging block {";
                for (std::size_t i = 0; i < comps[c].size(); ++i)
                    os << (i ? "," : "") << comps[c][i] + 1;
                os << "} has period " << period;
                *detail = os.str();
            }
        }
    }
    if (detail && all_aperiodic) {
        std::ostringstream os;
        os << closed_blocks << " closed averaging block(s), all aperiodic";
        *detail = os.str();
    }
    return all_aperiodic;
}

}  // namespace

ConvergenceClass classify(const InfluenceMatrix& w, const DampingMatrix& a) {
    require_system(w, a);
    ConvergenceClass out;
    const Matrix aw = damped_walk_matrix(w, a);
    out.spectral_radius_estimate = estimate_spectral_radius(aw);

    if (a.is_zero()) {
        out.kind = ConvergenceCase::Identity;
        out.converges = true;
        out.reason = "A = 0: every node is pinned to its initial state, V = I";
        return out;
    }

    if (!a.any_identity_entry()) {
        out.kind = ConvergenceCase::StrictlySubstochastic;
        out.converges = true;
        std::ostringstream os;
        os << "max a_ii = " << a.diagonal().maxCoeff()
           << " < 1, so the walk weights contract and the limit "
              "(I - AW)^{-1}(I - A) exists";
        out.reason = os.str();
        return out;
    }

    out.kind = a.is_identity() ? ConvergenceCase::Stochastic
                               : ConvergenceCase::SubstochasticMixed;

    // Boundary damping: decide by nonsingularity first, then by the
    // structure of the closed averaging blocks.
    const Eigen::Index n = w.size();
    Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n, n) - aw);
    const double rcond = lu.rcond();
    if (rcond >= kSingularRcond) {
        out.converges = true;
        std::ostringstream os;
        os << "I - AW is nonsingular (rcond ~ " << rcond
           << "); the limit (I - AW)^{-1}(I - A) exists";
        out.reason = os.str();
        return out;
    }

    std::string detail;
    out.converges = closed_blocks_aperiodic(w, a, &detail);
    std::ostringstream os;
    os << "I - AW is singular (rcond ~ " << rcond << "); " << detail
       << (out.converges ? "; powers of AW settle, the limit exists"
                         : "; powers of AW oscillate, no limit");
    out.reason = os.str();
    return out;
}

LimitResult closed_form_limit(const InfluenceMatrix& w, const DampingMatrix& a,
                              const StateMatrix& x0) {
    require_system(w, a);
    require_state(w, x0, "X0");
    const Eigen::Index n = w.size();
    const Matrix system = Matrix::Identity(n, n) - damped_walk_matrix(w, a);
    Eigen::PartialPivLU<Matrix> lu(system);
    if (lu.rcond() < kSingularRcond)
        throw std::domain_error(
            "limit does not exist in closed form: I - AW is singular "
            "(classify() reports the convergence case)");
    Matrix anchor = Matrix::Zero(n, n);
    anchor.diagonal() = Vector::Ones(n) - a.diagonal();
    Matrix v = lu.solve(anchor);
    v += lu.solve(anchor - system * v);  // one refinement pass
    const double row_dev = (v.rowwise().sum().array() - 1.0).abs().maxCoeff();
    if (row_dev > 1e-10)
        throw std::domain_error(
            "closed-form limit numerically unreliable: limit row sums "
            "deviate by " +
            std::to_string(row_dev));
    LimitResult out;
    out.x_inf = v * x0;
    out.v = std::move(v);
    out.method = LimitMethod::ClosedForm;
    return out;
}

std::pair<Trajectory, LimitResult> iterate(const InfluenceMatrix& w,
                                           const DampingMatrix& a,
                                           const StateMatrix& x0,
                                           const IterateOptions& opts) {
    require_system(w, a);
    require_state(w, x0, "X0");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (opts.k_max < 1) throw std::invalid_argument("k_max must be >= 1");

    long stride = opts.record_every;
    if (stride <= 0) stride = (x0.size() <= 10000) ? 1 : 10;

    Trajectory traj;
    traj.states.push_back(x0);
    traj.steps.push_back(0);

    StateMatrix prev = x0;
    StateMatrix prev2;  // state before prev, for oscillation reporting
    double best_delta = std::numeric_limits<double>::infinity();
    long since_best = 0;
    double delta = 0.0;
    long k = 0;

    while (k < opts.k_max) {
        StateMatrix cur = step(w, a, prev, x0);
        ++k;
        delta = (cur - prev).cwiseAbs().maxCoeff();
        if (delta < best_delta) {
            best_delta = delta;
            since_best = 0;
        } else {
            ++since_best;
        }
        const bool done = delta < opts.tol || k == opts.k_max;
        if (k % stride == 0 && !done) {
            traj.states.push_back(cur);
            traj.steps.push_back(k);
        }
        prev2 = std::move(prev);
        prev = std::move(cur);
        if (delta < opts.tol) {
            traj.converged = true;
            break;
        }
    }

    // Always include the final state; a non-converged run also keeps the
    // state just before it so oscillation is visible.
    if (!traj.converged && traj.steps.back() != k - 1 && k >= 2) {
        traj.states.push_back(prev2);
        traj.steps.push_back(k - 1);
    }
    if (traj.steps.back() != k) {
        traj.states.push_back(prev);
        traj.steps.push_back(k);
    }
    traj.final_delta = delta;
    traj.total_steps = k;
    traj.periodic_suspect = !traj.converged && since_best >= 100;

    LimitResult limit;
    limit.x_inf = prev;
    limit.method = LimitMethod::Iterative;
    return {std::move(traj), std::move(limit)};
}

Matrix neumann_limit(const InfluenceMatrix& w, const DampingMatrix& a,
                     long terms) {
    require_system(w, a);
    if (terms < 0) throw std::invalid_argument("terms must be nonnegative");
    if (a.any_identity_entry())
        throw std::domain_error(
            "series convergence not guaranteed: some a_ii = 1");
    const Eigen::Index n = w.size();
    const Matrix aw = damped_walk_matrix(w, a);
    Matrix partial = Matrix::Identity(n, n);
    for (long i = 0; i < terms; ++i) {
        partial = aw * partial;
        partial.diagonal().array() += 1.0;
    }
    return partial * (Vector::Ones(n) - a.diagonal()).asDiagonal();
}

}  // namespace polydyn
