#ifndef POLYDYN_DYNAMICS_HPP
#define POLYDYN_DYNAMICS_HPP

#include "polydyn/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace polydyn {

enum class ConvergenceCase {
    Identity,               // A = 0
    Stochastic,             // A = I
    SubstochasticMixed,     // some (not all) a_ii = 1
    StrictlySubstochastic,  // every a_ii < 1
};

const char* to_string(ConvergenceCase c);

struct ConvergenceClass {
    ConvergenceCase kind = ConvergenceCase::StrictlySubstochastic;
    bool converges = false;
    std::string reason;
    std::optional<double> spectral_radius_estimate;
};

struct Trajectory {
    std::vector<StateMatrix> states;  // recorded snapshots, X(0) first
    std::vector<long> steps;          // iteration index of each snapshot
    bool converged = false;
    double final_delta = 0.0;  // max-abs change at the last step taken
    long total_steps = 0;
    /// Set when the run gave up with no improvement of the step delta over
    /// the trailing 100 steps (oscillation, e.g. a periodic A = I system).
    bool periodic_suspect = false;
};

enum class LimitMethod { ClosedForm, Iterative, Neumann };

const char* to_string(LimitMethod m);

struct LimitResult {
    /// Limit matrix; absent when only the state limit was iterated (tracking
    /// the full matrix polynomial alongside the states would cost O(n^3) per
    /// step).
    std::optional<Matrix> v;
    StateMatrix x_inf;
    LimitMethod method = LimitMethod::ClosedForm;
};

struct IterateOptions {
    double tol = 1e-10;
    long k_max = 1000000;
    /// Snapshot stride; 0 selects 1 while n*m <= 10^4 and 10 above that.
    long record_every = 0;
};

/// One update: A W X(k) + (I - A) X(0).
StateMatrix step(const InfluenceMatrix& w, const DampingMatrix& a,
                 const StateMatrix& xk, const StateMatrix& x0);

/// Matrix polynomial after k steps: V(k) = A W V(k-1) + (I - A), V(0) = I.
Matrix evolve_v(const InfluenceMatrix& w, const DampingMatrix& a, long k);

/// Convergence case analysis. Decisions rest on structure first (damping
/// bounds, irreducibility, aperiodicity of the closed averaging blocks);
/// the spectral radius of A W is estimated numerically as a diagnostic only.
ConvergenceClass classify(const InfluenceMatrix& w, const DampingMatrix& a);

/// V = (I - A W)^{-1} (I - A) by a partial-pivoting dense solve, and
/// X(inf) = V X(0). Throws std::domain_error when I - A W is singular
/// (reciprocal condition estimate below 1e-12); classify() reports which
/// convergence case applies then.
LimitResult closed_form_limit(const InfluenceMatrix& w, const DampingMatrix& a,
                              const StateMatrix& x0);

/// Repeats step() until the max-abs componentwise change drops below tol or
/// k_max is hit. Non-convergence is reported in the Trajectory, not thrown;
/// a non-converged run always records its last two states.
std::pair<Trajectory, LimitResult> iterate(const InfluenceMatrix& w,
                                           const DampingMatrix& a,
                                           const StateMatrix& x0,
                                           const IterateOptions& opts = {});

/// Truncated series [sum_{k=0}^{terms} (A W)^k] (I - A). Requires every
/// a_ii < 1 (throws std::domain_error otherwise: the series need not
/// converge on the boundary).
Matrix neumann_limit(const InfluenceMatrix& w, const DampingMatrix& a,
                     long terms);

/// Power iteration with Collatz-Wielandt bracketing on a nonnegative matrix;
/// at most 1000 iterations, returns the bracket midpoint.
double estimate_spectral_radius(const Matrix& m);

}  // namespace polydyn

#endif
