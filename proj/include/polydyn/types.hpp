#ifndef POLYDYN_TYPES_HPP
#define POLYDYN_TYPES_HPP

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace polydyn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Point coordinates: one row per node, one column per dimension.
using StateMatrix = Matrix;

/// Nonnegative square matrix with unit row sums (network structure).
///
/// Construction validates the invariants. Rows whose sums deviate from 1 by
/// no more than kRowSumTol are renormalized (text round-tripping perturbs
/// sums); the largest pre-normalization deviation is kept as a diagnostic.
/// Rows further off than the tolerance, negative entries, and zero rows are
/// rejected.
class InfluenceMatrix {
public:
    static constexpr double kRowSumTol = 1e-12;

    /// Throws std::invalid_argument listing every violated invariant.
    static InfluenceMatrix from_matrix(Matrix w);

    const Matrix& matrix() const { return w_; }
    Eigen::Index size() const { return w_.rows(); }

    /// Largest |row sum - 1| absorbed by renormalization at construction.
    double row_sum_adjustment() const { return row_sum_adjustment_; }

private:
    InfluenceMatrix(Matrix w, double adjustment)
        : w_(std::move(w)), row_sum_adjustment_(adjustment) {}

    Matrix w_;
    double row_sum_adjustment_ = 0.0;
};

/// Diagonal per-node susceptibility values, each in [0, 1].
/// a_ii = 0 pins node i to its initial state; a_ii = 1 makes it a pure
/// weighted averager.
class DampingMatrix {
public:
    /// Throws std::invalid_argument on entries outside [0, 1] or non-finite.
    static DampingMatrix from_diagonal(Vector a);
    static DampingMatrix uniform(Eigen::Index n, double a);

    const Vector& diagonal() const { return a_; }
    Eigen::Index size() const { return a_.size(); }

    bool is_zero() const;
    bool is_identity() const;
    bool any_identity_entry() const;
    /// True iff 0 < a_ii < 1 for every node.
    bool strictly_interior() const;

private:
    explicit DampingMatrix(Vector a) : a_(std::move(a)) {}

    Vector a_;
};

/// Axis-aligned box: per-column minima and maxima of a state matrix.
struct BoundingBox {
    Vector lo;
    Vector hi;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }
};

// Invariant checks on raw data, so that every violation can be reported
// instead of throwing on the first one. Indices in messages are 1-based.
std::vector<std::string> influence_violations(const Matrix& w);
std::vector<std::string> damping_violations(const Vector& a);
std::vector<std::string> state_violations(const Matrix& x);

/// Collects all dimension and invariant violations of a {W, A, X0} system.
ValidationReport validate_system(const Matrix& w, const Vector& a,
                                 const Matrix& x0);

/// Per-column min/max box of a nonempty state. Throws on empty input.
BoundingBox bounding_box(const StateMatrix& x);

/// True iff every entry of column h lies in [lo_h - tol, hi_h + tol].
bool contains(const BoundingBox& box, const StateMatrix& x, double tol);

}  // namespace polydyn

#endif
