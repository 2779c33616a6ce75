#include "polydyn/types.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace polydyn {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // trim to the shortest form that still reads back exactly
    for (int prec = 1; prec < 17; ++prec) {
        char probe[40];
        std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
        if (std::strtod(probe, nullptr) == v) return probe;
    }
    return buf;
}

}  // namespace

std::vector<std::string> influence_violations(const Matrix& w) {
    std::vector<std::string> out;
    if (w.rows() != w.cols()) {
        std::ostringstream os;
        os << "W is " << w.rows() << "x" << w.cols() << ", not square";
        out.push_back(os.str());
        return out;
    }
    if (w.rows() == 0) {
        out.push_back("W is empty");
        return out;
    }
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        double sum = 0.0;
        bool row_ok = true;
        for (Eigen::Index j = 0; j < w.cols(); ++j) {
            const double v = w(i, j);
            if (!std::isfinite(v)) {
                out.push_back("w_" + std::to_string(i + 1) +
                              std::to_string(j + 1) + " is not finite");
                row_ok = false;
            } else if (v < 0.0) {
                out.push_back("w_" + std::to_string(i + 1) +
                              std::to_string(j + 1) + " is negative (" +
                              num(v) + ")");
                row_ok = false;
            }
            sum += v;
        }
        if (!row_ok) continue;
        if (sum == 0.0) {
            out.push_back("row " + std::to_string(i + 1) +
                          " is all zeros (cannot be row-stochastic)");
        } else if (std::abs(sum - 1.0) > InfluenceMatrix::kRowSumTol) {
            out.push_back("row " + std::to_string(i + 1) + " sums to " +
                          num(sum));
        }
    }
    return out;
}

std::vector<std::string> damping_violations(const Vector& a) {
    std::vector<std::string> out;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a(i)) || a(i) < 0.0 || a(i) > 1.0) {
            out.push_back("a_" + std::to_string(i + 1) +
                          std::to_string(i + 1) + " out of [0,1] (" +
                          num(a(i)) + ")");
        }
    }
    return out;
}

std::vector<std::string> state_violations(const Matrix& x) {
    std::vector<std::string> out;
    if (x.rows() == 0 || x.cols() == 0) {
        out.push_back("empty state");
        return out;
    }
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (Eigen::Index h = 0; h < x.cols(); ++h)
            if (!std::isfinite(x(i, h)))
                out.push_back("x_" + std::to_string(i + 1) + "," +
                              std::to_string(h + 1) + " is not finite");
    return out;
}

ValidationReport validate_system(const Matrix& w, const Vector& a,
                                 const Matrix& x0) {
    ValidationReport report;
    report.violations = influence_violations(w);
    auto append = [&report](std::vector<std::string> more) {
        for (auto& v : more) report.violations.push_back(std::move(v));
    };
    append(damping_violations(a));
    append(state_violations(x0));
    const Eigen::Index n = w.rows();
    if (w.rows() == w.cols() && a.size() != n) {
        report.violations.push_back("A has length " + std::to_string(a.size()) +
                                    " but W is " + std::to_string(n) + "x" +
                                    std::to_string(n));
    }
    if (w.rows() == w.cols() && x0.rows() != n) {
        report.violations.push_back("X0 has " + std::to_string(x0.rows()) +
                                    " rows but W is " + std::to_string(n) +
                                    "x" + std::to_string(n));
    }
    return report;
}

InfluenceMatrix InfluenceMatrix::from_matrix(Matrix w) {
    auto violations = influence_violations(w);
    if (!violations.empty()) {
        std::string msg = "invalid influence matrix:";
        for (const auto& v : violations) msg += " " + v + ";";
        throw std::invalid_argument(msg);
    }
    double adjustment = 0.0;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        const double sum = w.row(i).sum();
        const double dev = std::abs(sum - 1.0);
        if (dev > 0.0) {
            w.row(i) /= sum;
            adjustment = std::max(adjustment, dev);
        }
    }
    return InfluenceMatrix(std::move(w), adjustment);
}

DampingMatrix DampingMatrix::from_diagonal(Vector a) {
    auto violations = damping_violations(a);
    if (!violations.empty()) {
        std::string msg = "invalid damping values:";
        for (const auto& v : violations) msg += " " + v + ";";
        throw std::invalid_argument(msg);
    }
    return DampingMatrix(std::move(a));
}

DampingMatrix DampingMatrix::uniform(Eigen::Index n, double a) {
    return from_diagonal(Vector::Constant(n, a));
}

bool DampingMatrix::is_zero() const { return (a_.array() == 0.0).all(); }

bool DampingMatrix::is_identity() const { return (a_.array() == 1.0).all(); }

bool DampingMatrix::any_identity_entry() const {
    return (a_.array() == 1.0).any();
}

bool DampingMatrix::strictly_interior() const {
    return (a_.array() > 0.0).all() && (a_.array() < 1.0).all();
}

BoundingBox bounding_box(const StateMatrix& x) {
    if (x.rows() == 0 || x.cols() == 0)
        throw std::invalid_argument("empty state");
    return BoundingBox{x.colwise().minCoeff(), x.colwise().maxCoeff()};
}

bool contains(const BoundingBox& box, const StateMatrix& x, double tol) {
    if (box.lo.size() != x.cols())
        throw std::invalid_argument("box has " + std::to_string(box.lo.size()) +
                                    " dimensions but state has " +
                                    std::to_string(x.cols()) + " columns");
    for (Eigen::Index h = 0; h < x.cols(); ++h) {
        if ((x.col(h).array() < box.lo(h) - tol).any()) return false;
        if ((x.col(h).array() > box.hi(h) + tol).any()) return false;
    }
    return true;
}

}  // namespace polydyn
