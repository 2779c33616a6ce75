#include "polydyn/centrality.hpp"

#include "polydyn/structure.hpp"

#include <Eigen/LU>

#include <sstream>
#include <stdexcept>

namespace polydyn {

Vector net_influence(const Matrix& v) {
    if (v.rows() != v.cols() || v.rows() == 0)
        throw std::invalid_argument("limit matrix must be square and nonempty");
    const double row_dev = (v.rowwise().sum().array() - 1.0).abs().maxCoeff();
    if (row_dev > 1e-10 || v.minCoeff() < -1e-10)
        throw std::invalid_argument(
            "limit matrix is not row-stochastic within 1e-10");
    return v.colwise().sum().transpose() / static_cast<double>(v.rows());
}

Vector alpha_centrality(const InfluenceMatrix& w, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must lie strictly inside (0,1)");
    const Eigen::Index n = w.size();
    const Matrix system =
        Matrix::Identity(n, n) - alpha * w.matrix().transpose();
    Eigen::PartialPivLU<Matrix> lu(system);
    Vector r = lu.solve(Vector::Ones(n));
    r += lu.solve(Vector::Ones(n) - system * r);
    return r * ((1.0 - alpha) / static_cast<double>(n));
}

Vector perron_centrality(const InfluenceMatrix& w) {
    const StructureClass sc = structure_class(w);
    if (sc.connectivity != Connectivity::Strong || !sc.aperiodic) {
        std::ostringstream os;
        os << "left Perron eigenvector requires an irreducible aperiodic "
              "structure; this one is "
           << to_string(sc.connectivity);
        if (sc.connectivity == Connectivity::Strong && !sc.aperiodic)
            os << " with period " << sc.terminal_periods.front();
        throw std::invalid_argument(os.str());
    }
    const Eigen::Index n = w.size();
    const Matrix wt = w.matrix().transpose();
    Vector r = Vector::Constant(n, 1.0 / static_cast<double>(n));
    for (int it = 0; it < 100000; ++it) {
        Vector next = wt * r;
        next /= next.sum();  // guard against drift; the sum is 1 in exact math
        const double change = (next - r).cwiseAbs().sum();
        r = std::move(next);
        if (change < 1e-12) break;
    }
    return r;
}

}  // namespace polydyn
