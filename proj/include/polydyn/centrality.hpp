#ifndef POLYDYN_CENTRALITY_HPP
#define POLYDYN_CENTRALITY_HPP

#include "polydyn/types.hpp"

namespace polydyn {

/// Average relative net influence r = (1/n) V^T 1 of each node: the column
/// means of a limit matrix. Entries sum to 1. Throws std::invalid_argument
/// when V is not row-stochastic within 1e-10.
Vector net_influence(const Matrix& v);

/// The A = alpha I special case, r = ((1-alpha)/n) (I - alpha W^T)^{-1} 1,
/// by a direct solve. Satisfies the fixed point
/// r = (1-alpha)/n + alpha W^T r. Requires 0 < alpha < 1.
Vector alpha_centrality(const InfluenceMatrix& w, double alpha);

/// L1-normalized left eigenvector of W for eigenvalue 1 (the common row of
/// lim W^k), by power iteration on W^T. Requires an irreducible aperiodic W;
/// throws std::invalid_argument with a structural diagnosis otherwise.
Vector perron_centrality(const InfluenceMatrix& w);

}  // namespace polydyn

#endif
