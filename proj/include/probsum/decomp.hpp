#pragma once

#include <Eigen/Core>

#include "probsum/summation.hpp"

namespace probsum {

/// Order-j decomposition of the forward error of a trace: terms(k-1, j-1)
/// holds S_k^(j), the sum of all monomials of degree j in d_2..d_k of E_k,
/// so that sum_j S_n^(j) = E_n. S_k^(j) = 0 whenever j >= k.
struct OrderDecomposition {
  Eigen::MatrixXd terms;  // n rows, max_order columns

  Eigen::Index n() const { return terms.rows(); }
  Eigen::Index max_order() const { return terms.cols(); }

  /// 1-based accessor: S_k^(j).
  double term(Eigen::Index k, Eigen::Index j) const { return terms(k - 1, j - 1); }

  /// sum_j S_k^(j) over the stored orders.
  double order_sum(Eigen::Index k) const { return terms.row(k - 1).sum(); }
};

/// Order terms via the recurrences
///   S_k^(1) = S_{k-1}^(1) + d_k s_k,  S_k^(j) = S_{k-1}^(j) + d_k S_{k-1}^(j-1),
/// in carrier precision, for j = 1..max_order. Requires 1 <= max_order <= n-1.
OrderDecomposition decompose(const SummationTrace& trace, Eigen::Index max_order);

/// Independent oracle: expands every term s_k d_k prod_{j>k}(1 + d_j) of the
/// forward-error identity over all subsets of {k+1..end} and buckets the
/// monomials by degree, for every prefix end <= n. Exponential cost; n <= 20.
OrderDecomposition brute_force_orders(const SummationTrace& trace);

/// Residual of the unraveled (hockey-stick style) identities
///   S_k^(1) = sum_{i=2}^k d_i s_i,  S_k^(j) = sum_{i=2}^k d_i S_{i-1}^(j-1),
/// evaluated with compensated accumulation; returns the max absolute residual
/// over all (k, j) present in `dec`.
double check_hockey_stick(const OrderDecomposition& dec, const SummationTrace& trace);

}  // namespace probsum
