#include "probsum/decomp.hpp"

#include <cmath>
#include <cstdint>
#include <string>

namespace probsum {

OrderDecomposition decompose(const SummationTrace& trace, Eigen::Index max_order) {
  const Eigen::Index n = trace.size();
  if (max_order < 1 || max_order > n - 1)
    throw OrderRangeError("decompose: max_order must be in [1, n-1], got " +
                          std::to_string(max_order) + " with n = " + std::to_string(n));
  Eigen::MatrixXd terms = Eigen::MatrixXd::Zero(n, max_order);
  for (Eigen::Index k = 2; k <= n; ++k) {
    const double d = trace.delta[k - 1];
    terms(k - 1, 0) = terms(k - 2, 0) + d * trace.exact_partial[k - 1];
    for (Eigen::Index j = 2; j <= max_order; ++j)
      terms(k - 1, j - 1) = terms(k - 2, j - 1) + d * terms(k - 2, j - 2);
  }
  return {terms};
}

OrderDecomposition brute_force_orders(const SummationTrace& trace) {
  const Eigen::Index n = trace.size();
  if (n > 20)
    throw SizeError("brute_force_orders: subset expansion needs n <= 20, got " +
                    std::to_string(n));
  Eigen::MatrixXd terms = Eigen::MatrixXd::Zero(n, std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index end = 2; end <= n; ++end) {
    for (Eigen::Index k = 2; k <= end; ++k) {
      const int tail = static_cast<int>(end - k);  // elements {k+1, ..., end}
      const double base = trace.exact_partial[k - 1] * trace.delta[k - 1];
      for (std::uint32_t mask = 0; mask < (1u << tail); ++mask) {
        double monomial = base;
        int order = 1;
        for (int b = 0; b < tail; ++b) {
          if (mask >> b & 1u) {
            monomial *= trace.delta[k + b];  // d_{k+1+b}, 0-based index k+b
            ++order;
          }
        }
        terms(end - 1, order - 1) += monomial;
      }
    }
  }
  return {terms};
}

double check_hockey_stick(const OrderDecomposition& dec, const SummationTrace& trace) {
  const Eigen::Index n = dec.n();
  if (n != trace.size())
    throw DomainError("check_hockey_stick: decomposition does not match trace length");
  double max_residual = 0.0;
  for (Eigen::Index j = 1; j <= dec.max_order(); ++j) {
    double sum = 0.0, comp = 0.0;  // Kahan, to decouple from the plain recurrence
    for (Eigen::Index k = 2; k <= n; ++k) {
      const double term = (j == 1)
                              ? trace.delta[k - 1] * trace.exact_partial[k - 1]
                              : trace.delta[k - 1] * dec.terms(k - 2, j - 2);
      const double y = term - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
      max_residual = std::max(max_residual, std::abs(sum - dec.terms(k - 1, j - 1)));
    }
  }
  return max_residual;
}

}  // namespace probsum
