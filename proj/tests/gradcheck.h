// Test-only helpers: central finite-difference gradient oracle and SNR.

#ifndef MSVOC_TESTS_GRADCHECK_H_
#define MSVOC_TESTS_GRADCHECK_H_

#include <cmath>
#include <functional>

#include "msvoc/autograd.h"

namespace msvoc_test {

// Numeric gradient of a scalar-valued graph builder with respect to leaf x.
// The builder is re-run per perturbation, so it must be deterministic.
inline Eigen::MatrixXd numeric_grad(
    const std::function<double(const msvoc::ag::Var&)>& f,
    const msvoc::ag::Var& x, double eps = 1e-5) {
  Eigen::MatrixXd g(x->value.rows(), x->value.cols());
  for (Eigen::Index i = 0; i < x->value.rows(); ++i) {
    for (Eigen::Index j = 0; j < x->value.cols(); ++j) {
      const double orig = x->value(i, j);
      x->value(i, j) = orig + eps;
      const double fp = f(x);
      x->value(i, j) = orig - eps;
      const double fm = f(x);
      x->value(i, j) = orig;
      g(i, j) = (fp - fm) / (2.0 * eps);
    }
  }
  return g;
}

// Worst-case relative disagreement; tiny gradients compare absolutely.
inline double max_rel_err(const Eigen::MatrixXd& analytic,
                          const Eigen::MatrixXd& numeric) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < analytic.rows(); ++i) {
    for (Eigen::Index j = 0; j < analytic.cols(); ++j) {
      const double a = analytic(i, j), n = numeric(i, j);
      const double denom = std::max(std::abs(a), std::abs(n));
      const double err =
          denom < 1e-7 ? std::abs(a - n) : std::abs(a - n) / denom;
      worst = std::max(worst, err);
    }
  }
  return worst;
}

inline double snr_db(const std::vector<double>& ref,
                     const std::vector<double>& test, int test_delay) {
  double sig = 0.0, noise = 0.0;
  const std::size_t n = std::min(ref.size(), test.size() - test_delay);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ref[i];
    const double e = r - test[i + test_delay];
    sig += r * r;
    noise += e * e;
  }
  if (noise == 0.0) return 300.0;
  return 10.0 * std::log10(sig / noise);
}

}  // namespace msvoc_test

#endif  // MSVOC_TESTS_GRADCHECK_H_
