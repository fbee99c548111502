#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "qndlg/error.hpp"
#include "qndlg/record.hpp"

namespace qndlg {

// Sign correlator of a zero-mean bivariate Gaussian with variances a, c and
// covariance b:
//   <sgn(y1) sgn(y2)> = (2/pi) asin(b / sqrt(a c))
// which equals (1 - 2 alpha/pi) sgn(b) with alpha = arctan(sqrt(ac/b^2 - 1)).
// The asin form stays well conditioned as |rho| -> 1. b = 0 returns 0.
inline double corr_sign(double a, double b, double c) {
  if (!(a > 0.0) || !(c > 0.0))
    throw DomainError("corr_sign needs positive variances");
  const double ac = a * c;
  if (b * b > ac * (1.0 + 1e-9))
    throw DomainError("corr_sign covariance exceeds the PSD bound");
  if (b == 0.0) return 0.0;
  const double rho = std::clamp(b / std::sqrt(ac), -1.0, 1.0);
  return (2.0 / std::numbers::pi) * std::asin(rho);
}

// Full symmetric correlator matrix of a record; diagonal is exactly 1.
inline Eigen::MatrixXd pairwise_correlators(const MeasurementRecord& rec) {
  rec.validate();
  const int n = rec.size();
  if (n < 2) throw ParameterError("pairwise correlators need >= 2 readouts");
  Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      const double v =
          corr_sign(rec.gamma_y(j, j), rec.gamma_y(i, j), rec.gamma_y(i, i));
      C(i, j) = C(j, i) = v;
    }
  return C;
}

struct LgiResult {
  int n = 0;
  Eigen::MatrixXd correlators;
  double k_value = 0.0;
  double k_reduced = 0.0;
};

// K_n = sum_{j<i} C_ij + floor(n/2); macrorealism predicts K_n >= 0.
// K'_n = K_n / floor(n/2).
inline LgiResult k_n(const Eigen::MatrixXd& correlators) {
  const int n = static_cast<int>(correlators.rows());
  if (n < 3) throw ParameterError("K_n needs at least 3 measurements");
  if (correlators.cols() != n)
    throw ParameterError("correlator matrix must be square");
  LgiResult res;
  res.n = n;
  res.correlators = correlators;
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) sum += correlators(i, j);
  const double half = std::floor(n / 2.0);
  res.k_value = sum + half;
  res.k_reduced = res.k_value / half;
  return res;
}

// K_3 = C_ab + C_bc + C_ac + 1 for a triple of rows a < b < c (1-based).
inline double k3_triple(const Eigen::MatrixXd& correlators, int a, int b,
                        int c) {
  const int n = static_cast<int>(correlators.rows());
  if (!(1 <= a && a < b && b < c && c <= n))
    throw ParameterError("triple indices must satisfy 1 <= a < b < c <= n");
  return correlators(a - 1, b - 1) + correlators(b - 1, c - 1) +
         correlators(a - 1, c - 1) + 1.0;
}

}  // namespace qndlg
