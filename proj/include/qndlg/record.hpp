#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qndlg/error.hpp"
#include "qndlg/state.hpp"

namespace qndlg {

// Joint Gaussian statistics of a set of S_y readouts. labels carry the slot
// numbers (or pulse indices) the rows/columns refer to, in matrix order.
// Means are zero by construction of the protocols but kept explicit.
struct MeasurementRecord {
  std::vector<int> labels;
  Eigen::VectorXd mu;
  Eigen::MatrixXd gamma_y;

  int size() const { return static_cast<int>(labels.size()); }

  void validate() const {
    const int n = size();
    if (mu.size() != n || gamma_y.rows() != n || gamma_y.cols() != n)
      throw DomainError("record dimensions do not match label count");
    if (n == 0) return;
    if (!symmetric_to_machine(gamma_y))
      throw DomainError("readout covariance is not symmetric");
    for (int i = 0; i < n; ++i)
      if (!(gamma_y(i, i) > 0))
        throw DomainError("readout covariance has a non-positive diagonal");
    if (!psd_within_tolerance(gamma_y))
      throw DomainError("readout covariance is not positive semidefinite");
  }
};

// Submatrix of the state covariance over the S_y coordinates of the listed
// pulses (1-based pulse indices, in listed order).
inline MeasurementRecord readout_cov(const CollectiveState& st,
                                     const std::vector<int>& performed) {
  MeasurementRecord rec;
  const int n = static_cast<int>(performed.size());
  for (int idx : performed)
    if (idx < 1 || idx > st.pulses_used)
      throw SequencingError("readout requested for a pulse that never fired");
  rec.labels = performed;
  rec.mu = Eigen::VectorXd::Zero(n);
  rec.gamma_y = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    const int ir = CollectiveState::sy_index(performed[r]);
    rec.mu(r) = st.mean(ir);
    for (int c = 0; c < n; ++c)
      rec.gamma_y(r, c) = st.cov(ir, CollectiveState::sy_index(performed[c]));
  }
  return rec;
}

}  // namespace qndlg
