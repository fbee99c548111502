#pragma once

#include <Eigen/Dense>

#include "qndlg/error.hpp"
#include "qndlg/params.hpp"

namespace qndlg {

// Joint Gaussian state of the collective spin and the probe pulses.
// Variable order in mean/cov:
//   (J_y, J_z, S_y^(1), S_z^(1), ..., S_y^(n), S_z^(n))
// J_x and S_x are macroscopic and enter only as the classical scalars jx, sx
// multiplying the linearized coupling. Pulse modes are consumed strictly in
// order; pulses_used counts how many have interacted.
struct CollectiveState {
  int n_slots = 0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  double jx = 0.0;
  double sx = 0.0;
  int pulses_used = 0;

  int dim() const { return 2 + 2 * n_slots; }

  // pulse is 1-based
  static int sy_index(int pulse) { return 2 + 2 * (pulse - 1); }
  static int sz_index(int pulse) { return 3 + 2 * (pulse - 1); }
};

inline CollectiveState init_state(const PhysicalParams& p, int n_slots) {
  p.validate();
  if (n_slots < 1) throw ParameterError("n_slots must be >= 1");
  CollectiveState st;
  st.n_slots = n_slots;
  const int d = st.dim();
  st.mean = Eigen::VectorXd::Zero(d);
  st.cov = Eigen::MatrixXd::Zero(d, d);
  st.cov(0, 0) = st.cov(1, 1) = p.n_atoms / 2.0;
  for (int i = 1; i <= n_slots; ++i) {
    st.cov(CollectiveState::sy_index(i), CollectiveState::sy_index(i)) =
        p.n_photons / 4.0;
    st.cov(CollectiveState::sz_index(i), CollectiveState::sz_index(i)) =
        p.n_photons / 4.0;
  }
  st.jx = p.n_atoms;
  st.sx = p.n_photons / 2.0;
  return st;
}

inline double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m,
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// PSD within the tolerance used throughout: smallest eigenvalue may dip to
// -tol_scale * trace from accumulated rounding.
inline bool psd_within_tolerance(const Eigen::MatrixXd& cov,
                                 double tol_scale = 1e-9) {
  return min_eigenvalue(cov) >= -tol_scale * cov.trace();
}

inline bool symmetric_to_machine(const Eigen::MatrixXd& m,
                                 double scale_tol = 1e-12) {
  const double scale = m.cwiseAbs().maxCoeff();
  return (m - m.transpose()).cwiseAbs().maxCoeff() <=
         scale_tol * (scale > 0 ? scale : 1.0);
}

// Collective-spin uncertainty relation var(J_y) var(J_z) >= jx^2/4.
inline bool uncertainty_ok(const CollectiveState& st, double rel_tol = 1e-9) {
  const double prod = st.cov(0, 0) * st.cov(1, 1);
  const double bound = st.jx * st.jx / 4.0;
  return prod >= bound * (1.0 - rel_tol);
}

}  // namespace qndlg
