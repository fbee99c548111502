#pragma once

#include <cmath>

#include "qndlg/state.hpp"

namespace qndlg {

// The three primitives below update cov as G <- M G M^T for the linear map M
// of the primitive, touching only the rows and columns M acts on. Row pass
// first, then the matching column pass; every updated row reads only rows M
// leaves unchanged, so the sequential passes realize the simultaneous map.

// Magnetic precession about x by theta:
//   J_y -> J_y cos(theta) - J_z sin(theta)
//   J_z -> J_y sin(theta) + J_z cos(theta)
// Light modes and jx are untouched.
inline void rotate_in_place(CollectiveState& st, double theta) {
  if (!std::isfinite(theta)) throw ParameterError("theta must be finite");
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::MatrixXd& G = st.cov;
  const int d = st.dim();
  for (int k = 0; k < d; ++k) {
    const double a = G(0, k), b = G(1, k);
    G(0, k) = c * a - s * b;
    G(1, k) = s * a + c * b;
  }
  for (int k = 0; k < d; ++k) {
    const double a = G(k, 0), b = G(k, 1);
    G(k, 0) = c * a - s * b;
    G(k, 1) = s * a + c * b;
  }
  const double m0 = st.mean(0), m1 = st.mean(1);
  st.mean(0) = c * m0 - s * m1;
  st.mean(1) = s * m0 + c * m1;
}

// QND interaction with pulse pulse_index (must be pulses_used + 1):
//   S_y^(i) += g sx J_z                      (readout)
//   J_y     += g jx S_z^(i)  iff back action (conjugate-variable noise)
// J_z commutes with the interaction and is exactly unchanged.
inline void qnd_update_in_place(CollectiveState& st, const PhysicalParams& p,
                                int pulse_index, bool back_action_on) {
  if (pulse_index != st.pulses_used + 1)
    throw SequencingError("pulses must fire in order");
  if (pulse_index > st.n_slots)
    throw SequencingError("no pulse modes left in this state");
  const int sy = CollectiveState::sy_index(pulse_index);
  const int sz = CollectiveState::sz_index(pulse_index);
  const double a = p.g * st.sx;
  const double b = p.g * st.jx;
  Eigen::MatrixXd& G = st.cov;
  const int d = st.dim();
  for (int k = 0; k < d; ++k) G(sy, k) += a * G(1, k);
  if (back_action_on)
    for (int k = 0; k < d; ++k) G(0, k) += b * G(sz, k);
  for (int k = 0; k < d; ++k) G(k, sy) += a * G(k, 1);
  if (back_action_on)
    for (int k = 0; k < d; ++k) G(k, 0) += b * G(k, sz);
  st.mean(sy) += a * st.mean(1);
  if (back_action_on) st.mean(0) += b * st.mean(sz);
  st.pulses_used += 1;
}

// Scattering loss from one pulse traversal. With chi = exp(-eta N_L):
//   atomic block  -> chi^2 block + N_A (1-chi)(chi/2 + 2/3) I
//   atom-light cross covariances and atomic means -> scaled by chi
//   light blocks untouched
// jx is the linearization constant J_x ~ N_A of the small-angle coupling and
// is held at its initial value; only the fluctuation statistics decay.
inline void loss_update_in_place(CollectiveState& st,
                                 const PhysicalParams& p) {
  const double chi = p.chi();
  if (chi == 1.0) return;
  const double chi2 = chi * chi;
  const double noise =
      p.n_atoms * (1.0 - chi) * (chi / 2.0 + 2.0 / 3.0);
  Eigen::MatrixXd& G = st.cov;
  const int d = st.dim();
  G(0, 0) = chi2 * G(0, 0) + noise;
  G(1, 1) = chi2 * G(1, 1) + noise;
  G(0, 1) *= chi2;
  G(1, 0) *= chi2;
  for (int k = 2; k < d; ++k) {
    G(0, k) *= chi;
    G(k, 0) *= chi;
    G(1, k) *= chi;
    G(k, 1) *= chi;
  }
  st.mean(0) *= chi;
  st.mean(1) *= chi;
}

// One probe pulse: QND interaction, then loss if scattering is on.
inline void pulse_step_in_place(CollectiveState& st, const PhysicalParams& p,
                                bool back_action_on, bool scattering_on) {
  qnd_update_in_place(st, p, st.pulses_used + 1, back_action_on);
  if (scattering_on) loss_update_in_place(st, p);
}

// Value-semantics wrappers; state values are freely copyable between workers.
inline CollectiveState rotate(CollectiveState st, double theta) {
  rotate_in_place(st, theta);
  return st;
}

inline CollectiveState qnd_update(CollectiveState st, const PhysicalParams& p,
                                  int pulse_index, bool back_action_on) {
  qnd_update_in_place(st, p, pulse_index, back_action_on);
  return st;
}

inline CollectiveState loss_update(CollectiveState st,
                                   const PhysicalParams& p) {
  loss_update_in_place(st, p);
  return st;
}

inline CollectiveState pulse_step(CollectiveState st, const PhysicalParams& p,
                                  bool back_action_on, bool scattering_on) {
  pulse_step_in_place(st, p, back_action_on, scattering_on);
  return st;
}

}  // namespace qndlg
