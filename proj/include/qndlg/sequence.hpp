#pragma once

#include <cmath>
#include <vector>

#include "qndlg/dynamics.hpp"
#include "qndlg/record.hpp"

namespace qndlg {

// One equally-spaced measurement schedule: n_slots time slots separated by a
// rotation of theta, a performed mask saying which slots fire a probe pulse,
// and the physics toggles. Slot 1 is measured at t = 0 before any rotation;
// skipped slots advance time (the rotation still happens) but fire no light
// and cause no scattering.
struct SequenceSpec {
  int n_slots = 0;
  double theta = 0.0;
  std::vector<bool> performed;
  bool back_action_on = true;
  bool scattering_on = true;

  int fired_count() const {
    int c = 0;
    for (bool b : performed) c += b ? 1 : 0;
    return c;
  }

  void validate() const {
    if (n_slots < 1) throw ParameterError("n_slots must be >= 1");
    if (static_cast<int>(performed.size()) != n_slots)
      throw ParameterError("performed mask length must equal n_slots");
    if (!std::isfinite(theta)) throw ParameterError("theta must be finite");
  }
};

inline SequenceSpec all_performed(int n_slots, double theta,
                                  bool back_action_on = true,
                                  bool scattering_on = true) {
  SequenceSpec s;
  s.n_slots = n_slots;
  s.theta = theta;
  s.performed.assign(static_cast<std::size_t>(n_slots), true);
  s.back_action_on = back_action_on;
  s.scattering_on = scattering_on;
  return s;
}

// Runs the schedule and returns the joint readout statistics of the fired
// slots, labeled by slot number in firing order.
inline MeasurementRecord run_sequence(const SequenceSpec& spec,
                                      const PhysicalParams& p) {
  spec.validate();
  const int n_fired = spec.fired_count();
  if (n_fired < 2)
    throw ParameterError("a sequence needs at least 2 performed slots");
  CollectiveState st = init_state(p, n_fired);
  std::vector<int> fired_slots;
  fired_slots.reserve(static_cast<std::size_t>(n_fired));
  std::vector<int> pulse_order;
  pulse_order.reserve(static_cast<std::size_t>(n_fired));
  for (int slot = 1; slot <= spec.n_slots; ++slot) {
    if (slot > 1) rotate_in_place(st, spec.theta);
    if (spec.performed[static_cast<std::size_t>(slot - 1)]) {
      pulse_step_in_place(st, p, spec.back_action_on, spec.scattering_on);
      fired_slots.push_back(slot);
      pulse_order.push_back(st.pulses_used);
    }
  }
  MeasurementRecord rec = readout_cov(st, pulse_order);
  rec.labels = fired_slots;
  return rec;
}

}  // namespace qndlg
