#pragma once

#include <cmath>

#include "qndlg/error.hpp"

namespace qndlg {

// Atom-light parameters of the probing chain. Each probe pulse is fresh
// (n_photons per pulse, never attenuated); eta controls how many atoms
// scatter a photon while a pulse traverses the ensemble.
struct PhysicalParams {
  double g = 1e-7;         // dimensionless coupling per pulse
  double n_atoms = 1e6;    // N_A
  double n_photons = 5e8;  // N_L per pulse
  double eta = 0.5e-9;     // per-photon scattering parameter

  // Fraction of atoms left unscattered by a single pulse.
  double chi() const { return std::exp(-eta * n_photons); }

  void validate() const {
    if (!(n_atoms > 0) || !std::isfinite(n_atoms))
      throw ParameterError("n_atoms must be a positive number");
    if (!(n_photons > 0) || !std::isfinite(n_photons))
      throw ParameterError("n_photons must be a positive number");
    if (!std::isfinite(g)) throw ParameterError("g must be finite");
    if (!(eta >= 0) || !std::isfinite(eta))
      throw ParameterError("eta must be >= 0");
  }
};

}  // namespace qndlg
