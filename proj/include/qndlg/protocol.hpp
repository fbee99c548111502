#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "qndlg/lgi.hpp"
#include "qndlg/pool.hpp"
#include "qndlg/sequence.hpp"

namespace qndlg {

// Exhaustive mask search is exact up to this sequence length.
inline constexpr int kMaxOptimizedSlots = 12;

// Masks are packed with slot 1 in the most significant used bit, so ascending
// integer order is lexicographic order over (slot1, ..., slotn) with
// "not fired" < "fired". All tie-breaks below rely on that.
inline bool mask_has_slot(std::uint32_t mask, int n_slots, int slot) {
  return (mask >> (n_slots - slot)) & 1u;
}

inline std::vector<bool> mask_to_performed(std::uint32_t mask, int n_slots) {
  std::vector<bool> v(static_cast<std::size_t>(n_slots));
  for (int slot = 1; slot <= n_slots; ++slot)
    v[static_cast<std::size_t>(slot - 1)] = mask_has_slot(mask, n_slots, slot);
  return v;
}

inline std::uint32_t mask_from_slots(const std::vector<int>& slots,
                                     int n_slots) {
  std::uint32_t m = 0;
  for (int s : slots) m |= 1u << (n_slots - s);
  return m;
}

inline std::string mask_to_string(std::uint32_t mask, int n_slots) {
  std::string s(static_cast<std::size_t>(n_slots), '0');
  for (int slot = 1; slot <= n_slots; ++slot)
    if (mask_has_slot(mask, n_slots, slot))
      s[static_cast<std::size_t>(slot - 1)] = '1';
  return s;
}

// Minimum dichotomized correlator for every slot pair, each over all
// performed-masks that contain the pair. A mask fired before or between two
// readouts changes their joint statistics (shared back-action noise,
// scattering decoherence), so each pair gets its own optimal schedule; this
// sequence dependence is the entire source of K_n < 0.
struct PairOptima {
  int n_slots = 0;
  Eigen::MatrixXd cmin;              // symmetric, diagonal fixed at 1
  std::vector<std::uint32_t> masks;  // argmin mask per pair, row-major n x n

  std::uint32_t mask_for(int i, int j) const {
    return masks[static_cast<std::size_t>((i - 1) * n_slots + (j - 1))];
  }
};

inline PairOptima optimize_pairs(int n_slots, double theta,
                                 const PhysicalParams& p, bool back_action_on,
                                 bool scattering_on) {
  if (n_slots < 2) throw ParameterError("pair optimization needs >= 2 slots");
  if (n_slots > kMaxOptimizedSlots)
    throw ParameterError("exhaustive mask search is capped at 12 slots");
  PairOptima po;
  po.n_slots = n_slots;
  po.cmin = Eigen::MatrixXd::Constant(n_slots, n_slots, 2.0);
  po.cmin.diagonal().setOnes();
  po.masks.assign(static_cast<std::size_t>(n_slots) * n_slots, 0);
  SequenceSpec spec;
  spec.n_slots = n_slots;
  spec.theta = theta;
  spec.back_action_on = back_action_on;
  spec.scattering_on = scattering_on;
  const std::uint32_t mask_end = 1u << n_slots;
  for (std::uint32_t mask = 0; mask < mask_end; ++mask) {
    if (std::popcount(mask) < 2) continue;
    spec.performed = mask_to_performed(mask, n_slots);
    const MeasurementRecord rec = run_sequence(spec, p);
    const int m = rec.size();
    for (int r = 0; r < m; ++r)
      for (int c = r + 1; c < m; ++c) {
        const int i = rec.labels[static_cast<std::size_t>(r)];
        const int j = rec.labels[static_cast<std::size_t>(c)];
        const double v =
            corr_sign(rec.gamma_y(r, r), rec.gamma_y(r, c), rec.gamma_y(c, c));
        if (v < po.cmin(i - 1, j - 1)) {
          po.cmin(i - 1, j - 1) = po.cmin(j - 1, i - 1) = v;
          po.masks[static_cast<std::size_t>((i - 1) * n_slots + (j - 1))] =
              po.masks[static_cast<std::size_t>((j - 1) * n_slots + (i - 1))] =
                  mask;
        }
      }
  }
  return po;
}

inline LgiResult k_n_optimized(const PairOptima& po) { return k_n(po.cmin); }

struct TripleResult {
  double k3 = 0.0;
  std::array<int, 3> triple{};
  std::array<std::uint32_t, 3> masks{};  // schedules for (a,b), (b,c), (a,c)
};

// Best K_3 = C_ab + C_bc + C_ac + 1 over all triples a < b < c, each pair
// correlator already minimized over its own schedule. Ties resolve to the
// lexicographically smallest triple; pair schedules are the lexicographically
// smallest argmin masks.
inline TripleResult optimize_triple(int n_slots, double theta,
                                    const PhysicalParams& p,
                                    bool back_action_on, bool scattering_on) {
  if (n_slots < 3) throw ParameterError("triple optimization needs >= 3 slots");
  const PairOptima po =
      optimize_pairs(n_slots, theta, p, back_action_on, scattering_on);
  TripleResult best;
  bool have = false;
  for (int a = 1; a <= n_slots - 2; ++a)
    for (int b = a + 1; b <= n_slots - 1; ++b)
      for (int c = b + 1; c <= n_slots; ++c) {
        const double v = po.cmin(a - 1, b - 1) + po.cmin(b - 1, c - 1) +
                         po.cmin(a - 1, c - 1) + 1.0;
        if (!have || v < best.k3) {
          have = true;
          best.k3 = v;
          best.triple = {a, b, c};
          best.masks = {po.mask_for(a, b), po.mask_for(b, c),
                        po.mask_for(a, c)};
        }
      }
  return best;
}

// How sweep rows turn a schedule into K'_n:
//   optimized    per-pair schedule optimization as above (the protocol the
//                violation results use)
//   as_performed one run of the template's fixed mask, all correlators from
//                that single record (any such K_n is provably >= 0: the sign
//                vector of one joint Gaussian has a joint +-1 distribution)
//   pair_only    each pair fired alone, no other light
enum class MaskSemantics { optimized, as_performed, pair_only };

inline MaskSemantics parse_mask_semantics(const std::string& s) {
  if (s == "optimized") return MaskSemantics::optimized;
  if (s == "as_performed") return MaskSemantics::as_performed;
  if (s == "pair_only") return MaskSemantics::pair_only;
  throw ParameterError(
      "mask semantics must be optimized, as_performed, or pair_only");
}

struct SweepRow {
  double theta = 0.0;
  int n = 0;
  double k_value = 0.0;
  double k_reduced = 0.0;
  bool back_action = true;
  bool scattering = true;
};

inline std::vector<SweepRow> sweep_theta(
    const SequenceSpec& tmpl, const PhysicalParams& p,
    const std::vector<double>& grid,
    MaskSemantics semantics = MaskSemantics::optimized) {
  if (grid.empty()) throw ParameterError("empty theta grid");
  const int n = tmpl.n_slots;
  if (n < 3) throw ParameterError("LGI sweeps need n_slots >= 3");
  std::vector<SweepRow> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t gi) {
    const double theta = grid[gi];
    LgiResult res;
    switch (semantics) {
      case MaskSemantics::optimized:
        res = k_n_optimized(optimize_pairs(n, theta, p, tmpl.back_action_on,
                                           tmpl.scattering_on));
        break;
      case MaskSemantics::as_performed: {
        SequenceSpec spec = tmpl;
        spec.theta = theta;
        res = k_n(pairwise_correlators(run_sequence(spec, p)));
        break;
      }
      case MaskSemantics::pair_only: {
        Eigen::MatrixXd C = Eigen::MatrixXd::Identity(n, n);
        SequenceSpec spec = tmpl;
        spec.theta = theta;
        for (int i = 1; i <= n; ++i)
          for (int j = i + 1; j <= n; ++j) {
            spec.performed.assign(static_cast<std::size_t>(n), false);
            spec.performed[static_cast<std::size_t>(i - 1)] = true;
            spec.performed[static_cast<std::size_t>(j - 1)] = true;
            const MeasurementRecord rec = run_sequence(spec, p);
            C(i - 1, j - 1) = C(j - 1, i - 1) = corr_sign(
                rec.gamma_y(0, 0), rec.gamma_y(0, 1), rec.gamma_y(1, 1));
          }
        res = k_n(C);
        break;
      }
    }
    rows[gi] = {theta,          res.n,
                res.k_value,    res.k_reduced,
                tmpl.back_action_on, tmpl.scattering_on};
  });
  return rows;
}

struct TripleRow {
  double theta = 0.0;
  int n = 0;
  TripleResult result;
  bool back_action = true;
  bool scattering = true;
};

inline std::vector<TripleRow> sweep_triple(int n_slots,
                                           const PhysicalParams& p,
                                           const std::vector<double>& grid,
                                           bool back_action_on,
                                           bool scattering_on) {
  if (grid.empty()) throw ParameterError("empty theta grid");
  std::vector<TripleRow> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t gi) {
    rows[gi] = {grid[gi], n_slots,
                optimize_triple(n_slots, grid[gi], p, back_action_on,
                                scattering_on),
                back_action_on, scattering_on};
  });
  return rows;
}

struct AuditResult {
  double mean_diff = 0.0;
  double var_diff = 0.0;
};

// Two identical pulses in rapid succession (zero rotation between them).
// An ideal QND chain leaves J_z untouched, so both readouts agree in mean and
// variance; scattering between the pulses shows up as a variance difference.
inline AuditResult disturbance_audit(const PhysicalParams& p,
                                     bool back_action_on) {
  const SequenceSpec spec = all_performed(2, 0.0, back_action_on, true);
  const MeasurementRecord rec = run_sequence(spec, p);
  return {rec.mu(1) - rec.mu(0), rec.gamma_y(1, 1) - rec.gamma_y(0, 0)};
}

}  // namespace qndlg
