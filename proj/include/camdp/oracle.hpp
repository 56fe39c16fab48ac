#pragma once

#include <optional>
#include <string>
#include <vector>

#include "camdp/coadapt.hpp"
#include "camdp/model.hpp"
#include "camdp/policy.hpp"

namespace camdp {

// Scalar used to rank joint policies.
struct Criterion {
  enum class Kind { kGain, kDiscounted };

  Kind kind = Kind::kGain;
  double gamma = 0.0;
  // kDiscounted: value at this augmented state, or the stationary-weighted
  // mean of V when empty.
  std::optional<int> state;

  static Criterion gain() { return {}; }
  static Criterion discounted(double gamma, std::optional<int> state = {}) {
    return {Kind::kDiscounted, gamma, state};
  }

  std::string describe() const;
  bool operator==(const Criterion&) const = default;
};

// Evaluates `policy` under `criterion`. Discounted values come from value
// iteration at tolerance 1e-12, so they are an independent route from the
// direct solver used everywhere else.
double criterion_value(const FactoredCaMDP& model, const JointPolicy& policy,
                       const Criterion& criterion);

struct PolicyValue {
  JointPolicy policy;
  double value = 0.0;
};

struct BruteForceResult {
  JointPolicy best;
  double value = 0.0;
  std::vector<PolicyValue> table;  // ascending policy number
};

// Exhaustive search over enumerate_all(); ties go to the lowest number.
BruteForceResult brute_force_optimal(const FactoredCaMDP& model,
                                     const Criterion& criterion,
                                     std::uint64_t cap = kDefaultPolicyCap);

struct CalibrationTarget {
  JointPolicy policy;
  double value = 0.0;
};

// The five reference rows for the 2x2x2 example model:
// [1111][1111] 0.180, [0111][1100] 0.187, [0001][1100] 0.207,
// [0000][1100] 0.210, [1010][1110] 0.196.
std::vector<CalibrationTarget> reference_targets(const FactoredCaMDP& model);

struct CalibrationEntry {
  RewardMode mode = RewardMode::kProduct;
  Criterion criterion;
  std::vector<double> values;
  std::vector<double> errors;  // |value - target|
  double max_error = 0.0;
  // Every strictly ordered pair of targets is ordered the same way here.
  bool ordering_matches = false;
};

struct CalibrationReport {
  std::vector<CalibrationTarget> targets;
  std::vector<CalibrationEntry> entries;  // full grid, in search order
  std::size_t best = 0;                   // index into entries

  const CalibrationEntry& best_entry() const { return entries[best]; }
  // Lowest max error among entries with the given mode.
  const CalibrationEntry& best_for(RewardMode mode) const;
  std::string to_json(int indent = 2) const;
};

inline constexpr double kCalibrationGammas[] = {0.5, 0.9, 0.98, 0.99};

// Grid search over reward mode x {gain, discounted at kCalibrationGammas}
// minimizing the max absolute error against `targets`.
CalibrationReport calibrate(const FactoredCaMDP& model,
                            const std::vector<CalibrationTarget>& targets);

// The model with the best entry's reward mode (and gamma, if discounted).
FactoredCaMDP apply_calibration(const FactoredCaMDP& model,
                                const CalibrationReport& report);

struct EtaScanRow {
  double eta = 0.0;
  CoadaptStatus status = CoadaptStatus::kRunning;
  int period = 0;
  int rounds = 0;
  JointPolicy final_policy;
  double final_value = 0.0;            // stationary-weighted mean of V
  std::vector<JointPolicy> cycle;      // when cycling
  std::vector<JointPolicy> responses;  // response_pairs() when cycling

  // "converged:13", "cycling:15,173", "max_iters:29"
  std::string outcome() const;
};

// Runs run_coadapt once per eta (non-increasing grid) with agent 0 on
// revised(eta); agent 1 and every other setting come from `config`.
std::vector<EtaScanRow> eta_band_scan(const FactoredCaMDP& model,
                                      const JointPolicy& init,
                                      const std::vector<double>& etas,
                                      const CoadaptConfig& config);

struct BandEdge {
  double eta = 0.0;  // outcome changes between eta (inclusive above) and below
  std::string above;
  std::string below;
};

// Locates each outcome change between adjacent scan rows by bisection.
std::vector<BandEdge> refine_band_edges(const FactoredCaMDP& model,
                                        const JointPolicy& init,
                                        const std::vector<EtaScanRow>& rows,
                                        const CoadaptConfig& config,
                                        int bisections = 50);

// Log-spaced descending grid from hi to lo with `points` entries.
std::vector<double> log_grid(double hi, double lo, int points);

}  // namespace camdp
