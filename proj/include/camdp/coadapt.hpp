#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "camdp/improve.hpp"
#include "camdp/model.hpp"
#include "camdp/policy.hpp"

namespace camdp {

struct ImproverSpec {
  enum class Kind { kClassical, kRevised, kPiAlike };

  Kind kind = Kind::kClassical;
  double eta = 0.0;       // kRevised
  PiAlikeParams pi_alike; // kPiAlike

  static ImproverSpec classical() { return {}; }
  static ImproverSpec revised(double eta) { return {Kind::kRevised, eta, {}}; }
  static ImproverSpec pi_alike_with(PiAlikeParams p) {
    return {Kind::kPiAlike, 0.0, p};
  }

  std::string describe() const;
};

// "classical", "revised:<eta>" or "pialike:<eta>:<kappa>[:<window>]".
ImproverSpec parse_improver_spec(std::string_view text);

enum class Schedule {
  // Both agents improve against the same evaluation, then both apply.
  kSimultaneous,
  // Agent 0 improves and applies, the chain is re-evaluated, then agent 1.
  kAlternating,
};

std::string_view to_string(Schedule s);
Schedule parse_schedule(std::string_view text);

struct CoadaptConfig {
  Schedule schedule = Schedule::kSimultaneous;
  ImproverSpec agent0;
  ImproverSpec agent1;
  int max_iters = 50;
  // Largest accepted residual of the exact evaluation.
  double eval_tolerance = 1e-9;
  // Override the model's settings when present.
  std::optional<double> gamma;
  std::optional<RewardMode> reward_mode;
};

enum class CoadaptStatus { kRunning, kConverged, kCycling, kMaxIters };

std::string_view to_string(CoadaptStatus s);

// One evaluate -> improve round. steps[0] of a trace is the initial policy.
struct CoadaptStep {
  int iter = 0;
  JointPolicy policy;    // policy after this round's improvements
  double gain = 0.0;     // of `policy`
  double value = 0.0;    // stationary-weighted mean of V for `policy`
  std::vector<int> switched0;
  std::vector<int> switched1;
};

struct CoadaptTrace {
  std::vector<CoadaptStep> steps;
  CoadaptStatus status = CoadaptStatus::kRunning;
  int period = 0;                        // when cycling
  std::vector<JointPolicy> cycle;        // one period, in visiting order

  int rounds() const { return static_cast<int>(steps.size()) - 1; }
  const JointPolicy& final_policy() const { return steps.back().policy; }
  std::vector<std::uint64_t> policy_numbers() const;
  std::string status_label() const;  // "converged", "cycling(2)", "max_iters"
};

CoadaptTrace run_coadapt(const FactoredCaMDP& model, const JointPolicy& init,
                         const CoadaptConfig& config);

struct Cycle {
  int period = 0;
  std::vector<std::uint64_t> members;  // one period, in order of appearance
};

// Smallest period p >= 2 such that the last 2p entries are two copies of the
// same block. A constant tail (a converged run) has no cycle.
std::optional<Cycle> detect_cycle(std::span<const std::uint64_t> trace);

// For a cycling trace, pairs each agent-0 policy with the agent-1 policy
// chosen in the same round (pi0 of step k with pi1 of step k+1). This is the
// "agent 0 plays X, agent 1 answers Y" view of a simultaneous oscillation.
std::vector<JointPolicy> response_pairs(const FactoredCaMDP& model,
                                        const CoadaptTrace& trace);

// iter,policy_no,pi0_digits,pi1_digits,gain,switches_agent0,switches_agent1,status
void write_trace_csv(const CoadaptTrace& trace, std::ostream& out);

// CLI exit-code contract: 0 converged, 2 cycling, 3 max_iters.
int exit_code(CoadaptStatus status);

}  // namespace camdp
