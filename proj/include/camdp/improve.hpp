#pragma once

#include <Eigen/Dense>

#include <deque>
#include <vector>

#include "camdp/eval.hpp"
#include "camdp/policy.hpp"

namespace camdp {

// Advantages at or below this count as ties and never trigger a switch.
inline constexpr double kTieTolerance = 1e-12;

struct ClassAdvantage {
  std::vector<double> q;  // aggregated action value per own action
  int current = 0;        // action of the current policy
  double backup = 0.0;    // J_k: q[current]
  int best = 0;           // argmax of q, lowest index on ties
  double advantage = 0.0; // I_k = q[best] - backup, >= 0
  double mass = 0.0;      // stationary mass of the class (0 -> uniform weights)
};

struct AdvantageReport {
  int agent = 0;
  PolicyDomain domain = PolicyDomain::kOwnShared;
  std::vector<ClassAdvantage> classes;
  // Per augmented state and own action, before class aggregation.
  Eigen::MatrixXd state_q;
};

// One-step backups for `agent` against V, with the other agent held at its
// current policy:
//   Q(s, a) = sum_s' P(s' | s, a, pi_other(s)) [R(s, s') + gamma V(s')]
// then averaged over the augmented states in each policy class, weighted by
// the current chain's stationary distribution (uniform for zero-mass classes
// or reducible chains). gamma is the model's.
AdvantageReport action_values(const FactoredCaMDP& model,
                              const JointPolicy& policy,
                              const Eigen::VectorXd& values, int agent);

struct ImproveStep {
  AgentPolicy policy;
  bool stable = true;
  std::vector<int> switched;  // classes whose action changed
};

// Classical improvement: switch wherever the advantage exceeds kTieTolerance.
ImproveStep greedy_improve(const AdvantageReport& report,
                           const AgentPolicy& current);

// Threshold improvement: a class switches only when its advantage is >= eta.
// eta = +infinity never switches.
ImproveStep revised_improve(const AdvantageReport& report,
                            const AgentPolicy& current, double eta);

struct PiAlikeParams {
  double eta = 0.1;
  double kappa = 1.0;
  int window = 1000;  // M; each class sums its last M + 1 advantages
};

struct PiAlikeState {
  PiAlikeParams params;
  std::vector<std::deque<double>> history;  // per class, newest at back
};

PiAlikeState make_pi_alike_state(const PiAlikeParams& params, int num_classes);

struct PiAlikeOutcome {
  ImproveStep step;
  PiAlikeState state;
};

// Appends each class's advantage to its window and switches the class when
// kappa * (window sum) >= eta. A class's window is cleared when it switches.
PiAlikeOutcome pi_alike_improve(const AdvantageReport& report,
                                const AgentPolicy& current,
                                PiAlikeState state);

// True when repeating `report` forever would never make any class switch,
// given the windows already accumulated in `state`.
bool pi_alike_is_fixed_point(const AdvantageReport& report,
                             const PiAlikeState& state);

struct LossBound {
  Eigen::VectorXd per_state;  // eta (I - gamma P*)^-1 1
  double scalar = 0.0;        // eta / (1 - gamma)
};

// Worst-case value loss of a threshold-stable policy relative to pi_star.
LossBound value_loss_bound(const FactoredCaMDP& model, const JointPolicy& pi_star,
                         double gamma, double eta);

}  // namespace camdp
