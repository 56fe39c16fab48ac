#pragma once

#include <Eigen/Dense>

#include "camdp/model.hpp"
#include "camdp/policy.hpp"

namespace camdp {

// The single Markov chain over S0 x Ss x S1 obtained by fixing both agents'
// policies, with its expected one-step reward r(s) = sum_s' P(s'|s) R(s, s').
struct InducedChain {
  Eigen::MatrixXd transition;
  Eigen::VectorXd reward;
  JointPolicy policy;

  int size() const { return static_cast<int>(reward.size()); }
};

// Successor distribution and expected reward of augmented state `s` when the
// agents play (a0, a1): P0[a0][s0,:] (x) Ps[a0][a1][ss,:] (x) P1[a1][s1,:].
struct TransitionRow {
  Eigen::VectorXd probabilities;
  double expected_reward = 0.0;
};

TransitionRow transition_row(const FactoredCaMDP& model, const JointState& s,
                             int a0, int a1);

InducedChain induced_chain(const FactoredCaMDP& model,
                           const JointPolicy& policy);

}  // namespace camdp
