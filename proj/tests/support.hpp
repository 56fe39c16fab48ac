#pragma once

#include <stdexcept>

#include "camdp/chain.hpp"
#include "camdp/eval.hpp"
#include "camdp/improve.hpp"

namespace support {

// Agent 0 runs threshold improvement against a frozen agent 1 until no class
// switches. eta = 0 is classical policy iteration.
inline camdp::JointPolicy settle_agent0(const camdp::FactoredCaMDP& m,
                                        camdp::JointPolicy p, double eta,
                                        int max_rounds = 10000) {
  for (int k = 0; k < max_rounds; ++k) {
    const auto v = camdp::evaluate_direct(camdp::induced_chain(m, p), m.gamma);
    const auto report = camdp::action_values(m, p, v.values, 0);
    const auto step = camdp::revised_improve(report, p.pi0, eta);
    if (step.stable) return p;
    p = camdp::make_joint_policy(m, step.policy, p.pi1);
  }
  throw std::runtime_error("agent 0 did not settle");
}

inline Eigen::VectorXd values_of(const camdp::FactoredCaMDP& m,
                                 const camdp::JointPolicy& p) {
  return camdp::evaluate_direct(camdp::induced_chain(m, p), m.gamma).values;
}

}  // namespace support
