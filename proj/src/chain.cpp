#include "camdp/chain.hpp"

namespace camdp {

TransitionRow transition_row(const FactoredCaMDP& model, const JointState& s,
                             int a0, int a1) {
  const auto& p0 = model.p0[static_cast<std::size_t>(a0)];
  const auto& ps = model.ps[static_cast<std::size_t>(a0)][static_cast<std::size_t>(a1)];
  const auto& p1 = model.p1[static_cast<std::size_t>(a1)];
  const auto& r0 = model.r0[static_cast<std::size_t>(a0)];
  const auto& rs = model.rs[static_cast<std::size_t>(a0)][static_cast<std::size_t>(a1)];
  const auto& r1 = model.r1[static_cast<std::size_t>(a1)];

  TransitionRow row;
  row.probabilities.resize(model.num_states());
  int j = 0;
  for (int t0 = 0; t0 < model.n0; ++t0) {
    for (int ts = 0; ts < model.ns; ++ts) {
      for (int t1 = 0; t1 < model.n1; ++t1, ++j) {
        const double p = p0(s.s0, t0) * ps(s.ss, ts) * p1(s.s1, t1);
        row.probabilities(j) = p;
        row.expected_reward +=
            p * aggregate_reward(model.reward_mode, r0(s.s0, t0),
                                 rs(s.ss, ts), r1(s.s1, t1));
      }
    }
  }
  return row;
}

InducedChain induced_chain(const FactoredCaMDP& model,
                           const JointPolicy& policy) {
  require_shape(model, policy.pi0);
  require_shape(model, policy.pi1);
  if (policy.pi0.agent != 0 || policy.pi1.agent != 1) {
    throw Error(ErrorCode::kPolicyShapeMismatch,
                "joint policy must hold agent 0 then agent 1");
  }
  const int n = model.num_states();
  InducedChain chain{Eigen::MatrixXd(n, n), Eigen::VectorXd(n), policy};
  for (int i = 0; i < n; ++i) {
    const JointState s = joint_state(model, i);
    const auto row = transition_row(model, s, action_at(model, policy.pi0, s),
                                    action_at(model, policy.pi1, s));
    chain.transition.row(i) = row.probabilities.transpose();
    chain.reward(i) = row.expected_reward;
  }
  return chain;
}

}  // namespace camdp
