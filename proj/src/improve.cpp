#include "camdp/improve.hpp"

#include <cmath>
#include <string>

#include "camdp/chain.hpp"
#include "camdp/ergodicity.hpp"

namespace camdp {

AdvantageReport action_values(const FactoredCaMDP& model,
                              const JointPolicy& policy,
                              const Eigen::VectorXd& values, int agent) {
  if (agent != 0 && agent != 1) {
    throw Error(ErrorCode::kPolicyShapeMismatch, "agent must be 0 or 1");
  }
  const int n = model.num_states();
  if (values.size() != n) {
    throw Error(ErrorCode::kPolicyShapeMismatch,
                "value vector has " + std::to_string(values.size()) +
                    " entries, expected " + std::to_string(n));
  }
  const InducedChain chain = induced_chain(model, policy);
  const AgentPolicy& own = agent == 0 ? policy.pi0 : policy.pi1;
  const AgentPolicy& other = agent == 0 ? policy.pi1 : policy.pi0;
  const int m = num_actions(model, agent);

  Eigen::VectorXd weight = Eigen::VectorXd::Constant(n, 1.0 / n);
  if (is_irreducible(chain.transition)) {
    weight = stationary_distribution(chain.transition);
  }

  AdvantageReport report;
  report.agent = agent;
  report.domain = own.domain;
  report.state_q.resize(n, m);
  for (int i = 0; i < n; ++i) {
    const JointState s = joint_state(model, i);
    const int other_action = action_at(model, other, s);
    for (int a = 0; a < m; ++a) {
      const auto row = agent == 0
                           ? transition_row(model, s, a, other_action)
                           : transition_row(model, s, other_action, a);
      report.state_q(i, a) =
          row.expected_reward + model.gamma * row.probabilities.dot(values);
    }
  }

  const int classes = domain_size(model, agent, own.domain);
  Eigen::MatrixXd weighted = Eigen::MatrixXd::Zero(classes, m);
  Eigen::MatrixXd plain = Eigen::MatrixXd::Zero(classes, m);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(classes);
  Eigen::VectorXd count = Eigen::VectorXd::Zero(classes);
  for (int i = 0; i < n; ++i) {
    const int c = class_index(model, agent, own.domain, joint_state(model, i));
    weighted.row(c) += weight(i) * report.state_q.row(i);
    plain.row(c) += report.state_q.row(i);
    mass(c) += weight(i);
    count(c) += 1.0;
  }

  report.classes.resize(static_cast<std::size_t>(classes));
  for (int c = 0; c < classes; ++c) {
    auto& out = report.classes[static_cast<std::size_t>(c)];
    out.mass = mass(c);
    const Eigen::VectorXd q = mass(c) > 0.0
                                  ? Eigen::VectorXd(weighted.row(c) / mass(c))
                                  : Eigen::VectorXd(plain.row(c) / count(c));
    out.q.assign(q.data(), q.data() + q.size());
    out.current = own.actions[static_cast<std::size_t>(c)];
    out.backup = q(out.current);
    out.best = 0;
    for (int a = 1; a < m; ++a) {
      if (q(a) > q(out.best)) out.best = a;
    }
    out.advantage = q(out.best) - out.backup;
  }
  return report;
}

namespace {

void require_matching(const AdvantageReport& report,
                      const AgentPolicy& current) {
  if (current.actions.size() != report.classes.size() ||
      current.agent != report.agent) {
    throw Error(ErrorCode::kPolicyShapeMismatch,
                "advantage report does not match the current policy");
  }
}

template <typename Rule>
ImproveStep apply_rule(const AdvantageReport& report,
                       const AgentPolicy& current, Rule&& should_switch) {
  require_matching(report, current);
  ImproveStep step{current, true, {}};
  for (std::size_t c = 0; c < report.classes.size(); ++c) {
    const auto& cls = report.classes[c];
    if (cls.advantage > kTieTolerance && cls.best != current.actions[c] &&
        should_switch(static_cast<int>(c), cls)) {
      step.policy.actions[c] = cls.best;
      step.switched.push_back(static_cast<int>(c));
      step.stable = false;
    }
  }
  return step;
}

}  // namespace

ImproveStep greedy_improve(const AdvantageReport& report,
                           const AgentPolicy& current) {
  return apply_rule(report, current,
                    [](int, const ClassAdvantage&) { return true; });
}

ImproveStep revised_improve(const AdvantageReport& report,
                            const AgentPolicy& current, double eta) {
  if (!(eta >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "eta must be non-negative");
  }
  return apply_rule(report, current, [eta](int, const ClassAdvantage& cls) {
    return cls.advantage >= eta;
  });
}

PiAlikeState make_pi_alike_state(const PiAlikeParams& params,
                                 int num_classes) {
  if (!(params.eta >= 0.0) || !(params.kappa >= 0.0) || params.window < 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "PI-alike parameters must be non-negative");
  }
  return {params, std::vector<std::deque<double>>(
                      static_cast<std::size_t>(num_classes))};
}

PiAlikeOutcome pi_alike_improve(const AdvantageReport& report,
                                const AgentPolicy& current,
                                PiAlikeState state) {
  require_matching(report, current);
  if (state.history.size() != report.classes.size()) {
    throw Error(ErrorCode::kPolicyShapeMismatch,
                "PI-alike state does not match the policy classes");
  }
  const auto keep = static_cast<std::size_t>(state.params.window) + 1;
  for (std::size_t c = 0; c < report.classes.size(); ++c) {
    auto& window = state.history[c];
    window.push_back(std::max(0.0, report.classes[c].advantage));
    while (window.size() > keep) window.pop_front();
  }
  const auto& params = state.params;
  ImproveStep step = apply_rule(
      report, current, [&](int c, const ClassAdvantage&) {
        double sum = 0.0;
        for (double x : state.history[static_cast<std::size_t>(c)]) sum += x;
        return params.kappa * sum >= params.eta;
      });
  for (int c : step.switched) state.history[static_cast<std::size_t>(c)].clear();
  return {std::move(step), std::move(state)};
}

bool pi_alike_is_fixed_point(const AdvantageReport& report,
                             const PiAlikeState& state) {
  const auto& params = state.params;
  const std::size_t keep = static_cast<std::size_t>(params.window) + 1;
  for (std::size_t c = 0; c < report.classes.size(); ++c) {
    const double adv = report.classes[c].advantage;
    if (adv <= kTieTolerance) continue;
    const auto& window = state.history[c];
    // After j more identical rounds the window holds the newest keep - j old
    // entries plus j copies of adv.
    std::vector<double> suffix(window.size() + 1, 0.0);
    for (std::size_t i = window.size(); i-- > 0;) {
      suffix[i] = suffix[i + 1] + window[i];
    }
    for (std::size_t j = 1; j <= keep; ++j) {
      const std::size_t old = std::min(window.size(), keep - j);
      const double sum =
          suffix[window.size() - old] + static_cast<double>(j) * adv;
      if (params.kappa * sum >= params.eta) return false;
    }
  }
  return true;
}

LossBound value_loss_bound(const FactoredCaMDP& model,
                           const JointPolicy& pi_star, double gamma,
                           double eta) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::kBadGamma, "gamma must lie in (0, 1)");
  }
  if (!(eta >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "eta must be non-negative");
  }
  const InducedChain chain = induced_chain(model, pi_star);
  const auto n = chain.transition.rows();
  const Eigen::MatrixXd a =
      Eigen::MatrixXd::Identity(n, n) - gamma * chain.transition;
  LossBound bound;
  bound.per_state = eta * a.partialPivLu().solve(Eigen::VectorXd::Ones(n));
  bound.scalar = eta / (1.0 - gamma);
  return bound;
}

}  // namespace camdp
