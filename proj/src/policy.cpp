#include "camdp/policy.hpp"

#include <limits>
#include <sstream>

namespace camdp {

namespace {

// base^exponent, or 0 when the result would exceed `cap`.
std::uint64_t bounded_pow(std::uint64_t base, int exponent, std::uint64_t cap) {
  std::uint64_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && out > cap / base) return 0;
    out *= base;
  }
  return out;
}

std::uint64_t read_digits(const AgentPolicy& p, int base) {
  std::uint64_t v = 0;
  for (int a : p.actions) v = v * static_cast<std::uint64_t>(base) + a;
  return v;
}

std::vector<int> write_digits(std::uint64_t v, int base, int length) {
  std::vector<int> out(static_cast<std::size_t>(length));
  for (int i = length - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<int>(v % base);
    v /= base;
  }
  return out;
}

}  // namespace

int num_actions(const FactoredCaMDP& model, int agent) {
  return agent == 0 ? model.m0 : model.m1;
}

int domain_size(const FactoredCaMDP& model, int agent, PolicyDomain domain) {
  if (domain == PolicyDomain::kFullState) return model.num_states();
  return (agent == 0 ? model.n0 : model.n1) * model.ns;
}

int class_index(const FactoredCaMDP& model, int agent, PolicyDomain domain,
                const JointState& s) {
  if (domain == PolicyDomain::kFullState) return s.flat_index;
  const int own = agent == 0 ? s.s0 : s.s1;
  return own * model.ns + s.ss;
}

int action_at(const FactoredCaMDP& model, const AgentPolicy& policy,
              const JointState& s) {
  return policy.actions[static_cast<std::size_t>(
      class_index(model, policy.agent, policy.domain, s))];
}

void require_shape(const FactoredCaMDP& model, const AgentPolicy& policy) {
  if (policy.agent != 0 && policy.agent != 1) {
    throw Error(ErrorCode::kPolicyShapeMismatch,
                "agent id must be 0 or 1, got " + std::to_string(policy.agent));
  }
  const int expected = domain_size(model, policy.agent, policy.domain);
  if (static_cast<int>(policy.actions.size()) != expected) {
    throw Error(ErrorCode::kPolicyShapeMismatch,
                "agent " + std::to_string(policy.agent) + " policy has " +
                    std::to_string(policy.actions.size()) +
                    " entries, expected " + std::to_string(expected));
  }
  const int m = num_actions(model, policy.agent);
  for (int a : policy.actions) {
    if (a < 0 || a >= m) {
      throw Error(ErrorCode::kPolicyShapeMismatch,
                  "agent " + std::to_string(policy.agent) + " action " +
                      std::to_string(a) + " is outside [0, " +
                      std::to_string(m) + ")");
    }
  }
}

AgentPolicy uniform_policy(const FactoredCaMDP& model, int agent, int action,
                           PolicyDomain domain) {
  AgentPolicy p{agent, domain,
                std::vector<int>(static_cast<std::size_t>(
                                     domain_size(model, agent, domain)),
                                 action)};
  require_shape(model, p);
  return p;
}

AgentPolicy to_full_state(const FactoredCaMDP& model,
                          const AgentPolicy& policy) {
  if (policy.domain == PolicyDomain::kFullState) return policy;
  AgentPolicy out{policy.agent, PolicyDomain::kFullState, {}};
  out.actions.reserve(static_cast<std::size_t>(model.num_states()));
  for (int i = 0; i < model.num_states(); ++i) {
    out.actions.push_back(action_at(model, policy, joint_state(model, i)));
  }
  return out;
}

JointPolicy make_joint_policy(const FactoredCaMDP& model, AgentPolicy pi0,
                              AgentPolicy pi1) {
  pi0.agent = 0;
  pi1.agent = 1;
  require_shape(model, pi0);
  require_shape(model, pi1);
  JointPolicy jp{std::move(pi0), std::move(pi1), 0};
  if (jp.pi0.domain == PolicyDomain::kOwnShared &&
      jp.pi1.domain == PolicyDomain::kOwnShared) {
    jp.number = policy_number(model, jp.pi0, jp.pi1);
  }
  return jp;
}

std::uint64_t joint_policy_count(const FactoredCaMDP& model,
                                 std::uint64_t cap) {
  const auto c0 = bounded_pow(static_cast<std::uint64_t>(model.m0),
                              model.n0 * model.ns, cap);
  const auto c1 = bounded_pow(static_cast<std::uint64_t>(model.m1),
                              model.n1 * model.ns, cap);
  if (c0 == 0 || c1 == 0 || c0 > cap / c1) {
    throw Error(ErrorCode::kSizeOverflow,
                "joint policy count exceeds cap " + std::to_string(cap));
  }
  return c0 * c1;
}

std::uint64_t policy_number(const FactoredCaMDP& model, const AgentPolicy& pi0,
                            const AgentPolicy& pi1) {
  if (pi0.domain != PolicyDomain::kOwnShared ||
      pi1.domain != PolicyDomain::kOwnShared || pi0.agent != 0 ||
      pi1.agent != 1) {
    throw Error(ErrorCode::kPolicyShapeMismatch,
                "only own/shared policies for agents 0 and 1 are numbered");
  }
  require_shape(model, pi0);
  require_shape(model, pi1);
  const auto max = std::numeric_limits<std::uint64_t>::max();
  const auto count1 = bounded_pow(static_cast<std::uint64_t>(model.m1),
                                  model.n1 * model.ns, max);
  if (count1 == 0) {
    throw Error(ErrorCode::kSizeOverflow, "policy space too large to number");
  }
  const auto d0 = read_digits(pi0, model.m0);
  const auto d1 = read_digits(pi1, model.m1);
  if (d0 > (max - d1 - 1) / count1) {
    throw Error(ErrorCode::kSizeOverflow, "policy number overflows 64 bits");
  }
  return count1 * d0 + d1 + 1;
}

JointPolicy decode_policy_number(const FactoredCaMDP& model,
                                 std::uint64_t number) {
  const auto total = joint_policy_count(
      model, std::numeric_limits<std::uint64_t>::max());
  if (number < 1 || number > total) {
    throw Error(ErrorCode::kPolicyShapeMismatch,
                "policy number " + std::to_string(number) +
                    " is outside [1, " + std::to_string(total) + "]");
  }
  const auto count1 = bounded_pow(static_cast<std::uint64_t>(model.m1),
                                  model.n1 * model.ns,
                                  std::numeric_limits<std::uint64_t>::max());
  const auto index = number - 1;
  AgentPolicy pi0{0, PolicyDomain::kOwnShared,
                  write_digits(index / count1, model.m0, model.n0 * model.ns)};
  AgentPolicy pi1{1, PolicyDomain::kOwnShared,
                  write_digits(index % count1, model.m1, model.n1 * model.ns)};
  return {std::move(pi0), std::move(pi1), number};
}

void for_each_joint_policy(const FactoredCaMDP& model,
                           const std::function<void(const JointPolicy&)>& fn,
                           std::uint64_t cap) {
  const auto total = joint_policy_count(model, cap);
  for (std::uint64_t n = 1; n <= total; ++n) fn(decode_policy_number(model, n));
}

std::vector<JointPolicy> enumerate_all(const FactoredCaMDP& model,
                                       std::uint64_t cap) {
  std::vector<JointPolicy> out;
  out.reserve(static_cast<std::size_t>(joint_policy_count(model, cap)));
  for_each_joint_policy(
      model, [&](const JointPolicy& p) { out.push_back(p); }, cap);
  return out;
}

std::string digits(const AgentPolicy& policy) {
  bool wide = false;
  for (int a : policy.actions) wide = wide || a > 9;
  std::string out;
  for (std::size_t i = 0; i < policy.actions.size(); ++i) {
    if (wide && i) out += ',';
    out += std::to_string(policy.actions[i]);
  }
  return out;
}

std::string bracketed(const AgentPolicy& policy) {
  std::string out = "[";
  for (std::size_t i = 0; i < policy.actions.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(policy.actions[i]);
  }
  return out + "]";
}

std::string format_policy(const JointPolicy& policy) {
  std::string out = bracketed(policy.pi0) + bracketed(policy.pi1);
  if (policy.number != 0) out += " (No." + std::to_string(policy.number) + ")";
  return out;
}

AgentPolicy parse_agent_digits(const FactoredCaMDP& model, int agent,
                               std::string_view text) {
  AgentPolicy p{agent, PolicyDomain::kOwnShared, {}};
  const bool comma = text.find(',') != std::string_view::npos;
  std::string token;
  auto flush = [&]() {
    if (token.empty()) {
      throw Error(ErrorCode::kParse, "empty action in policy literal");
    }
    p.actions.push_back(std::stoi(token));
    token.clear();
  };
  for (char ch : text) {
    if (ch == ' ') continue;
    if (ch == ',') {
      flush();
      continue;
    }
    if (ch < '0' || ch > '9') {
      throw Error(ErrorCode::kParse, std::string("unexpected character '") +
                                         ch + "' in policy literal");
    }
    token += ch;
    if (!comma) flush();
  }
  if (comma) flush();
  require_shape(model, p);
  return p;
}

JointPolicy parse_policy_literal(const FactoredCaMDP& model,
                                 std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kParse,
                "policy literal must look like '<pi0 digits>:<pi1 digits>'");
  }
  return make_joint_policy(model,
                           parse_agent_digits(model, 0, text.substr(0, colon)),
                           parse_agent_digits(model, 1, text.substr(colon + 1)));
}

}  // namespace camdp
