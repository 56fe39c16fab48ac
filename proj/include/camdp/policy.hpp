#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "camdp/model.hpp"

namespace camdp {

// What an agent conditions its action on.
//   kOwnShared: the pair (own state, shared state), own-state major. This is
//               the decentralized setting and the only numbered one.
//   kFullState: the full augmented state (flat index). Used by the oracle and
//               the single-agent property suites.
enum class PolicyDomain { kOwnShared, kFullState };

struct AgentPolicy {
  int agent = 0;  // 0 or 1
  PolicyDomain domain = PolicyDomain::kOwnShared;
  std::vector<int> actions;

  bool operator==(const AgentPolicy&) const = default;
};

int num_actions(const FactoredCaMDP& model, int agent);
int domain_size(const FactoredCaMDP& model, int agent, PolicyDomain domain);

// Index into AgentPolicy::actions used at augmented state `s`.
int class_index(const FactoredCaMDP& model, int agent, PolicyDomain domain,
                const JointState& s);
int action_at(const FactoredCaMDP& model, const AgentPolicy& policy,
              const JointState& s);

// Throws PolicyShapeMismatch when the length or any action is out of range.
void require_shape(const FactoredCaMDP& model, const AgentPolicy& policy);

AgentPolicy uniform_policy(const FactoredCaMDP& model, int agent, int action,
                           PolicyDomain domain = PolicyDomain::kOwnShared);

// Lifts an own/shared policy to the equivalent full-state policy.
AgentPolicy to_full_state(const FactoredCaMDP& model, const AgentPolicy& policy);

struct JointPolicy {
  AgentPolicy pi0;
  AgentPolicy pi1;
  // Canonical 1-based number; 0 when either agent uses kFullState.
  std::uint64_t number = 0;

  bool operator==(const JointPolicy& other) const {
    return pi0 == other.pi0 && pi1 == other.pi1;
  }
};

JointPolicy make_joint_policy(const FactoredCaMDP& model, AgentPolicy pi0,
                              AgentPolicy pi1);

inline constexpr std::uint64_t kDefaultPolicyCap = 10'000'000;

// m0^(n0*ns) * m1^(n1*ns); throws SizeOverflow above `cap`.
std::uint64_t joint_policy_count(const FactoredCaMDP& model,
                                 std::uint64_t cap = kDefaultPolicyCap);

// number = |Pi1| * digits(pi0) + digits(pi1) + 1, where digits() reads the
// action list as a base-m integer with the first entry most significant.
std::uint64_t policy_number(const FactoredCaMDP& model, const AgentPolicy& pi0,
                            const AgentPolicy& pi1);
JointPolicy decode_policy_number(const FactoredCaMDP& model,
                                 std::uint64_t number);

// All joint policies in ascending number order.
std::vector<JointPolicy> enumerate_all(const FactoredCaMDP& model,
                                       std::uint64_t cap = kDefaultPolicyCap);
void for_each_joint_policy(const FactoredCaMDP& model,
                           const std::function<void(const JointPolicy&)>& fn,
                           std::uint64_t cap = kDefaultPolicyCap);

// "0111" (or "0,11,3" when some action needs more than one digit).
std::string digits(const AgentPolicy& policy);
// "[0 1 1 1]"
std::string bracketed(const AgentPolicy& policy);
// "[0 0 0 0][1 1 0 0] (No.13)"
std::string format_policy(const JointPolicy& policy);

AgentPolicy parse_agent_digits(const FactoredCaMDP& model, int agent,
                               std::string_view text);
// "<pi0 digits>:<pi1 digits>", own/shared domain.
JointPolicy parse_policy_literal(const FactoredCaMDP& model,
                                 std::string_view text);

}  // namespace camdp
