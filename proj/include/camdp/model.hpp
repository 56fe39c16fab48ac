#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "camdp/error.hpp"

namespace camdp {

// How the three component rewards combine into the reward of one augmented
// transition. kProduct is the literal Kronecker reading (R0 * Rs * R1).
enum class RewardMode { kProduct, kSum };

std::string_view to_string(RewardMode mode);
RewardMode parse_reward_mode(std::string_view text);

inline constexpr double kStochasticTolerance = 1e-9;

// A two-agent MDP whose state factors into an agent-0-only part (S0), a shared
// part (Ss) and an agent-1-only part (S1). Transition tables are indexed
// [action][from][to]; the shared tables take both actions: [a0][a1][from][to].
// Reward tables have the same shapes as the transition tables.
struct FactoredCaMDP {
  int n0 = 0;
  int ns = 0;
  int n1 = 0;
  int m0 = 0;
  int m1 = 0;

  std::vector<Eigen::MatrixXd> p0;
  std::vector<std::vector<Eigen::MatrixXd>> ps;
  std::vector<Eigen::MatrixXd> p1;

  std::vector<Eigen::MatrixXd> r0;
  std::vector<std::vector<Eigen::MatrixXd>> rs;
  std::vector<Eigen::MatrixXd> r1;

  double gamma = 0.9;
  RewardMode reward_mode = RewardMode::kProduct;

  int num_states() const { return n0 * ns * n1; }
};

// One augmented state. flat_index = (s0 * ns + ss) * n1 + s1, i.e. s0 major and
// s1 minor, matching the factor order of P0 (x) Ps (x) P1.
struct JointState {
  int s0 = 0;
  int ss = 0;
  int s1 = 0;
  int flat_index = 0;
};

JointState joint_state(const FactoredCaMDP& model, int flat_index);
int flat_index(const FactoredCaMDP& model, int s0, int ss, int s1);

// Reward for a single component transition triple under the model's mode.
double aggregate_reward(RewardMode mode, double r0, double rs, double r1);

struct Violation {
  ErrorCode code;
  std::string table;
  std::vector<int> indices;
  std::string detail;

  std::string location() const;  // e.g. "P0[1][0]"
  std::string describe() const;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

ValidationReport validate(const FactoredCaMDP& model);

// Throws the first violation as an Error.
void require_valid(const FactoredCaMDP& model);

// Rescales every probability row to sum to exactly one. Only meaningful on a
// model that already passed validation (rows within kStochasticTolerance).
FactoredCaMDP normalized(FactoredCaMDP model);

// A (x) B (x) C with the standard Kronecker layout.
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
Eigen::MatrixXd kron3(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                      const Eigen::MatrixXd& c);

// Model file I/O (JSON). parse_model_json only checks the document structure;
// table-versus-size consistency is reported by validate(). load_model does
// both and renormalizes.
FactoredCaMDP parse_model_json(std::string_view text);
std::string model_to_json(const FactoredCaMDP& model, int indent = 2);
FactoredCaMDP load_model(const std::filesystem::path& path);
void save_model(const FactoredCaMDP& model, const std::filesystem::path& path);

// The 2x2x2 two-action patient/robot example with gamma 0.98 and product
// rewards (the settings calibrate() selects for it).
FactoredCaMDP example_model();

}  // namespace camdp
