#pragma once

#include <Eigen/Dense>

#include <string_view>

namespace camdp {

enum class Ergodicity { kErgodic, kReducible, kPeriodic };

std::string_view to_string(Ergodicity e);

struct ErgodicityReport {
  Ergodicity kind = Ergodicity::kErgodic;
  // Period of the chain when irreducible (1 means aperiodic); 0 if reducible.
  int period = 0;
};

// Classifies a row-stochastic matrix from the digraph of its positive
// entries: strong connectivity decides irreducibility, and the period is the
// gcd of cycle lengths (computed from BFS levels). Throws NotStochastic.
ErgodicityReport check_ergodic(const Eigen::MatrixXd& p);

bool is_irreducible(const Eigen::MatrixXd& p);

// Row-stochastic check at kStochasticTolerance; throws NotStochastic.
void require_stochastic(const Eigen::MatrixXd& p, std::string_view what);

}  // namespace camdp
