#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

#include "camdp/model.hpp"

namespace camdp {

struct RandomModelOptions {
  int n0 = 2;
  int ns = 2;
  int n1 = 2;
  int m0 = 2;
  int m1 = 2;
  double gamma = 0.9;
  RewardMode reward_mode = RewardMode::kProduct;
};

// Row-stochastic n x n matrix with every entry >= floor / n (so ergodic).
Eigen::MatrixXd random_stochastic(int n, std::mt19937_64& rng,
                                  double floor = 0.05);

// Strictly positive transition tables and rewards in [0, 1). The same seed
// always yields the same model.
FactoredCaMDP random_model(std::uint64_t seed,
                           const RandomModelOptions& options = {});

}  // namespace camdp
