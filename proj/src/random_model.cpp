#include "camdp/random_model.hpp"

namespace camdp {

Eigen::MatrixXd random_stochastic(int n, std::mt19937_64& rng, double floor) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = floor + unit(rng);
    m.row(i) /= m.row(i).sum();
  }
  return m;
}

namespace {

Eigen::MatrixXd random_rewards(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = unit(rng);
  }
  return m;
}

}  // namespace

FactoredCaMDP random_model(std::uint64_t seed,
                           const RandomModelOptions& options) {
  std::mt19937_64 rng(seed);
  FactoredCaMDP m;
  m.n0 = options.n0;
  m.ns = options.ns;
  m.n1 = options.n1;
  m.m0 = options.m0;
  m.m1 = options.m1;
  m.gamma = options.gamma;
  m.reward_mode = options.reward_mode;
  for (int a = 0; a < m.m0; ++a) {
    m.p0.push_back(random_stochastic(m.n0, rng));
    m.r0.push_back(random_rewards(m.n0, rng));
  }
  m.ps.resize(static_cast<std::size_t>(m.m0));
  m.rs.resize(static_cast<std::size_t>(m.m0));
  for (int a0 = 0; a0 < m.m0; ++a0) {
    for (int a1 = 0; a1 < m.m1; ++a1) {
      m.ps[static_cast<std::size_t>(a0)].push_back(random_stochastic(m.ns, rng));
      m.rs[static_cast<std::size_t>(a0)].push_back(random_rewards(m.ns, rng));
    }
  }
  for (int a = 0; a < m.m1; ++a) {
    m.p1.push_back(random_stochastic(m.n1, rng));
    m.r1.push_back(random_rewards(m.n1, rng));
  }
  require_valid(m);
  return m;
}

}  // namespace camdp
