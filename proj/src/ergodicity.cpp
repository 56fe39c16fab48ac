#include "camdp/ergodicity.hpp"

#include <cmath>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include "camdp/error.hpp"
#include "camdp/model.hpp"

namespace camdp {

std::string_view to_string(Ergodicity e) {
  switch (e) {
    case Ergodicity::kErgodic: return "ergodic";
    case Ergodicity::kReducible: return "reducible";
    case Ergodicity::kPeriodic: return "periodic";
  }
  return "unknown";
}

void require_stochastic(const Eigen::MatrixXd& p, std::string_view what) {
  if (p.rows() != p.cols() || p.rows() == 0) {
    throw Error(ErrorCode::kNotStochastic,
                std::string(what) + " must be a non-empty square matrix");
  }
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    if ((p.row(i).array() < 0.0).any() || !p.row(i).allFinite()) {
      throw Error(ErrorCode::kNotStochastic,
                  std::string(what) + " row " + std::to_string(i) +
                      " has an entry outside [0, 1]");
    }
    if (std::abs(p.row(i).sum() - 1.0) > kStochasticTolerance) {
      throw Error(ErrorCode::kNotStochastic,
                  std::string(what) + " row " + std::to_string(i) +
                      " does not sum to 1");
    }
  }
}

namespace {

// BFS distances from node 0 along positive entries, optionally on the
// transposed graph.
std::vector<int> bfs_levels(const Eigen::MatrixXd& p, bool transposed) {
  const auto n = p.rows();
  std::vector<int> level(static_cast<std::size_t>(n), -1);
  std::queue<Eigen::Index> queue;
  level[0] = 0;
  queue.push(0);
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop();
    for (Eigen::Index v = 0; v < n; ++v) {
      const double w = transposed ? p(v, u) : p(u, v);
      if (w > 0.0 && level[static_cast<std::size_t>(v)] < 0) {
        level[static_cast<std::size_t>(v)] = level[static_cast<std::size_t>(u)] + 1;
        queue.push(v);
      }
    }
  }
  return level;
}

bool all_reached(const std::vector<int>& level) {
  for (int l : level) {
    if (l < 0) return false;
  }
  return true;
}

}  // namespace

bool is_irreducible(const Eigen::MatrixXd& p) {
  return all_reached(bfs_levels(p, false)) && all_reached(bfs_levels(p, true));
}

ErgodicityReport check_ergodic(const Eigen::MatrixXd& p) {
  require_stochastic(p, "transition matrix");
  const auto level = bfs_levels(p, false);
  if (!all_reached(level) || !all_reached(bfs_levels(p, true))) {
    return {Ergodicity::kReducible, 0};
  }
  // In a strongly connected graph every edge u->v closes walks whose lengths
  // differ by level[u] + 1 - level[v]; the gcd of these is the period.
  int period = 0;
  for (Eigen::Index u = 0; u < p.rows(); ++u) {
    for (Eigen::Index v = 0; v < p.cols(); ++v) {
      if (p(u, v) > 0.0) {
        const int d = level[static_cast<std::size_t>(u)] + 1 -
                      level[static_cast<std::size_t>(v)];
        period = std::gcd(period, std::abs(d));
      }
    }
  }
  return {period == 1 ? Ergodicity::kErgodic : Ergodicity::kPeriodic, period};
}

}  // namespace camdp
