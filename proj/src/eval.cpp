#include "camdp/eval.hpp"

#include <cmath>
#include <string>

#include "camdp/ergodicity.hpp"

namespace camdp {

namespace {

void require_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorCode::kBadGamma,
                "gamma " + std::to_string(gamma) + " is outside (0, 1)");
  }
}

double try_gain(const InducedChain& chain) {
  if (!is_irreducible(chain.transition)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return stationary_distribution(chain.transition).dot(chain.reward);
}

}  // namespace

EvalResult evaluate_direct(const InducedChain& chain, double gamma) {
  require_gamma(gamma);
  const auto n = chain.transition.rows();
  const Eigen::MatrixXd a =
      Eigen::MatrixXd::Identity(n, n) - gamma * chain.transition;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  EvalResult out;
  out.values = lu.solve(chain.reward);
  out.residual = (a * out.values - chain.reward).lpNorm<Eigen::Infinity>();
  if (!out.values.allFinite() || !(out.residual < 1e-9)) {
    throw Error(ErrorCode::kSingularSystem,
                "Bellman system is singular or ill-conditioned (residual " +
                    std::to_string(out.residual) + ")");
  }
  out.gamma = gamma;
  out.method = EvalMethod::kDirect;
  out.gain = try_gain(chain);
  return out;
}

EvalResult evaluate_iterative(const InducedChain& chain, double gamma,
                              double tol, int max_iters) {
  require_gamma(gamma);
  if (!(tol > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tolerance must be positive");
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(chain.reward.size());
  double step = std::numeric_limits<double>::infinity();
  int k = 0;
  while (k < max_iters) {
    Eigen::VectorXd next = chain.reward + gamma * (chain.transition * v);
    step = (next - v).lpNorm<Eigen::Infinity>();
    v = std::move(next);
    ++k;
    if (step < tol) break;
  }
  if (!(step < tol)) {
    throw Error(ErrorCode::kMaxItersExceeded,
                "value iteration stopped after " + std::to_string(k) +
                    " sweeps with residual " + std::to_string(step));
  }
  EvalResult out;
  out.values = std::move(v);
  out.gamma = gamma;
  out.method = EvalMethod::kIterative;
  out.iterations = k;
  out.residual = step;
  out.gain = try_gain(chain);
  return out;
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& p) {
  require_stochastic(p, "transition matrix");
  if (!is_irreducible(p)) {
    throw Error(ErrorCode::kReducible,
                "stationary distribution is not unique for a reducible chain");
  }
  const auto n = p.rows();
  Eigen::MatrixXd a = (Eigen::MatrixXd::Identity(n, n) - p).transpose();
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd w = a.fullPivLu().solve(b);
  // Round-off can leave tiny negatives on near-zero entries.
  w = w.cwiseMax(0.0);
  w /= w.sum();
  return w;
}

double gain(const InducedChain& chain) {
  if (!is_irreducible(chain.transition)) {
    throw Error(ErrorCode::kNotErgodic,
                "gain is not a single scalar on a reducible chain");
  }
  return stationary_distribution(chain.transition).dot(chain.reward);
}

Eigen::MatrixXd cesaro_matrix(const Eigen::MatrixXd& p, double gamma, long n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  const auto size = p.rows();
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(size, size);
  Eigen::MatrixXd sum = power;
  for (long i = 1; i <= n; ++i) {
    power = gamma * (power * p);
    sum += power;
  }
  return sum / static_cast<double>(n);
}

Eigen::VectorXd cesaro_gain(const InducedChain& chain, double gamma, long n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  Eigen::VectorXd term = chain.reward;
  Eigen::VectorXd sum = term;
  for (long i = 1; i <= n; ++i) {
    term = gamma * (chain.transition * term);
    sum += term;
  }
  return sum / static_cast<double>(n);
}

double max_column_spread(const Eigen::MatrixXd& m) {
  double spread = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    spread = std::max(spread, m.col(j).maxCoeff() - m.col(j).minCoeff());
  }
  return spread;
}

double value_summary(const InducedChain& chain, const Eigen::VectorXd& values) {
  if (!is_irreducible(chain.transition)) return values.mean();
  return stationary_distribution(chain.transition).dot(values);
}

}  // namespace camdp
