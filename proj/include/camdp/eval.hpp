#pragma once

#include <Eigen/Dense>

#include <limits>

#include "camdp/chain.hpp"

namespace camdp {

enum class EvalMethod { kDirect, kIterative };

struct EvalResult {
  Eigen::VectorXd values;
  // Average reward per step; NaN when the chain is reducible.
  double gain = std::numeric_limits<double>::quiet_NaN();
  double gamma = 0.0;
  EvalMethod method = EvalMethod::kDirect;
  int iterations = 0;
  // Direct: ||(I - gamma P) V - r||_inf. Iterative: last ||V_k+1 - V_k||_inf.
  double residual = 0.0;
};

// V = (I - gamma P)^-1 r by dense LU.
EvalResult evaluate_direct(const InducedChain& chain, double gamma);

// V <- r + gamma P V from V = 0 until the sup-norm step drops below tol.
// Throws MaxItersExceeded with the last residual.
EvalResult evaluate_iterative(const InducedChain& chain, double gamma,
                              double tol = 1e-12, int max_iters = 1'000'000);

// Unique w >= 0 with wP = w and sum w = 1, from the bordered system where the
// last balance equation is replaced by normalization. Periodic chains are
// accepted; reducible ones throw Reducible.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& p);

// g = w . r. Throws NotErgodic for reducible chains.
double gain(const InducedChain& chain);

// (1/n) sum_{i=0..n} gamma^i P^i, and the same matrix applied to r.
Eigen::MatrixXd cesaro_matrix(const Eigen::MatrixXd& p, double gamma, long n);
Eigen::VectorXd cesaro_gain(const InducedChain& chain, double gamma, long n);

// Largest (max - min) over the columns of a matrix.
double max_column_spread(const Eigen::MatrixXd& m);

// Stationary-weighted mean of a value vector (falls back to the plain mean
// when the chain is reducible). This is the scalar used to compare discounted
// values with single-number tables.
double value_summary(const InducedChain& chain, const Eigen::VectorXd& values);

}  // namespace camdp
