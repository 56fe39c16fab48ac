#pragma once

// Slow, loop-based reference computations. Nothing here calls into the
// library's chain/eval/improve code, so tests can compare the two.

#include <Eigen/Dense>

#include <vector>

#include "camdp/model.hpp"
#include "camdp/policy.hpp"

namespace naive {

inline Eigen::MatrixXd kron3(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             const Eigen::MatrixXd& c) {
  Eigen::MatrixXd out(a.rows() * b.rows() * c.rows(),
                      a.cols() * b.cols() * c.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          for (int m = 0; m < c.rows(); ++m)
            for (int n = 0; n < c.cols(); ++n)
              out((i * b.rows() + k) * c.rows() + m,
                  (j * b.cols() + l) * c.cols() + n) =
                  a(i, j) * b(k, l) * c(m, n);
  return out;
}

struct Triple {
  int s0, ss, s1;
};

inline Triple unflat(const camdp::FactoredCaMDP& m, int i) {
  return {i / (m.ns * m.n1), (i / m.n1) % m.ns, i % m.n1};
}

inline double agg(const camdp::FactoredCaMDP& m, double a, double b, double c) {
  return m.reward_mode == camdp::RewardMode::kProduct ? a * b * c : a + b + c;
}

// Probability and expected reward of one augmented transition under
// explicit actions.
inline void step(const camdp::FactoredCaMDP& m, int s, int a0, int a1,
                 Eigen::VectorXd& prob, double& reward) {
  const int n = m.num_states();
  const Triple x = unflat(m, s);
  prob = Eigen::VectorXd::Zero(n);
  reward = 0.0;
  for (int t = 0; t < n; ++t) {
    const Triple y = unflat(m, t);
    const double p = m.p0[a0](x.s0, y.s0) * m.ps[a0][a1](x.ss, y.ss) *
                     m.p1[a1](x.s1, y.s1);
    prob(t) = p;
    reward += p * agg(m, m.r0[a0](x.s0, y.s0), m.rs[a0][a1](x.ss, y.ss),
                      m.r1[a1](x.s1, y.s1));
  }
}

inline int act(const camdp::FactoredCaMDP& m, const camdp::AgentPolicy& p,
               int s) {
  if (p.domain == camdp::PolicyDomain::kFullState) return p.actions[s];
  const Triple x = unflat(m, s);
  const int own = p.agent == 0 ? x.s0 : x.s1;
  return p.actions[own * m.ns + x.ss];
}

struct Chain {
  Eigen::MatrixXd p;
  Eigen::VectorXd r;
};

inline Chain chain(const camdp::FactoredCaMDP& m,
                   const camdp::JointPolicy& pol) {
  const int n = m.num_states();
  Chain c{Eigen::MatrixXd(n, n), Eigen::VectorXd(n)};
  for (int s = 0; s < n; ++s) {
    Eigen::VectorXd row;
    double r;
    step(m, s, act(m, pol.pi0, s), act(m, pol.pi1, s), row, r);
    c.p.row(s) = row.transpose();
    c.r(s) = r;
  }
  return c;
}

// Value iteration with a plain loop, no early stop.
inline Eigen::VectorXd values(const Chain& c, double gamma, int sweeps) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(c.r.size());
  for (int k = 0; k < sweeps; ++k) v = c.r + gamma * c.p * v;
  return v;
}

// Power iteration on the lazy chain (I + P) / 2, which has the same
// stationary distribution and is aperiodic.
inline Eigen::VectorXd stationary(const Eigen::MatrixXd& p, int sweeps = 200000) {
  const int n = static_cast<int>(p.rows());
  const Eigen::MatrixXd lazy = 0.5 * (Eigen::MatrixXd::Identity(n, n) + p);
  Eigen::RowVectorXd w = Eigen::RowVectorXd::Constant(n, 1.0 / n);
  for (int k = 0; k < sweeps; ++k) {
    const Eigen::RowVectorXd next = w * lazy;
    if ((next - w).cwiseAbs().maxCoeff() < 1e-16) {
      w = next;
      break;
    }
    w = next;
  }
  return w.transpose();
}

// Class-aggregated action values for `agent`, weights from the stationary
// distribution of the current chain (uniform for empty classes).
inline std::vector<std::vector<double>> class_q(
    const camdp::FactoredCaMDP& m, const camdp::JointPolicy& pol,
    const Eigen::VectorXd& v, int agent) {
  const int n = m.num_states();
  const auto& mine = agent == 0 ? pol.pi0 : pol.pi1;
  const auto& other = agent == 0 ? pol.pi1 : pol.pi0;
  const int na = agent == 0 ? m.m0 : m.m1;
  const int classes = mine.domain == camdp::PolicyDomain::kFullState
                          ? n
                          : (agent == 0 ? m.n0 : m.n1) * m.ns;
  const Eigen::VectorXd w = stationary(chain(m, pol).p);
  std::vector<std::vector<double>> q(classes, std::vector<double>(na, 0.0));
  std::vector<double> mass(classes, 0.0);
  std::vector<int> count(classes, 0);
  std::vector<std::vector<double>> plain(classes, std::vector<double>(na, 0.0));
  for (int s = 0; s < n; ++s) {
    const Triple x = unflat(m, s);
    const int c = mine.domain == camdp::PolicyDomain::kFullState
                      ? s
                      : (agent == 0 ? x.s0 : x.s1) * m.ns + x.ss;
    for (int a = 0; a < na; ++a) {
      Eigen::VectorXd row;
      double r;
      const int o = act(m, other, s);
      if (agent == 0) {
        step(m, s, a, o, row, r);
      } else {
        step(m, s, o, a, row, r);
      }
      const double qa = r + m.gamma * row.dot(v);
      q[c][a] += w(s) * qa;
      plain[c][a] += qa;
    }
    mass[c] += w(s);
    count[c] += 1;
  }
  for (int c = 0; c < classes; ++c) {
    for (int a = 0; a < na; ++a) {
      q[c][a] = mass[c] > 0.0 ? q[c][a] / mass[c] : plain[c][a] / count[c];
    }
  }
  return q;
}

}  // namespace naive
