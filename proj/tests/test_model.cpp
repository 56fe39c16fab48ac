#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "camdp/chain.hpp"
#include "camdp/model.hpp"
#include "camdp/random_model.hpp"
#include "naive.hpp"

using namespace camdp;

namespace {

bool has_code(const ValidationReport& r, ErrorCode code) {
  for (const auto& v : r.violations) {
    if (v.code == code) return true;
  }
  return false;
}

}  // namespace

TEST(Validate, ExampleModelIsValid) {
  const auto m = example_model();
  EXPECT_TRUE(validate(m).ok());
  EXPECT_DOUBLE_EQ(m.p0[0](0, 0), 0.8229);
  EXPECT_DOUBLE_EQ(m.p0[0](1, 1), 0.2174);
}

TEST(Validate, ShortRowIsNotStochastic) {
  auto m = example_model();
  m.p0[0].row(1) << 0.5, 0.4;
  const auto r = validate(m);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violations[0].code, ErrorCode::kNotStochastic);
  EXPECT_EQ(r.violations[0].location(), "P0[0][1]");
  try {
    require_valid(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotStochastic);
    EXPECT_NE(std::string(e.what()).find("P0[0][1]"), std::string::npos);
  }
}

TEST(Validate, BadGamma) {
  auto m = example_model();
  for (double g : {1.0, 0.0, -0.1, 1.5}) {
    m.gamma = g;
    EXPECT_TRUE(has_code(validate(m), ErrorCode::kBadGamma)) << g;
  }
}

TEST(Validate, NegativeEntry) {
  auto m = example_model();
  m.ps[1][0].row(0) << 1.2, -0.2;
  EXPECT_TRUE(has_code(validate(m), ErrorCode::kNegativeEntry));
}

TEST(Validate, DimensionMismatch) {
  auto m = example_model();
  m.p1[1] = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_TRUE(has_code(validate(m), ErrorCode::kDimensionMismatch));
  m = example_model();
  m.ps[0].pop_back();
  EXPECT_TRUE(has_code(validate(m), ErrorCode::kDimensionMismatch));
}

TEST(Validate, WithinToleranceIsRenormalized) {
  auto m = example_model();
  m.p0[0](0, 0) += 5e-10;
  EXPECT_TRUE(validate(m).ok());
  const auto n = normalized(m);
  EXPECT_NEAR(n.p0[0].row(0).sum(), 1.0, 1e-15);
}

TEST(Kron, IdentityAndScalars) {
  const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(2, 2);
  EXPECT_TRUE(kron3(i2, i2, i2).isApprox(Eigen::MatrixXd::Identity(8, 8)));
  Eigen::MatrixXd a(1, 1), b(1, 1), c(1, 1);
  a << 2;
  b << 3;
  c << 5;
  EXPECT_DOUBLE_EQ(kron3(a, b, c)(0, 0), 30.0);
}

TEST(Kron, ExampleMatchesTripleLoop) {
  const auto m = example_model();
  const auto k = kron3(m.p0[0], m.ps[0][0], m.p1[0]);
  EXPECT_DOUBLE_EQ(k(0, 0), 0.8229 * 0.5821 * 0.8022);
  EXPECT_LT((k - naive::kron3(m.p0[0], m.ps[0][0], m.p1[0])).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST(Kron, RectangularRandom) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  auto rnd = [&](int r, int c) {
    Eigen::MatrixXd x(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) x(i, j) = u(rng);
    return x;
  };
  const auto a = rnd(2, 3), b = rnd(3, 1), c = rnd(2, 2);
  EXPECT_LT((kron3(a, b, c) - naive::kron3(a, b, c)).cwiseAbs().maxCoeff(),
            1e-15);
}

TEST(FlatIndex, Bijection) {
  auto m = random_model(3, {2, 3, 4, 2, 2});
  std::vector<int> seen(m.num_states(), 0);
  for (int s0 = 0; s0 < m.n0; ++s0)
    for (int ss = 0; ss < m.ns; ++ss)
      for (int s1 = 0; s1 < m.n1; ++s1) {
        const int i = flat_index(m, s0, ss, s1);
        ASSERT_GE(i, 0);
        ASSERT_LT(i, m.num_states());
        ++seen[i];
        const auto js = joint_state(m, i);
        EXPECT_EQ(js.s0, s0);
        EXPECT_EQ(js.ss, ss);
        EXPECT_EQ(js.s1, s1);
      }
  for (int c : seen) EXPECT_EQ(c, 1);
}

TEST(InducedChain, Singleton) {
  FactoredCaMDP m;
  m.n0 = m.ns = m.n1 = m.m0 = m.m1 = 1;
  auto one = [](double v) { return Eigen::MatrixXd::Constant(1, 1, v); };
  m.p0 = {one(1)};
  m.ps = {{one(1)}};
  m.p1 = {one(1)};
  m.r0 = {one(2)};
  m.rs = {{one(3)}};
  m.r1 = {one(5)};
  m.gamma = 0.5;
  ASSERT_TRUE(validate(m).ok());
  const auto pol = make_joint_policy(m, uniform_policy(m, 0, 0),
                                     uniform_policy(m, 1, 0));
  auto c = induced_chain(m, pol);
  EXPECT_DOUBLE_EQ(c.transition(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(c.reward(0), 30.0);
  m.reward_mode = RewardMode::kSum;
  c = induced_chain(m, pol);
  EXPECT_DOUBLE_EQ(c.reward(0), 10.0);
}

TEST(InducedChain, ExampleRowEntry) {
  const auto m = example_model();
  const auto pol = parse_policy_literal(m, "0000:1100");
  const auto c = induced_chain(m, pol);
  EXPECT_NEAR(c.transition(0, 0), 0.8229 * 0.1838 * 0.4083, 1e-15);
  EXPECT_NEAR(c.transition(0, 0), 0.061755, 5e-7);
}

TEST(InducedChain, MatchesNaiveOnExampleAndRandom) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto m = seed == 0 ? example_model() : random_model(seed, {2, 2, 3, 3, 2});
    if (seed % 2) m.reward_mode = RewardMode::kSum;
    std::mt19937_64 rng(seed);
    AgentPolicy p0 = uniform_policy(m, 0, 0), p1 = uniform_policy(m, 1, 0);
    for (auto& a : p0.actions) a = static_cast<int>(rng() % m.m0);
    for (auto& a : p1.actions) a = static_cast<int>(rng() % m.m1);
    const auto pol = make_joint_policy(m, p0, p1);
    const auto c = induced_chain(m, pol);
    const auto ref = naive::chain(m, pol);
    EXPECT_LT((c.transition - ref.p).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((c.reward - ref.r).cwiseAbs().maxCoeff(), 1e-14);
    for (int i = 0; i < c.size(); ++i) {
      EXPECT_NEAR(c.transition.row(i).sum(), 1.0, 1e-9);
    }
  }
}

TEST(InducedChain, ShapeMismatch) {
  const auto m = example_model();
  JointPolicy bad{uniform_policy(m, 0, 0), uniform_policy(m, 1, 0), 0};
  bad.pi1.actions.pop_back();
  try {
    induced_chain(m, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kPolicyShapeMismatch);
  }
}

TEST(ModelJson, RoundTrip) {
  const auto m = example_model();
  const auto back = parse_model_json(model_to_json(m));
  EXPECT_EQ(back.n0, 2);
  EXPECT_EQ(back.reward_mode, RewardMode::kProduct);
  EXPECT_DOUBLE_EQ(back.gamma, 0.98);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) EXPECT_EQ(back.ps[a][b], m.ps[a][b]);
  EXPECT_EQ(back.r1[1], m.r1[1]);
}

TEST(ModelJson, ShippedFileMatchesBuiltIn) {
  const auto m = load_model(std::filesystem::path(CAMDP_DATA_DIR) /
                            "example_model.json");
  const auto e = example_model();
  for (int a = 0; a < 2; ++a) {
    EXPECT_EQ(m.p0[a], e.p0[a]);
    EXPECT_EQ(m.p1[a], e.p1[a]);
    EXPECT_EQ(m.r0[a], e.r0[a]);
  }
}

TEST(ModelJson, ErrorsNameTheField) {
  try {
    parse_model_json(R"({"n0":1})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("'ns'"), std::string::npos);
  }
  EXPECT_THROW(parse_model_json("{not json"), Error);
  EXPECT_THROW(parse_reward_mode("max"), Error);
}
