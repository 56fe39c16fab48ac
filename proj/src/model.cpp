#include "camdp/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace camdp {

using json = nlohmann::json;

std::string_view to_string(RewardMode mode) {
  return mode == RewardMode::kProduct ? "product" : "sum";
}

RewardMode parse_reward_mode(std::string_view text) {
  if (text == "product") return RewardMode::kProduct;
  if (text == "sum") return RewardMode::kSum;
  throw Error(ErrorCode::kParse,
              "reward_mode must be 'product' or 'sum', got '" +
                  std::string(text) + "'");
}

JointState joint_state(const FactoredCaMDP& model, int flat) {
  JointState s;
  s.flat_index = flat;
  s.s1 = flat % model.n1;
  const int rest = flat / model.n1;
  s.ss = rest % model.ns;
  s.s0 = rest / model.ns;
  return s;
}

int flat_index(const FactoredCaMDP& model, int s0, int ss, int s1) {
  return (s0 * model.ns + ss) * model.n1 + s1;
}

double aggregate_reward(RewardMode mode, double r0, double rs, double r1) {
  return mode == RewardMode::kProduct ? r0 * rs * r1 : r0 + rs + r1;
}

std::string Violation::location() const {
  std::ostringstream out;
  out << table;
  for (int i : indices) out << '[' << i << ']';
  return out.str();
}

std::string Violation::describe() const {
  std::string out = std::string(to_string(code)) + " in " + location();
  if (!detail.empty()) out += ": " + detail;
  return out;
}

std::string ValidationReport::describe() const {
  if (ok()) return "ok";
  std::ostringstream out;
  for (const auto& v : violations) out << v.describe() << '\n';
  return out.str();
}

namespace {

struct Checker {
  ValidationReport report;

  void add(ErrorCode code, std::string table, std::vector<int> indices,
           std::string detail) {
    report.violations.push_back(
        {code, std::move(table), std::move(indices), std::move(detail)});
  }

  bool shape(const Eigen::MatrixXd& m, int rows, int cols,
             const std::string& table, const std::vector<int>& prefix) {
    if (m.rows() == rows && m.cols() == cols) return true;
    std::ostringstream d;
    d << "expected " << rows << "x" << cols << ", got " << m.rows() << "x"
      << m.cols();
    add(ErrorCode::kDimensionMismatch, table, prefix, d.str());
    return false;
  }

  void stochastic(const Eigen::MatrixXd& m, const std::string& table,
                  const std::vector<int>& prefix) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      std::vector<int> where = prefix;
      where.push_back(static_cast<int>(i));
      bool row_ok = true;
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double p = m(i, j);
        if (!std::isfinite(p) || p < 0.0) {
          auto cell = where;
          cell.push_back(static_cast<int>(j));
          std::ostringstream d;
          d << "entry " << p << " is not a probability";
          add(ErrorCode::kNegativeEntry, table, cell, d.str());
          row_ok = false;
        } else if (p > 1.0 + kStochasticTolerance) {
          auto cell = where;
          cell.push_back(static_cast<int>(j));
          std::ostringstream d;
          d << "entry " << p << " exceeds 1";
          add(ErrorCode::kNotStochastic, table, cell, d.str());
          row_ok = false;
        }
      }
      if (!row_ok) continue;
      const double sum = m.row(i).sum();
      if (std::abs(sum - 1.0) > kStochasticTolerance) {
        std::ostringstream d;
        d.precision(12);
        d << "row sums to " << sum;
        add(ErrorCode::kNotStochastic, table, where, d.str());
      }
    }
  }

  void finite(const Eigen::MatrixXd& m, const std::string& table,
              const std::vector<int>& prefix) {
    if (!m.allFinite()) {
      add(ErrorCode::kInvalidArgument, table, prefix, "non-finite reward");
    }
  }
};

}  // namespace

ValidationReport validate(const FactoredCaMDP& model) {
  Checker c;
  const struct {
    const char* name;
    int value;
  } sizes[] = {{"n0", model.n0}, {"ns", model.ns}, {"n1", model.n1},
               {"m0", model.m0}, {"m1", model.m1}};
  bool sizes_ok = true;
  for (const auto& s : sizes) {
    if (s.value < 1) {
      c.add(ErrorCode::kDimensionMismatch, s.name, {},
            "must be a positive integer");
      sizes_ok = false;
    }
  }
  if (!(model.gamma > 0.0 && model.gamma < 1.0)) {
    std::ostringstream d;
    d << "gamma " << model.gamma << " is outside (0, 1)";
    c.add(ErrorCode::kBadGamma, "gamma", {}, d.str());
  }
  if (!sizes_ok) return c.report;

  auto check_single = [&](const std::vector<Eigen::MatrixXd>& probs,
                          const std::vector<Eigen::MatrixXd>& rewards,
                          int actions, int n, const std::string& pname,
                          const std::string& rname) {
    if (static_cast<int>(probs.size()) != actions) {
      c.add(ErrorCode::kDimensionMismatch, pname, {},
            "expected " + std::to_string(actions) + " action tables, got " +
                std::to_string(probs.size()));
    }
    if (static_cast<int>(rewards.size()) != actions) {
      c.add(ErrorCode::kDimensionMismatch, rname, {},
            "expected " + std::to_string(actions) + " action tables, got " +
                std::to_string(rewards.size()));
    }
    for (std::size_t a = 0; a < probs.size(); ++a) {
      if (c.shape(probs[a], n, n, pname, {static_cast<int>(a)})) {
        c.stochastic(probs[a], pname, {static_cast<int>(a)});
      }
    }
    for (std::size_t a = 0; a < rewards.size(); ++a) {
      if (c.shape(rewards[a], n, n, rname, {static_cast<int>(a)})) {
        c.finite(rewards[a], rname, {static_cast<int>(a)});
      }
    }
  };

  check_single(model.p0, model.r0, model.m0, model.n0, "P0", "R0");
  check_single(model.p1, model.r1, model.m1, model.n1, "P1", "R1");

  auto check_shared = [&](const std::vector<std::vector<Eigen::MatrixXd>>& t,
                          const std::string& name, bool probabilities) {
    if (static_cast<int>(t.size()) != model.m0) {
      c.add(ErrorCode::kDimensionMismatch, name, {},
            "expected " + std::to_string(model.m0) + " agent-0 action blocks");
    }
    for (std::size_t a0 = 0; a0 < t.size(); ++a0) {
      if (static_cast<int>(t[a0].size()) != model.m1) {
        c.add(ErrorCode::kDimensionMismatch, name, {static_cast<int>(a0)},
              "expected " + std::to_string(model.m1) + " agent-1 action blocks");
      }
      for (std::size_t a1 = 0; a1 < t[a0].size(); ++a1) {
        const std::vector<int> where{static_cast<int>(a0),
                                     static_cast<int>(a1)};
        if (!c.shape(t[a0][a1], model.ns, model.ns, name, where)) continue;
        if (probabilities) {
          c.stochastic(t[a0][a1], name, where);
        } else {
          c.finite(t[a0][a1], name, where);
        }
      }
    }
  };
  check_shared(model.ps, "Ps", true);
  check_shared(model.rs, "Rs", false);
  return c.report;
}

void require_valid(const FactoredCaMDP& model) {
  const auto report = validate(model);
  if (!report.ok()) {
    const auto& first = report.violations.front();
    throw Error(first.code, first.location() + ": " + first.detail);
  }
}

FactoredCaMDP normalized(FactoredCaMDP model) {
  auto fix = [](Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double sum = m.row(i).sum();
      if (sum > 0.0) m.row(i) /= sum;
    }
  };
  for (auto& m : model.p0) fix(m);
  for (auto& m : model.p1) fix(m);
  for (auto& block : model.ps) {
    for (auto& m : block) fix(m);
  }
  return model;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::MatrixXd kron3(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                      const Eigen::MatrixXd& c) {
  return kron(kron(a, b), c);
}

// --- JSON ------------------------------------------------------------------

namespace {

const json& field(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) {
    throw Error(ErrorCode::kParse, std::string("missing field '") + name + "'");
  }
  return *it;
}

int size_field(const json& doc, const char* name) {
  const json& v = field(doc, name);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::kParse,
                std::string("field '") + name + "' must be an integer");
  }
  return v.get<int>();
}

Eigen::MatrixXd matrix_from(const json& v, const std::string& where) {
  if (!v.is_array()) {
    throw Error(ErrorCode::kParse, where + " must be an array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols =
      rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(v[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::kDimensionMismatch,
                  where + " row " + std::to_string(i) + " is ragged");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      const json& x = row[static_cast<std::size_t>(j)];
      if (!x.is_number()) {
        throw Error(ErrorCode::kParse, where + "[" + std::to_string(i) + "][" +
                                           std::to_string(j) +
                                           "] is not a number");
      }
      m(i, j) = x.get<double>();
    }
  }
  return m;
}

std::vector<Eigen::MatrixXd> tables_from(const json& doc, const char* name) {
  const json& v = field(doc, name);
  if (!v.is_array()) {
    throw Error(ErrorCode::kParse, std::string(name) + " must be an array");
  }
  std::vector<Eigen::MatrixXd> out;
  for (std::size_t a = 0; a < v.size(); ++a) {
    out.push_back(matrix_from(v[a], std::string(name) + "[" +
                                        std::to_string(a) + "]"));
  }
  return out;
}

std::vector<std::vector<Eigen::MatrixXd>> shared_tables_from(const json& doc,
                                                             const char* name) {
  const json& v = field(doc, name);
  if (!v.is_array()) {
    throw Error(ErrorCode::kParse, std::string(name) + " must be an array");
  }
  std::vector<std::vector<Eigen::MatrixXd>> out(v.size());
  for (std::size_t a0 = 0; a0 < v.size(); ++a0) {
    if (!v[a0].is_array()) {
      throw Error(ErrorCode::kParse, std::string(name) + "[" +
                                         std::to_string(a0) +
                                         "] must be an array");
    }
    for (std::size_t a1 = 0; a1 < v[a0].size(); ++a1) {
      out[a0].push_back(matrix_from(
          v[a0][a1], std::string(name) + "[" + std::to_string(a0) + "][" +
                         std::to_string(a1) + "]"));
    }
  }
  return out;
}

json matrix_to(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json tables_to(const std::vector<Eigen::MatrixXd>& t) {
  json out = json::array();
  for (const auto& m : t) out.push_back(matrix_to(m));
  return out;
}

json shared_tables_to(const std::vector<std::vector<Eigen::MatrixXd>>& t) {
  json out = json::array();
  for (const auto& block : t) out.push_back(tables_to(block));
  return out;
}

}  // namespace

FactoredCaMDP parse_model_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kParse, "model document must be a JSON object");
  }
  FactoredCaMDP m;
  m.n0 = size_field(doc, "n0");
  m.ns = size_field(doc, "ns");
  m.n1 = size_field(doc, "n1");
  m.m0 = size_field(doc, "m0");
  m.m1 = size_field(doc, "m1");
  const json& gamma = field(doc, "gamma");
  if (!gamma.is_number()) {
    throw Error(ErrorCode::kParse, "field 'gamma' must be a number");
  }
  m.gamma = gamma.get<double>();
  const json& mode = field(doc, "reward_mode");
  if (!mode.is_string()) {
    throw Error(ErrorCode::kParse, "field 'reward_mode' must be a string");
  }
  m.reward_mode = parse_reward_mode(mode.get<std::string>());
  m.p0 = tables_from(doc, "P0");
  m.ps = shared_tables_from(doc, "Ps");
  m.p1 = tables_from(doc, "P1");
  m.r0 = tables_from(doc, "R0");
  m.rs = shared_tables_from(doc, "Rs");
  m.r1 = tables_from(doc, "R1");
  return m;
}

std::string model_to_json(const FactoredCaMDP& model, int indent) {
  json doc;
  doc["n0"] = model.n0;
  doc["ns"] = model.ns;
  doc["n1"] = model.n1;
  doc["m0"] = model.m0;
  doc["m1"] = model.m1;
  doc["gamma"] = model.gamma;
  doc["reward_mode"] = std::string(to_string(model.reward_mode));
  doc["P0"] = tables_to(model.p0);
  doc["Ps"] = shared_tables_to(model.ps);
  doc["P1"] = tables_to(model.p1);
  doc["R0"] = tables_to(model.r0);
  doc["Rs"] = shared_tables_to(model.rs);
  doc["R1"] = tables_to(model.r1);
  return doc.dump(indent);
}

FactoredCaMDP load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kParse, "cannot open model file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  FactoredCaMDP model = parse_model_json(buf.str());
  require_valid(model);
  return normalized(std::move(model));
}

void save_model(const FactoredCaMDP& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::kParse, "cannot write model file " + path.string());
  }
  out << model_to_json(model) << '\n';
}

FactoredCaMDP example_model() {
  auto m2 = [](double a, double b, double c, double d) {
    Eigen::MatrixXd m(2, 2);
    m << a, b, c, d;
    return m;
  };
  FactoredCaMDP m;
  m.n0 = m.ns = m.n1 = 2;
  m.m0 = m.m1 = 2;
  m.gamma = 0.98;
  m.reward_mode = RewardMode::kProduct;

  m.p0 = {m2(0.8229, 0.1771, 0.7826, 0.2174),
          m2(0.6406, 0.3594, 0.4919, 0.5081)};
  m.ps = {{m2(0.5821, 0.4179, 0.3839, 0.6161),
           m2(0.1838, 0.8162, 0.5686, 0.4314)},
          {m2(0.6990, 0.3010, 0.6169, 0.3831),
           m2(0.3448, 0.6552, 0.6432, 0.3568)}};
  m.p1 = {m2(0.8022, 0.1978, 0.5396, 0.4604),
          m2(0.4083, 0.5917, 0.5815, 0.4185)};

  m.r0 = {m2(0.1565, 0.1769, 0.1909, 0.1425),
          m2(0.0520, 0.2813, 0.1530, 0.1803)};
  m.rs = {{m2(0.2136, 0.1197, 0.1533, 0.1800),
           m2(0.3047, 0.0286, 0.0895, 0.2438)},
          {m2(0.0077, 0.3257, 0.1378, 0.1955),
           m2(0.2806, 0.0527, 0.1625, 0.1708)}};
  m.r1 = {m2(0.0190, 0.3144, 0.3120, 0.0213),
          m2(0.1878, 0.1455, 0.0450, 0.2883)};
  return normalized(std::move(m));
}

}  // namespace camdp
