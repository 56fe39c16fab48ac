#include "camdp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "camdp/chain.hpp"
#include "camdp/eval.hpp"
#include "json.hpp"

namespace camdp {

std::string Criterion::describe() const {
  if (kind == Kind::kGain) return "gain";
  std::ostringstream out;
  out << "discounted(gamma=" << gamma;
  if (state) out << ", state=" << *state;
  out << ")";
  return out.str();
}

double criterion_value(const FactoredCaMDP& model, const JointPolicy& policy,
                       const Criterion& criterion) {
  const InducedChain chain = induced_chain(model, policy);
  if (criterion.kind == Criterion::Kind::kGain) return gain(chain);
  const EvalResult r = evaluate_iterative(chain, criterion.gamma, 1e-12);
  if (criterion.state) {
    const int s = *criterion.state;
    if (s < 0 || s >= chain.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "criterion state " + std::to_string(s) + " out of range");
    }
    return r.values(s);
  }
  return value_summary(chain, r.values);
}

BruteForceResult brute_force_optimal(const FactoredCaMDP& model,
                                     const Criterion& criterion,
                                     std::uint64_t cap) {
  BruteForceResult out;
  bool first = true;
  for_each_joint_policy(
      model,
      [&](const JointPolicy& p) {
        const double v = criterion_value(model, p, criterion);
        out.table.push_back({p, v});
        if (first || v > out.value) {
          out.best = p;
          out.value = v;
          first = false;
        }
      },
      cap);
  return out;
}

std::vector<CalibrationTarget> reference_targets(const FactoredCaMDP& model) {
  const std::pair<const char*, double> rows[] = {
      {"1111:1111", 0.180}, {"0111:1100", 0.187}, {"0001:1100", 0.207},
      {"0000:1100", 0.210}, {"1010:1110", 0.196}};
  std::vector<CalibrationTarget> out;
  for (const auto& [literal, value] : rows) {
    out.push_back({parse_policy_literal(model, literal), value});
  }
  return out;
}

const CalibrationEntry& CalibrationReport::best_for(RewardMode mode) const {
  const CalibrationEntry* best_entry = nullptr;
  for (const auto& e : entries) {
    if (e.mode == mode &&
        (best_entry == nullptr || e.max_error < best_entry->max_error)) {
      best_entry = &e;
    }
  }
  if (best_entry == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "no calibration entry for mode");
  }
  return *best_entry;
}

namespace {

nlohmann::json entry_json(const CalibrationEntry& e) {
  nlohmann::json j;
  j["reward_mode"] = std::string(to_string(e.mode));
  j["criterion"] = e.criterion.kind == Criterion::Kind::kGain ? "gain"
                                                              : "discounted";
  if (e.criterion.kind == Criterion::Kind::kDiscounted) {
    j["gamma"] = e.criterion.gamma;
  }
  j["values"] = e.values;
  j["errors"] = e.errors;
  j["max_error"] = e.max_error;
  j["ordering_matches"] = e.ordering_matches;
  return j;
}

bool same_order(const std::vector<double>& values,
                const std::vector<CalibrationTarget>& targets) {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      const double dt = targets[i].value - targets[j].value;
      if (dt == 0.0) continue;
      const double dv = values[i] - values[j];
      if ((dt > 0.0) != (dv > 0.0) || dv == 0.0) return false;
    }
  }
  return true;
}

}  // namespace

std::string CalibrationReport::to_json(int indent) const {
  nlohmann::json doc;
  doc["targets"] = nlohmann::json::array();
  for (const auto& t : targets) {
    doc["targets"].push_back({{"policy", digits(t.policy.pi0) + ":" +
                                             digits(t.policy.pi1)},
                              {"number", t.policy.number},
                              {"value", t.value}});
  }
  doc["entries"] = nlohmann::json::array();
  for (const auto& e : entries) doc["entries"].push_back(entry_json(e));
  doc["best"] = entry_json(best_entry());
  doc["best_per_mode"] = {
      {"product", entry_json(best_for(RewardMode::kProduct))},
      {"sum", entry_json(best_for(RewardMode::kSum))}};
  return doc.dump(indent);
}

CalibrationReport calibrate(const FactoredCaMDP& model,
                            const std::vector<CalibrationTarget>& targets) {
  if (targets.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "calibration needs targets");
  }
  CalibrationReport report;
  report.targets = targets;
  for (RewardMode mode : {RewardMode::kProduct, RewardMode::kSum}) {
    FactoredCaMDP m = model;
    m.reward_mode = mode;
    std::vector<InducedChain> chains;
    for (const auto& t : targets) chains.push_back(induced_chain(m, t.policy));

    std::vector<Criterion> criteria{Criterion::gain()};
    for (double g : kCalibrationGammas) {
      criteria.push_back(Criterion::discounted(g));
    }
    for (const auto& c : criteria) {
      CalibrationEntry e{mode, c, {}, {}, 0.0, false};
      for (std::size_t i = 0; i < targets.size(); ++i) {
        const double v =
            c.kind == Criterion::Kind::kGain
                ? gain(chains[i])
                : value_summary(chains[i],
                                evaluate_direct(chains[i], c.gamma).values);
        e.values.push_back(v);
        e.errors.push_back(std::abs(v - targets[i].value));
        e.max_error = std::max(e.max_error, e.errors.back());
      }
      e.ordering_matches = same_order(e.values, targets);
      report.entries.push_back(std::move(e));
    }
  }
  for (std::size_t i = 1; i < report.entries.size(); ++i) {
    if (report.entries[i].max_error < report.entries[report.best].max_error) {
      report.best = i;
    }
  }
  return report;
}

FactoredCaMDP apply_calibration(const FactoredCaMDP& model,
                                const CalibrationReport& report) {
  FactoredCaMDP out = model;
  const auto& best = report.best_entry();
  out.reward_mode = best.mode;
  if (best.criterion.kind == Criterion::Kind::kDiscounted) {
    out.gamma = best.criterion.gamma;
  }
  return out;
}

std::string EtaScanRow::outcome() const {
  std::string out(to_string(status));
  out += ':';
  if (status == CoadaptStatus::kCycling) {
    std::vector<std::uint64_t> members;
    for (const auto& p : cycle) members.push_back(p.number);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(members[i]);
    }
  } else {
    out += std::to_string(final_policy.number);
  }
  return out;
}

namespace {

EtaScanRow scan_one(const FactoredCaMDP& model, const JointPolicy& init,
                    double eta, CoadaptConfig config) {
  config.agent0 = ImproverSpec::revised(eta);
  const CoadaptTrace trace = run_coadapt(model, init, config);
  EtaScanRow row;
  row.eta = eta;
  row.status = trace.status;
  row.period = trace.period;
  row.rounds = trace.rounds();
  row.final_policy = trace.final_policy();
  row.final_value = trace.steps.back().value;
  row.cycle = trace.cycle;
  FactoredCaMDP m = model;
  if (config.gamma) m.gamma = *config.gamma;
  if (config.reward_mode) m.reward_mode = *config.reward_mode;
  row.responses = response_pairs(m, trace);
  return row;
}

}  // namespace

std::vector<EtaScanRow> eta_band_scan(const FactoredCaMDP& model,
                                      const JointPolicy& init,
                                      const std::vector<double>& etas,
                                      const CoadaptConfig& config) {
  for (std::size_t i = 0; i < etas.size(); ++i) {
    if (!(etas[i] >= 0.0) || (i > 0 && etas[i] > etas[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "eta grid must be non-negative and non-increasing");
    }
  }
  std::vector<EtaScanRow> rows;
  rows.reserve(etas.size());
  for (double eta : etas) rows.push_back(scan_one(model, init, eta, config));
  return rows;
}

namespace {

// Bisects (lo, hi) until the outcome change is pinned down. A third outcome
// found at a midpoint is a band the grid skipped; both sides are refined.
void refine_between(const FactoredCaMDP& model, const JointPolicy& init,
                    const CoadaptConfig& config, double hi, std::string above,
                    double lo, std::string below, int bisections,
                    std::vector<BandEdge>& edges) {
  for (int k = 0; k < bisections; ++k) {
    const double mid = 0.5 * (hi + lo);
    if (mid == hi || mid == lo) break;
    const std::string o = scan_one(model, init, mid, config).outcome();
    if (o == above) {
      hi = mid;
    } else if (o == below) {
      lo = mid;
    } else {
      refine_between(model, init, config, hi, above, mid, o, bisections - k - 1,
                     edges);
      refine_between(model, init, config, mid, o, lo, below, bisections - k - 1,
                     edges);
      return;
    }
  }
  edges.push_back({hi, std::move(above), std::move(below)});
}

}  // namespace

std::vector<BandEdge> refine_band_edges(const FactoredCaMDP& model,
                                        const JointPolicy& init,
                                        const std::vector<EtaScanRow>& rows,
                                        const CoadaptConfig& config,
                                        int bisections) {
  std::vector<BandEdge> edges;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const std::string above = rows[i].outcome();
    const std::string below = rows[i + 1].outcome();
    if (above == below) continue;
    refine_between(model, init, config, rows[i].eta, above, rows[i + 1].eta,
                   below, bisections, edges);
  }
  return edges;
}

std::vector<double> log_grid(double hi, double lo, int points) {
  if (!(hi > 0.0 && lo > 0.0 && hi >= lo) || points < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bad log grid bounds");
  }
  std::vector<double> out;
  if (points == 1) return {hi};
  const double step = std::log(lo / hi) / (points - 1);
  for (int i = 0; i < points; ++i) out.push_back(hi * std::exp(step * i));
  out.back() = lo;
  return out;
}

}  // namespace camdp
