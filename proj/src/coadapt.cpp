#include "camdp/coadapt.hpp"

#include <iomanip>
#include <map>
#include <sstream>

#include "camdp/chain.hpp"
#include "camdp/eval.hpp"

namespace camdp {

std::string ImproverSpec::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::kClassical:
      out << "classical";
      break;
    case Kind::kRevised:
      out << "revised(eta=" << eta << ")";
      break;
    case Kind::kPiAlike:
      out << "pialike(eta=" << pi_alike.eta << ", kappa=" << pi_alike.kappa
          << ", M=" << pi_alike.window << ")";
      break;
  }
  return out.str();
}

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_number(const std::string& s, std::string_view what) {
  if (s == "inf" || s == "never") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kParse,
              "bad " + std::string(what) + " value '" + s + "'");
}

}  // namespace

ImproverSpec parse_improver_spec(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts[0] == "classical" && parts.size() == 1) {
    return ImproverSpec::classical();
  }
  if (parts[0] == "revised" && parts.size() == 2) {
    return ImproverSpec::revised(parse_number(parts[1], "eta"));
  }
  if (parts[0] == "pialike" && (parts.size() == 3 || parts.size() == 4)) {
    PiAlikeParams p;
    p.eta = parse_number(parts[1], "eta");
    p.kappa = parse_number(parts[2], "kappa");
    if (parts.size() == 4) {
      p.window = static_cast<int>(parse_number(parts[3], "window"));
    }
    return ImproverSpec::pi_alike_with(p);
  }
  throw Error(ErrorCode::kParse,
              "improver must be 'classical', 'revised:<eta>' or "
              "'pialike:<eta>:<kappa>[:<window>]', got '" +
                  std::string(text) + "'");
}

std::string_view to_string(Schedule s) {
  return s == Schedule::kSimultaneous ? "simultaneous" : "alternating";
}

Schedule parse_schedule(std::string_view text) {
  if (text == "simultaneous") return Schedule::kSimultaneous;
  if (text == "alternating") return Schedule::kAlternating;
  throw Error(ErrorCode::kParse,
              "schedule must be 'simultaneous' or 'alternating'");
}

std::string_view to_string(CoadaptStatus s) {
  switch (s) {
    case CoadaptStatus::kRunning: return "running";
    case CoadaptStatus::kConverged: return "converged";
    case CoadaptStatus::kCycling: return "cycling";
    case CoadaptStatus::kMaxIters: return "max_iters";
  }
  return "unknown";
}

std::vector<std::uint64_t> CoadaptTrace::policy_numbers() const {
  std::vector<std::uint64_t> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.policy.number);
  return out;
}

std::string CoadaptTrace::status_label() const {
  if (status == CoadaptStatus::kCycling) {
    return "cycling(" + std::to_string(period) + ")";
  }
  return std::string(to_string(status));
}

std::optional<Cycle> detect_cycle(std::span<const std::uint64_t> trace) {
  const std::size_t n = trace.size();
  if (n >= 2 && trace[n - 1] == trace[n - 2]) return std::nullopt;
  for (std::size_t p = 2; 2 * p <= n; ++p) {
    bool repeats = true;
    for (std::size_t i = n - p; i < n && repeats; ++i) {
      repeats = trace[i] == trace[i - p];
    }
    if (repeats) {
      Cycle c{static_cast<int>(p), {}};
      c.members.assign(trace.begin() + static_cast<std::ptrdiff_t>(n - p),
                       trace.end());
      return c;
    }
  }
  return std::nullopt;
}

namespace {

// Improver plus whatever memory it carries between rounds.
class Improver {
 public:
  Improver(const ImproverSpec& spec, int num_classes) : spec_(spec) {
    if (spec.kind == ImproverSpec::Kind::kPiAlike) {
      state_ = make_pi_alike_state(spec.pi_alike, num_classes);
    }
  }

  // Returns the step and whether the current policy is a fixed point.
  std::pair<ImproveStep, bool> step(const AdvantageReport& report,
                                    const AgentPolicy& current) {
    switch (spec_.kind) {
      case ImproverSpec::Kind::kClassical: {
        auto s = greedy_improve(report, current);
        const bool fixed = s.stable;
        return {std::move(s), fixed};
      }
      case ImproverSpec::Kind::kRevised: {
        auto s = revised_improve(report, current, spec_.eta);
        const bool fixed = s.stable;
        return {std::move(s), fixed};
      }
      case ImproverSpec::Kind::kPiAlike: {
        auto out = pi_alike_improve(report, current, std::move(*state_));
        state_ = std::move(out.state);
        const bool fixed =
            out.step.stable && pi_alike_is_fixed_point(report, *state_);
        return {std::move(out.step), fixed};
      }
    }
    return {ImproveStep{current, true, {}}, true};
  }

 private:
  ImproverSpec spec_;
  std::optional<PiAlikeState> state_;
};

struct Evaluated {
  InducedChain chain;
  EvalResult eval;
};

Evaluated evaluate(const FactoredCaMDP& model, const JointPolicy& policy,
                   double tolerance) {
  Evaluated e{induced_chain(model, policy), {}};
  e.eval = evaluate_direct(e.chain, model.gamma);
  if (e.eval.residual > tolerance) {
    throw Error(ErrorCode::kSingularSystem,
                "evaluation residual above tolerance");
  }
  return e;
}

CoadaptStep record(int iter, const JointPolicy& policy, const Evaluated& e) {
  CoadaptStep s;
  s.iter = iter;
  s.policy = policy;
  s.gain = e.eval.gain;
  s.value = value_summary(e.chain, e.eval.values);
  return s;
}

std::string csv_field(const std::string& s) {
  return s.find(',') == std::string::npos ? s : "\"" + s + "\"";
}

std::string key(const JointPolicy& p) {
  return digits(p.pi0) + ":" + digits(p.pi1) + "/" +
         std::to_string(static_cast<int>(p.pi0.domain)) +
         std::to_string(static_cast<int>(p.pi1.domain));
}

}  // namespace

CoadaptTrace run_coadapt(const FactoredCaMDP& base, const JointPolicy& init,
                         const CoadaptConfig& config) {
  if (config.max_iters < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_iters must be >= 1");
  }
  FactoredCaMDP model = base;
  if (config.gamma) model.gamma = *config.gamma;
  if (config.reward_mode) model.reward_mode = *config.reward_mode;
  require_valid(model);

  JointPolicy current = make_joint_policy(model, init.pi0, init.pi1);
  Improver improver0(config.agent0,
                     domain_size(model, 0, current.pi0.domain));
  Improver improver1(config.agent1,
                     domain_size(model, 1, current.pi1.domain));

  // Cycle detection runs on interned ids so unnumbered (full-state) policies
  // are handled exactly.
  std::map<std::string, std::uint64_t> ids;
  std::vector<std::uint64_t> seq;
  auto intern = [&](const JointPolicy& p) {
    return ids.emplace(key(p), ids.size()).first->second;
  };

  CoadaptTrace trace;
  Evaluated now = evaluate(model, current, config.eval_tolerance);
  trace.steps.push_back(record(0, current, now));
  seq.push_back(intern(current));

  for (int iter = 1; iter <= config.max_iters; ++iter) {
    const auto report0 = action_values(model, current, now.eval.values, 0);
    auto [step0, fixed0] = improver0.step(report0, current.pi0);

    AdvantageReport report1;
    JointPolicy mid = current;
    if (config.schedule == Schedule::kAlternating && !step0.stable) {
      mid = make_joint_policy(model, step0.policy, current.pi1);
      const Evaluated e = evaluate(model, mid, config.eval_tolerance);
      report1 = action_values(model, mid, e.eval.values, 1);
    } else {
      report1 = action_values(model, current, now.eval.values, 1);
    }
    auto [step1, fixed1] = improver1.step(report1, current.pi1);

    const bool no_switch = step0.stable && step1.stable;
    current = make_joint_policy(model, std::move(step0.policy),
                                std::move(step1.policy));
    if (!no_switch) now = evaluate(model, current, config.eval_tolerance);
    CoadaptStep s = record(iter, current, now);
    s.switched0 = std::move(step0.switched);
    s.switched1 = std::move(step1.switched);
    trace.steps.push_back(std::move(s));

    if (no_switch && fixed0 && fixed1) {
      trace.status = CoadaptStatus::kConverged;
      return trace;
    }
    seq.push_back(intern(current));
    if (auto cycle = detect_cycle(seq)) {
      trace.status = CoadaptStatus::kCycling;
      trace.period = cycle->period;
      const auto first = trace.steps.size() - static_cast<std::size_t>(cycle->period);
      for (std::size_t i = first; i < trace.steps.size(); ++i) {
        trace.cycle.push_back(trace.steps[i].policy);
      }
      return trace;
    }
  }
  trace.status = CoadaptStatus::kMaxIters;
  return trace;
}

std::vector<JointPolicy> response_pairs(const FactoredCaMDP& model,
                                        const CoadaptTrace& trace) {
  std::vector<JointPolicy> out;
  if (trace.status != CoadaptStatus::kCycling) return out;
  const std::size_t n = trace.steps.size();
  const auto period = static_cast<std::size_t>(trace.period);
  // The last `period` rounds, each paired with its successor round; the
  // successor of the final step wraps to the start of the period.
  for (std::size_t k = 0; k < period; ++k) {
    const std::size_t i = n - 1 - period + k;
    const std::size_t next = i + 1;
    out.push_back(make_joint_policy(model, trace.steps[i].policy.pi0,
                                    trace.steps[next].policy.pi1));
  }
  return out;
}

void write_trace_csv(const CoadaptTrace& trace, std::ostream& out) {
  out << "iter,policy_no,pi0_digits,pi1_digits,gain,switches_agent0,"
         "switches_agent1,status\n";
  std::ostringstream line;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    line.str("");
    line << std::setprecision(17);
    line << s.iter << ',' << s.policy.number << ','
         << csv_field(digits(s.policy.pi0)) << ','
         << csv_field(digits(s.policy.pi1)) << ',' << s.gain << ','
         << s.switched0.size() << ',' << s.switched1.size() << ','
         << (i + 1 == trace.steps.size() ? trace.status_label()
                                         : std::string("running"));
    out << line.str() << '\n';
  }
}

int exit_code(CoadaptStatus status) {
  switch (status) {
    case CoadaptStatus::kConverged: return 0;
    case CoadaptStatus::kCycling: return 2;
    case CoadaptStatus::kMaxIters: return 3;
    case CoadaptStatus::kRunning: return 1;
  }
  return 1;
}

}  // namespace camdp
