#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "camdp/chain.hpp"
#include "camdp/coadapt.hpp"
#include "camdp/eval.hpp"
#include "camdp/improve.hpp"
#include "camdp/model.hpp"
#include "camdp/oracle.hpp"
#include "camdp/policy.hpp"
#include "camdp/random_model.hpp"

namespace camdp::cli {

namespace {

struct Globals {
  std::string model_path;
  std::optional<double> gamma;
  std::string reward_mode;
  std::string csv_path;
  std::optional<std::uint64_t> seed;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// --model wins; otherwise --seed picks a random instance; otherwise the
// built-in example.
FactoredCaMDP resolve_model(const Globals& g) {
  FactoredCaMDP m;
  if (!g.model_path.empty()) {
    m = load_model(g.model_path);
  } else if (g.seed) {
    m = random_model(*g.seed);
  } else {
    m = example_model();
  }
  if (g.gamma) m.gamma = *g.gamma;
  if (!g.reward_mode.empty()) m.reward_mode = parse_reward_mode(g.reward_mode);
  require_valid(m);
  return m;
}

// Opens --csv, or returns null when it was not given.
std::unique_ptr<std::ofstream> open_csv(const Globals& g) {
  if (g.csv_path.empty()) return nullptr;
  auto f = std::make_unique<std::ofstream>(g.csv_path);
  if (!*f) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot write '" + g.csv_path + "'");
  }
  *f << std::setprecision(17);
  return f;
}

std::string state_label(const JointState& s) {
  return "(" + std::to_string(s.s0) + "," + std::to_string(s.ss) + "," +
         std::to_string(s.s1) + ")";
}

int cmd_validate(const Globals& g, std::ostream& out, std::ostream& err) {
  FactoredCaMDP m;
  if (!g.model_path.empty()) {
    m = parse_model_json(read_file(g.model_path));
  } else {
    m = resolve_model(g);
  }
  if (g.gamma) m.gamma = *g.gamma;
  if (!g.reward_mode.empty()) m.reward_mode = parse_reward_mode(g.reward_mode);
  const ValidationReport report = validate(m);
  if (!report.ok()) {
    err << report.describe();
    return 1;
  }
  out << "ok: n0=" << m.n0 << " ns=" << m.ns << " n1=" << m.n1
      << " m0=" << m.m0 << " m1=" << m.m1 << " gamma=" << m.gamma
      << " reward_mode=" << to_string(m.reward_mode) << "\n";
  return 0;
}

int cmd_eval(const Globals& g, const std::string& policy_text,
             const std::string& method, std::ostream& out) {
  const FactoredCaMDP m = resolve_model(g);
  const JointPolicy policy = parse_policy_literal(m, policy_text);
  const InducedChain chain = induced_chain(m, policy);
  EvalResult r;
  if (method == "direct") {
    r = evaluate_direct(chain, m.gamma);
  } else if (method == "iterative") {
    r = evaluate_iterative(chain, m.gamma);
  } else {
    throw Error(ErrorCode::kParse, "--method must be direct or iterative");
  }
  out << "policy " << format_policy(policy) << "  gamma=" << m.gamma
      << "  reward_mode=" << to_string(m.reward_mode) << "\n";
  out << "state  (s0,ss,s1)  value\n";
  for (int i = 0; i < chain.size(); ++i) {
    out << std::setw(5) << i << "  " << std::setw(9)
        << state_label(joint_state(m, i)) << "  " << r.values(i) << "\n";
  }
  out << "gain " << gain(chain) << "\n";
  out << "mean V (stationary) " << value_summary(chain, r.values) << "\n";
  if (auto csv = open_csv(g)) {
    *csv << "state_index,s0,ss,s1,value\n";
    for (int i = 0; i < chain.size(); ++i) {
      const JointState s = joint_state(m, i);
      *csv << i << ',' << s.s0 << ',' << s.ss << ',' << s.s1 << ','
           << r.values(i) << '\n';
    }
  }
  return 0;
}

struct ImproveArgs {
  std::string policy = "1111:1100";
  int agent = 0;
  std::string mode = "classical";
  double eta = 0.0;
  double kappa = 1.0;
  int window = 1000;
};

int cmd_improve(const Globals& g, const ImproveArgs& a, std::ostream& out) {
  const FactoredCaMDP m = resolve_model(g);
  const JointPolicy policy = parse_policy_literal(m, a.policy);
  const InducedChain chain = induced_chain(m, policy);
  const EvalResult r = evaluate_direct(chain, m.gamma);
  const AdvantageReport report = action_values(m, policy, r.values, a.agent);
  const AgentPolicy& current = a.agent == 0 ? policy.pi0 : policy.pi1;

  ImproveStep step;
  if (a.mode == "classical") {
    step = greedy_improve(report, current);
  } else if (a.mode == "revised") {
    step = revised_improve(report, current, a.eta);
  } else if (a.mode == "pialike") {
    PiAlikeParams p{a.eta, a.kappa, a.window};
    step = pi_alike_improve(
               report, current,
               make_pi_alike_state(p, static_cast<int>(report.classes.size())))
               .step;
  } else {
    throw Error(ErrorCode::kParse,
                "--mode must be classical, revised or pialike");
  }

  out << "policy " << format_policy(policy) << "  agent " << a.agent
      << "  mode " << a.mode << "\n";
  out << "class  (own,shared)  current  best  J_k  I_k\n";
  for (std::size_t c = 0; c < report.classes.size(); ++c) {
    const auto& k = report.classes[c];
    const int own = static_cast<int>(c) / m.ns;
    const int shared = static_cast<int>(c) % m.ns;
    out << std::setw(5) << c << "  (" << own << "," << shared << ")"
        << std::setw(12) << k.current << std::setw(6) << k.best << "  "
        << k.backup << "  " << k.advantage << "\n";
  }
  out << "old " << digits(current) << "\n";
  out << "new " << digits(step.policy) << (step.stable ? "  (stable)" : "")
      << "\n";
  return 0;
}

struct CoadaptArgs {
  std::string init = "1111:1100";
  std::string schedule = "simultaneous";
  std::string agent0 = "classical";
  std::string agent1 = "classical";
  int max_iters = 50;
};

int cmd_coadapt(const Globals& g, const CoadaptArgs& a, std::ostream& out) {
  const FactoredCaMDP m = resolve_model(g);
  CoadaptConfig config;
  config.schedule = parse_schedule(a.schedule);
  config.agent0 = parse_improver_spec(a.agent0);
  config.agent1 = parse_improver_spec(a.agent1);
  if (a.max_iters < 1) {
    throw Error(ErrorCode::kInvalidArgument, "--max-iters must be >= 1");
  }
  config.max_iters = a.max_iters;
  const CoadaptTrace trace =
      run_coadapt(m, parse_policy_literal(m, a.init), config);

  out << "schedule " << to_string(config.schedule) << "  agent0 "
      << config.agent0.describe() << "  agent1 " << config.agent1.describe()
      << "\n";
  out << " iter  policy                       gain         mean V     sw0 sw1\n";
  for (const auto& s : trace.steps) {
    out << std::setw(5) << s.iter << "  " << std::left << std::setw(27)
        << format_policy(s.policy) << std::right << std::setw(12) << s.gain
        << std::setw(12) << s.value << std::setw(5) << s.switched0.size()
        << std::setw(4) << s.switched1.size() << "\n";
  }
  out << "status " << trace.status_label();
  if (trace.status == CoadaptStatus::kCycling) {
    out << "  members";
    for (const auto& p : trace.cycle) out << " No." << p.number;
  }
  out << "\n";
  if (auto csv = open_csv(g)) write_trace_csv(trace, *csv);
  return exit_code(trace.status);
}

Criterion parse_criterion(const std::string& text, double gamma) {
  if (text == "gain") return Criterion::gain();
  if (text == "discounted") return Criterion::discounted(gamma);
  throw Error(ErrorCode::kParse, "--criterion must be gain or discounted");
}

int cmd_enumerate(const Globals& g, const std::string& criterion,
                  std::ostream& out) {
  const FactoredCaMDP m = resolve_model(g);
  const BruteForceResult bf =
      brute_force_optimal(m, parse_criterion(criterion, m.gamma));
  out << "criterion " << parse_criterion(criterion, m.gamma).describe()
      << "  reward_mode " << to_string(m.reward_mode) << "  policies "
      << bf.table.size() << "\n";
  out << "best " << format_policy(bf.best) << "  value " << bf.value << "\n";
  std::vector<PolicyValue> ranked = bf.table;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const PolicyValue& x, const PolicyValue& y) {
                     return x.value > y.value;
                   });
  const std::size_t shown = std::min<std::size_t>(10, ranked.size());
  out << "top " << shown << ":\n";
  for (std::size_t i = 0; i < shown; ++i) {
    out << "  " << std::left << std::setw(27) << format_policy(ranked[i].policy)
        << std::right << "  " << ranked[i].value << "\n";
  }
  if (auto csv = open_csv(g)) {
    *csv << "policy_no,pi0,pi1,value\n";
    for (const auto& pv : bf.table) {
      *csv << pv.policy.number << ',' << digits(pv.policy.pi0) << ','
           << digits(pv.policy.pi1) << ',' << pv.value << '\n';
    }
  }
  return 0;
}

int cmd_calibrate(const Globals& g, const std::string& report_path,
                  std::ostream& out) {
  const FactoredCaMDP m = resolve_model(g);
  const CalibrationReport report = calibrate(m, reference_targets(m));
  if (report_path.empty()) {
    out << report.to_json() << "\n";
  } else {
    std::ofstream f(report_path);
    if (!f) {
      throw Error(ErrorCode::kInvalidArgument,
                  "cannot write '" + report_path + "'");
    }
    f << report.to_json() << "\n";
    const auto& b = report.best_entry();
    out << "best " << to_string(b.mode) << " " << b.criterion.describe()
        << "  max error " << b.max_error << "  ordering "
        << (b.ordering_matches ? "matches" : "differs") << "\n";
  }
  return 0;
}

struct ScanArgs {
  std::string init = "1111:1100";
  double hi = 1e-2;
  double lo = 1e-6;
  int points = 41;
  bool refine = false;
  std::string agent1 = "classical";
  int max_iters = 50;
};

int cmd_eta_scan(const Globals& g, const ScanArgs& a, std::ostream& out) {
  const FactoredCaMDP m = resolve_model(g);
  const JointPolicy init = parse_policy_literal(m, a.init);
  CoadaptConfig config;
  config.agent1 = parse_improver_spec(a.agent1);
  config.max_iters = a.max_iters;
  const auto rows =
      eta_band_scan(m, init, log_grid(a.hi, a.lo, a.points), config);
  out << "         eta  outcome            rounds  mean V\n";
  for (const auto& r : rows) {
    out << std::setw(12) << r.eta << "  " << std::left << std::setw(18)
        << r.outcome() << std::right << std::setw(7) << r.rounds << "  "
        << r.final_value << "\n";
  }
  if (a.refine) {
    out << "band edges:\n";
    for (const auto& e : refine_band_edges(m, init, rows, config)) {
      out << "  eta " << e.eta << "  " << e.above << " -> " << e.below << "\n";
    }
  }
  if (auto csv = open_csv(g)) {
    *csv << "eta,status,period,rounds,final_policy_no,final_value,outcome\n";
    for (const auto& r : rows) {
      *csv << r.eta << ',' << to_string(r.status) << ',' << r.period << ','
           << r.rounds << ',' << r.final_policy.number << ',' << r.final_value
           << ',' << r.outcome() << '\n';
    }
  }
  return 0;
}

int cmd_example(const Globals& g, const std::string& path, bool random,
                std::ostream& out) {
  FactoredCaMDP m = random ? random_model(g.seed.value_or(0)) : example_model();
  if (g.gamma) m.gamma = *g.gamma;
  if (!g.reward_mode.empty()) m.reward_mode = parse_reward_mode(g.reward_mode);
  require_valid(m);
  save_model(m, path);
  out << "wrote " << path << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Solver for co-adaptive two-agent MDPs", "camdp"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--model", g.model_path, "Model file (JSON)");
  app.add_option("--gamma", g.gamma, "Override the discount factor");
  app.add_option("--reward-mode", g.reward_mode, "product or sum");
  app.add_option("--csv", g.csv_path, "Write machine-readable output here");
  app.add_option("--seed", g.seed,
                 "Use a seeded random model when --model is absent");

  int code = 0;
  std::function<int()> action;

  app.add_subcommand("validate", "Check a model file")->callback([&] {
    action = [&] { return cmd_validate(g, out, err); };
  });

  std::string eval_policy = "0000:1100";
  std::string eval_method = "direct";
  auto* eval = app.add_subcommand("eval", "Evaluate one joint policy");
  eval->add_option("--policy", eval_policy, "<pi0 digits>:<pi1 digits>");
  eval->add_option("--method", eval_method, "direct or iterative");
  eval->callback([&] {
    action = [&] { return cmd_eval(g, eval_policy, eval_method, out); };
  });

  ImproveArgs ia;
  auto* improve = app.add_subcommand("improve", "One improvement step");
  improve->add_option("--policy", ia.policy, "<pi0 digits>:<pi1 digits>");
  improve->add_option("--agent", ia.agent)->check(CLI::Range(0, 1));
  improve->add_option("--mode", ia.mode, "classical, revised or pialike");
  improve->add_option("--eta", ia.eta);
  improve->add_option("--kappa", ia.kappa);
  improve->add_option("--window", ia.window)->check(CLI::NonNegativeNumber);
  improve->callback([&] { action = [&] { return cmd_improve(g, ia, out); }; });

  CoadaptArgs ca;
  auto* coadapt = app.add_subcommand("coadapt", "Run the two-agent loop");
  coadapt->add_option("--init", ca.init, "<pi0 digits>:<pi1 digits>");
  coadapt->add_option("--schedule", ca.schedule, "simultaneous or alternating");
  coadapt->add_option("--agent0", ca.agent0,
                      "classical | revised:<eta> | pialike:<eta>:<kappa>[:<M>]");
  coadapt->add_option("--agent1", ca.agent1, "as --agent0");
  coadapt->add_option("--max-iters", ca.max_iters);
  coadapt->callback([&] { action = [&] { return cmd_coadapt(g, ca, out); }; });

  std::string criterion = "discounted";
  auto* enumerate =
      app.add_subcommand("enumerate", "Evaluate every joint policy");
  enumerate->add_option("--criterion", criterion, "gain or discounted");
  enumerate->callback(
      [&] { action = [&] { return cmd_enumerate(g, criterion, out); }; });

  std::string report_path;
  auto* calib = app.add_subcommand(
      "calibrate", "Fit reward mode and criterion to the reference values");
  calib->add_option("--report", report_path, "Write the JSON report here");
  calib->callback(
      [&] { action = [&] { return cmd_calibrate(g, report_path, out); }; });

  ScanArgs sa;
  auto* scan = app.add_subcommand("eta-scan", "Sweep agent 0's threshold");
  scan->add_option("--init", sa.init, "<pi0 digits>:<pi1 digits>");
  scan->add_option("--hi", sa.hi)->check(CLI::PositiveNumber);
  scan->add_option("--lo", sa.lo)->check(CLI::PositiveNumber);
  scan->add_option("--points", sa.points)->check(CLI::PositiveNumber);
  scan->add_option("--agent1", sa.agent1);
  scan->add_option("--max-iters", sa.max_iters);
  scan->add_flag("--refine", sa.refine, "Bisect each outcome change");
  scan->callback([&] { action = [&] { return cmd_eta_scan(g, sa, out); }; });

  std::string example_path = "example_model.json";
  bool random = false;
  auto* example = app.add_subcommand("example", "Write a model file");
  example->add_option("--out", example_path);
  example->add_flag("--random", random, "Seeded random model (see --seed)");
  example->callback([&] {
    action = [&] { return cmd_example(g, example_path, random, out); };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 1;
  }

  out << std::setprecision(6);
  try {
    code = action();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return code;
}

}  // namespace camdp::cli
