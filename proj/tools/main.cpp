// gfodd command line tool.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "gfodd/domain.hpp"
#include "gfodd/error.hpp"
#include "gfodd/eval.hpp"
#include "gfodd/io.hpp"
#include "gfodd/oracle.hpp"
#include "gfodd/planner.hpp"
#include "gfodd/reduce.hpp"
#include "gfodd/simulator.hpp"

namespace fs = std::filesystem;
using namespace gfodd;

namespace {

constexpr int kUsage = 2;

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Argument: return kUsage;
    case ErrorCategory::Parse: return 3;
    case ErrorCategory::Model: return 4;
    case ErrorCategory::Form: return 5;
    case ErrorCategory::Resource: return 6;
    case ErrorCategory::Internal: return 10;
  }
  return 10;
}

const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Argument: return "usage";
    case ErrorCategory::Parse: return "parse";
    case ErrorCategory::Model: return "model";
    case ErrorCategory::Form: return "form";
    case ErrorCategory::Resource: return "resource";
    case ErrorCategory::Internal: return "internal";
  }
  return "internal";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path.string());
  out << text;
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed(double x, int digits = 9) {
  std::ostringstream os;
  os << std::setprecision(digits) << std::fixed << x;
  return os.str();
}

Gfodd load_diagram(const std::string& path) { return parse_diagram(read_file(path)); }

std::vector<Interpretation> load_states(const std::string& path, const DomainSpec& d) {
  return parse_states(read_file(path), d.vocab);
}

// --- plan ------------------------------------------------------------------

struct PlanArgs {
  std::string domain;
  int iters = 4;
  int focus_shops = 2;
  std::string out;
  std::size_t node_budget = 50000;
};

int run_plan(const PlanArgs& a) {
  DomainSpec d = resolve_domain(a.domain);
  PlanOptions options;
  options.node_budget = a.node_budget;
  fs::path dir(a.out);
  fs::create_directories(dir);
  PlanResult r;
  try {
    r = plan(d, a.iters, all_focus_states(d, a.focus_shops), options);
  } catch (const BudgetExceeded& e) {
    // Keep what was completed.
    for (std::size_t i = 0; i < e.partial().values.size(); ++i) {
      write_file(dir / ("V" + std::to_string(i) + ".gfodd"), write_diagram(e.partial().values[i]));
    }
    throw;
  }
  write_file(dir / "domain.txt", save_domain(d));
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    write_file(dir / ("V" + std::to_string(i) + ".gfodd"), write_diagram(r.values[i]));
  }
  for (std::size_t i = 0; i < r.q_maps.size(); ++i) {
    for (const auto& [name, q] : r.q_maps[i]) {
      write_file(dir / ("Q" + std::to_string(i) + "_" + name + ".gfodd"), write_diagram(q));
    }
  }
  for (const auto& [name, q] : r.greedy_q) {
    write_file(dir / ("Q" + std::to_string(r.values.size() - 1) + "_" + name + ".gfodd"), write_diagram(q));
  }
  std::ostringstream stats;
  std::ostringstream timings;
  stats << "iteration,nodes_unreduced,nodes,prefix_size,removed_edges\n";
  timings << "iteration,seconds\n";
  for (const auto& st : r.stats) {
    stats << st.iteration << "," << st.nodes_unreduced << "," << st.nodes << "," << st.prefix_size << ","
          << st.removed_edges << "\n";
    timings << st.iteration << "," << fixed(st.seconds, 6) << "\n";
  }
  write_file(dir / "stats.csv", stats.str());
  write_file(dir / "timings.csv", timings.str());
  std::cout << "domain " << d.name << ", " << a.iters << " iterations, focus " << a.focus_shops << " "
            << d.instance.scaled_sort << " objects\n";
  std::cout << stats.str();
  std::cout << "wrote " << dir.string() << "\n";
  return 0;
}

// --- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string diagram;
  std::string states;
  std::string method = "ve";
  std::string domain = "ic";
};

int run_eval(const EvalArgs& a) {
  DomainSpec d = resolve_domain(a.domain);
  Gfodd f = load_diagram(a.diagram);
  auto states = load_states(a.states, d);
  std::optional<VeEvaluator> ve;
  if (a.method == "ve") ve.emplace(f);
  for (std::size_t k = 0; k < states.size(); ++k) {
    EvalResult r = ve ? ve->evaluate(states[k]) : eval_brute(f, states[k]);
    if (states.size() > 1) std::cout << "state " << k << "\n";
    std::cout << "value " << to_string(r.value) << "\n";
    std::cout << "winner " << to_string(r.winner) << "\n";
    std::cout << "edges " << to_string(r.edges) << "\n";
    std::cout << "work " << r.work << "\n";
  }
  return 0;
}

// --- reduce ----------------------------------------------------------------

struct ReduceArgs {
  std::string diagram;
  std::string focus;
  int focus_shops = 2;
  std::string domain = "ic";
  std::string out;
};

int run_reduce(const ReduceArgs& a) {
  DomainSpec d = resolve_domain(a.domain);
  Gfodd f = load_diagram(a.diagram);
  auto focus = a.focus.empty() ? all_focus_states(d, a.focus_shops) : load_states(a.focus, d);
  auto r = reduce_with_report(f, focus);
  emit(a.out, write_diagram(r.diagram));
  std::cerr << "nodes " << f.size() << " -> " << r.diagram.size() << "\n";
  std::cerr << "removed";
  for (const auto& e : r.removed) std::cerr << " " << to_string(e);
  std::cerr << "\n";
  return 0;
}

// --- simulate --------------------------------------------------------------

struct SimulateArgs {
  std::string domain;
  std::string policy = "greedy";
  std::string plan_dir;
  int iteration = -1;
  RolloutConfig config;
  double gamma = 0;
  double tolerance = 1e-9;
  std::string csv;
};

QMap load_q(const DomainSpec& d, const fs::path& dir, int iteration) {
  if (iteration < 0) {
    for (int i = 0;; ++i) {
      if (!fs::exists(dir / ("V" + std::to_string(i + 1) + ".gfodd"))) {
        iteration = i;
        break;
      }
    }
  }
  QMap q;
  for (const auto& a : d.actions) {
    q.emplace(a.name, load_diagram((dir / ("Q" + std::to_string(iteration) + "_" + a.name + ".gfodd")).string()));
  }
  return q;
}

int run_simulate(SimulateArgs a) {
  DomainSpec d = resolve_domain(a.domain);
  if (a.gamma > 0) a.config.gamma = a.gamma;
  std::unique_ptr<Policy> policy;
  if (a.policy == "greedy") {
    if (a.plan_dir.empty()) throw ArgumentError("--plan is required for the greedy policy");
    policy = std::make_unique<GreedyPolicy>(d, load_q(d, a.plan_dir, a.iteration));
  } else if (a.policy == "random") {
    policy = std::make_unique<RandomPolicy>(d);
  } else {
    auto m = std::make_shared<GroundMdp>(build_ground_mdp(d, a.config.n));
    auto vi = exact_vi(*m, a.tolerance);
    policy = std::make_unique<TabularPolicy>(m, vi.policy);
  }
  auto stats = evaluate_policy(d, *policy, a.config);
  std::ostringstream csv;
  csv << "instance,run,return\n";
  for (std::size_t k = 0; k < stats.instances.size(); ++k) {
    for (std::size_t r = 0; r < stats.instances[k].returns.size(); ++r) {
      csv << k << "," << r << "," << fixed(stats.instances[k].returns[r]) << "\n";
    }
  }
  if (!a.csv.empty()) write_file(a.csv, csv.str());
  std::cout << "policy " << stats.policy << "\n";
  std::cout << "shops " << a.config.n << ", instances " << a.config.instances << ", runs " << a.config.runs
            << ", horizon " << a.config.horizon << ", seed " << a.config.seed << "\n";
  for (std::size_t k = 0; k < stats.instances.size(); ++k) {
    std::cout << "instance " << k << " mean " << fixed(stats.instances[k].mean) << " stddev "
              << fixed(stats.instances[k].stddev) << "\n";
  }
  std::cout << "mean " << fixed(stats.mean) << "\n";
  std::cout << "stddev " << fixed(stats.stddev) << "\n";
  return 0;
}

// --- oracle ----------------------------------------------------------------

struct OracleArgs {
  std::string domain;
  int shops = 2;
  double tol = 1e-9;
  std::vector<std::string> compare;
  std::string out;
};

int run_oracle(const OracleArgs& a) {
  DomainSpec d = resolve_domain(a.domain);
  auto m = build_ground_mdp(d, a.shops);
  auto vi = exact_vi(m, a.tol);
  std::ostringstream values;
  values << "state,facts,reward,vstar,action\n";
  for (std::size_t s = 0; s < m.states.size(); ++s) {
    values << s << "," << csv_quote(to_string(m.states[s])) << "," << to_string(m.reward[s]) << ","
           << fixed(vi.value[s]) << "," << csv_quote(to_string(m.actions[vi.policy[s]])) << "\n";
  }
  std::ostringstream deltas;
  deltas << "sweep,delta\n";
  for (std::size_t i = 0; i < vi.deltas.size(); ++i) deltas << i + 1 << "," << std::setprecision(12) << vi.deltas[i] << "\n";
  std::ostringstream compare;
  compare << "diagram,state,value,vstar,gap\n";
  std::vector<std::string> summary;
  for (const auto& path : a.compare) {
    auto table = tabulate(load_diagram(path), m.states);
    double worst = -1e300;
    std::size_t above = 0;
    for (std::size_t s = 0; s < table.size(); ++s) {
      double gap = vi.value[s] - table[s].get_d();
      worst = std::max(worst, -gap);
      above += gap < -1e-6;
      compare << csv_quote(path) << "," << s << "," << to_string(table[s]) << "," << fixed(vi.value[s]) << ","
              << fixed(gap) << "\n";
    }
    summary.push_back(path + ": max(value - vstar) " + fixed(worst) + ", states above vstar " + std::to_string(above));
  }
  if (a.out.empty()) {
    std::cout << values.str();
  } else {
    fs::path dir(a.out);
    write_file(dir / "vstar.csv", values.str());
    write_file(dir / "deltas.csv", deltas.str());
    if (!a.compare.empty()) write_file(dir / "compare.csv", compare.str());
  }
  std::cerr << "states " << m.states.size() << ", actions " << m.actions.size() << ", sweeps " << vi.deltas.size()
            << ", final delta " << vi.deltas.back() << "\n";
  for (const auto& line : summary) std::cerr << line << "\n";
  return 0;
}

// --- check / export-dot ----------------------------------------------------

int run_check(const std::string& domain) {
  DomainSpec d = resolve_domain(domain);
  std::cout << to_string(check_assumptions(d));
  return 0;
}

int run_dot(const std::string& diagram, const std::string& out) {
  emit(out, to_dot(load_diagram(diagram)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-order decision diagram planner for service domains"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 1;
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  PlanArgs plan_args;
  auto* plan_cmd = app.add_subcommand("plan", "Run symbolic value iteration");
  plan_cmd->add_option("domain", plan_args.domain, "Builtin domain (ic, aic) or domain file")->required();
  plan_cmd->add_option("--iters", plan_args.iters, "Iterations")->check(CLI::PositiveNumber);
  plan_cmd->add_option("--focus-shops", plan_args.focus_shops, "Objects of the scaled sort in focus states")
      ->check(CLI::PositiveNumber);
  plan_cmd->add_option("--out", plan_args.out, "Output directory")->required();
  plan_cmd->add_option("--node-budget", plan_args.node_budget, "Node budget per diagram");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a diagram on states");
  eval_cmd->add_option("diagram", eval_args.diagram, "Diagram file")->required();
  eval_cmd->add_option("states", eval_args.states, "State file")->required();
  eval_cmd->add_option("--method", eval_args.method, "ve or brute")->check(CLI::IsMember({"ve", "brute"}));
  eval_cmd->add_option("--domain", eval_args.domain, "Domain providing the vocabulary");

  ReduceArgs reduce_args;
  auto* reduce_cmd = app.add_subcommand("reduce", "Reduce a diagram on focus states");
  reduce_cmd->add_option("diagram", reduce_args.diagram, "Diagram file")->required();
  auto* focus_file = reduce_cmd->add_option("--focus", reduce_args.focus, "Focus state file");
  reduce_cmd->add_option("--focus-shops", reduce_args.focus_shops, "Use all states with this many shops")
      ->excludes(focus_file);
  reduce_cmd->add_option("--domain", reduce_args.domain, "Domain providing the vocabulary");
  reduce_cmd->add_option("--out", reduce_args.out, "Output file (default stdout)");

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Roll out a policy");
  sim_cmd->add_option("domain", sim_args.domain, "Builtin domain or domain file")->required();
  sim_cmd->add_option("--policy", sim_args.policy, "greedy, random or oracle")
      ->check(CLI::IsMember({"greedy", "random", "oracle"}));
  sim_cmd->add_option("--plan", sim_args.plan_dir, "Plan output directory (greedy)");
  sim_cmd->add_option("--iteration", sim_args.iteration, "Use the Q diagrams of V_i (default: last)");
  sim_cmd->add_option("--shops", sim_args.config.n, "Shops per instance")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--instances", sim_args.config.instances, "Instances")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--runs", sim_args.config.runs, "Runs per instance")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--horizon", sim_args.config.horizon, "Steps per run")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--gamma", sim_args.gamma, "Discount of returns (default: the domain's)")
      ->check(CLI::Range(0.0, 1.0));
  sim_cmd->add_option("--seed", sim_args.config.seed, "Seed");
  sim_cmd->add_option("--tol", sim_args.tolerance, "Value iteration tolerance (oracle)");
  sim_cmd->add_option("--csv", sim_args.csv, "Per-rollout returns");

  OracleArgs oracle_args;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact value iteration on the ground model");
  oracle_cmd->add_option("domain", oracle_args.domain, "Builtin domain or domain file")->required();
  oracle_cmd->add_option("--shops", oracle_args.shops, "Shops")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--tol", oracle_args.tol, "Sup-norm tolerance")->check(CLI::PositiveNumber);
  oracle_cmd->add_option("--compare", oracle_args.compare, "Diagrams to tabulate against V*");
  oracle_cmd->add_option("--out", oracle_args.out, "Output directory (default: V* to stdout)");

  std::string check_domain;
  auto* check_cmd = app.add_subcommand("check", "Report the service domain assumptions");
  check_cmd->add_option("domain", check_domain, "Builtin domain or domain file")->required();

  std::string dot_diagram, dot_out;
  auto* dot_cmd = app.add_subcommand("export-dot", "Graphviz rendering of a diagram");
  dot_cmd->add_option("diagram", dot_diagram, "Diagram file")->required();
  dot_cmd->add_option("--out", dot_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*plan_cmd) return run_plan(plan_args);
    if (*eval_cmd) return run_eval(eval_args);
    if (*reduce_cmd) return run_reduce(reduce_args);
    if (*sim_cmd) {
      sim_args.config.threads = threads;
      return run_simulate(sim_args);
    }
    if (*oracle_cmd) return run_oracle(oracle_args);
    if (*check_cmd) return run_check(check_domain);
    if (*dot_cmd) return run_dot(dot_diagram, dot_out);
  } catch (const Error& e) {
    std::cerr << category_name(e.category()) << " error: " << e.what() << "\n";
    return exit_code(e.category());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
