// lrlm: batch entry points. Data goes to stdout or files, logs to stderr.

#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lrlm/analysis.hpp"
#include "lrlm/error.hpp"
#include "lrlm/lambda.hpp"
#include "lrlm/pipeline.hpp"
#include "lrlm/taskgen.hpp"
#include "lrlm/trace.hpp"
#include "lrlm/verify.hpp"

using namespace lrlm;
using nlohmann::json;

namespace {

void log(const std::string& msg) { std::cerr << "lrlm: " << msg << '\n'; }

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  os << text;
  if (!os) throw Error("IoError", "cannot write " + path);
  log("wrote " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("IoError", "cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

TaskType task_arg(const std::string& name) {
  if (auto t = parse_task(name)) return *t;
  throw ConfigError("unknown task '" + name + "'");
}

Family family_arg(const std::string& name) {
  if (auto f = parse_family(name)) return *f;
  throw ConfigError("unknown family '" + name + "'");
}

std::vector<std::size_t> grid_arg(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size() || v == 0) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("bad grid entry '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty grid");
  return out;
}

struct Common {
  std::string profile = "appendix-a";
  std::string strategy = "appendix_sqrt";
  double alpha = default_alpha;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--profile", c.profile, "built-in profile name or profile file");
  cmd->add_option("--strategy", c.strategy, "appendix_sqrt | theorem_k2 | fixed:<k>");
  cmd->add_option("--alpha", c.alpha, "accuracy target");
}

json error_object(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"typed recursive runtime for long-context tasks"};
  app.require_subcommand(1);
  const int cores = std::max(1, omp_get_num_procs());

  // demo-lambda
  auto* demo = app.add_subcommand("demo-lambda", "reduce a lambda term and print the trace");
  std::string demo_expr;
  std::int64_t demo_n = 3;
  std::size_t demo_fuel = lambda::default_fuel;
  demo->add_option("--expr", demo_expr, "term to normalize (default: Y factorial applied to --n)");
  demo->add_option("--n", demo_n, "factorial argument")->check(CLI::Range(0, 12));
  demo->add_option("--fuel", demo_fuel, "step budget");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a seeded task instance");
  std::string gen_family = "aggregate", gen_out;
  std::size_t gen_tokens = 8000;
  std::uint64_t gen_seed = 0;
  gen->add_option("--task,--family", gen_family, "needle | aggregate | pairwise | multihop");
  gen->add_option("--tokens", gen_tokens, "target size in tokens");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_out, "output file (default stdout)");

  // plan / estimate
  Common plan_c, est_c;
  std::string plan_task = "aggregate", est_task = "aggregate";
  std::size_t plan_tokens = 131000, est_tokens = 131000;
  auto* plan = app.add_subcommand("plan", "compute (k*, tau*, d) for a task and size");
  plan->add_option("--task", plan_task);
  plan->add_option("--tokens", plan_tokens);
  add_common(plan, plan_c);
  auto* estimate = app.add_subcommand("estimate", "predicted cost, calls and accuracy");
  estimate->add_option("--task", est_task);
  estimate->add_option("--tokens", est_tokens);
  add_common(estimate, est_c);

  // run
  Common run_c;
  std::string run_family = "aggregate", run_instance_path, run_backend = "symbolic", run_url,
              run_trace_out;
  std::size_t run_tokens = 131000;
  std::uint64_t run_seed = 0;
  int run_jobs = 1;
  double run_timeout = 30.0;
  auto* run = app.add_subcommand("run", "detect, plan, execute and score one instance");
  run->add_option("--task,--family", run_family, "generator family when no --instance is given");
  run->add_option("--tokens", run_tokens);
  run->add_option("--seed", run_seed);
  run->add_option("--instance", run_instance_path, "instance JSON written by gen");
  run->add_option("--backend", run_backend, "symbolic | stochastic | remote")
      ->check(CLI::IsMember({"symbolic", "stochastic", "remote"}));
  run->add_option("--url", run_url, "endpoint for the remote backend");
  run->add_option("--timeout", run_timeout, "remote timeout in seconds");
  run->add_option("--trace-out", run_trace_out, "trace JSON file (default stdout)");
  run->add_option("--jobs", run_jobs, "leaf calls in flight")->check(CLI::PositiveNumber);
  add_common(run, run_c);

  // verify
  std::string v_suite = "all", v_trace_dir;
  SuiteOptions v_opt;
  auto* verify = app.add_subcommand("verify", "run an acceptance suite");
  verify->add_option("--suite", v_suite, "suite name or 'all'");
  verify->add_option("--seed", v_opt.seed);
  verify->add_option("--trace-dir", v_trace_dir, "directory for trace files");
  verify->add_option("--jobs", v_opt.jobs)->check(CLI::PositiveNumber);
  verify->add_option("--trials", v_opt.trials, "Monte-Carlo trials (accuracy suite)")
      ->check(CLI::PositiveNumber);

  // scaling
  Common sc_c;
  sc_c.profile = "scaling";
  sc_c.strategy = "theorem_k2";
  std::string sc_task = "aggregate", sc_grid = "8000,16000,32000,64000,128000", sc_out;
  std::size_t sc_trials = 10000;
  std::uint64_t sc_seed = 0;
  int sc_jobs = cores;
  bool sc_truncate = false;
  auto* scaling = app.add_subcommand("scaling", "Monte-Carlo accuracy against input length");
  scaling->add_option("--task", sc_task);
  scaling->add_option("--grid", sc_grid, "comma-separated token counts");
  scaling->add_option("--trials", sc_trials)->check(CLI::PositiveNumber);
  scaling->add_option("--seed", sc_seed);
  scaling->add_option("--out", sc_out, "CSV file (default stdout)");
  scaling->add_option("--jobs", sc_jobs)->check(CLI::PositiveNumber);
  scaling->add_flag("--truncate", sc_truncate, "direct baseline reads only the first K tokens");
  add_common(scaling, sc_c);

  // sweep-k
  std::string sw_profile = "appendix-a";
  std::size_t sw_tokens = 131000, sw_tau = 0, sw_kmax = 16;
  auto* sweep = app.add_subcommand("sweep-k", "closed-form cost bound for k in [2, k-max]");
  sweep->add_option("--tokens", sw_tokens);
  sweep->add_option("--tau", sw_tau, "leaf size (default: K minus the leaf header)");
  sweep->add_option("--k-max", sw_kmax)->check(CLI::Range(2, 1 << 20));
  sweep->add_option("--profile", sw_profile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*demo) {
      const auto term = demo_expr.empty()
                            ? lambda::app(lambda::y_combinator(),
                                          {lambda::factorial_recipe(), lambda::lit(demo_n)})
                            : lambda::parse_expr(demo_expr);
      // One step per line; carets mark the redex that fires next.
      const auto show = [](const lambda::ReductionTrace& t, const lambda::Expr& start) {
        std::size_t i = 0;
        for (const auto& s : t.steps) {
          const auto [text, span] = lambda::render_with_span(s.before, s.redex);
          std::cout << i++ << (s.kind == lambda::StepKind::beta ? " beta  " : " delta ") << text
                    << '\n'
                    << std::string(8 + span.first, ' ')
                    << std::string(std::max<std::size_t>(1, span.second - span.first), '^')
                    << '\n';
        }
        std::cout << i << " nf    "
                  << lambda::to_string(t.steps.empty() ? start : t.steps.back().after) << '\n';
      };
      try {
        const auto nf = lambda::normalize(term, demo_fuel);
        show(nf.trace, term);
      } catch (const lambda::FuelExhausted& e) {
        show(e.trace(), term);
        throw;
      }
    } else if (*gen) {
      const auto inst = generate(family_arg(gen_family), gen_tokens, gen_seed);
      write_text(gen_out, dump_json(to_json(inst)));
    } else if (*plan || *estimate) {
      const auto& c = *plan ? plan_c : est_c;
      const auto task = task_arg(*plan ? plan_task : est_task);
      const auto n = *plan ? plan_tokens : est_tokens;
      const auto profile = load_profile(c.profile);
      const auto p = make_plan(task, n, profile, c.alpha, parse_strategy(c.strategy));
      json out = {{"plan", to_json(p)}, {"estimate", to_json(estimate_cost(p, n, profile))}};
      if (*estimate) {
        out["predicted_accuracy"] = estimate_accuracy(p, n, profile);
        out["direct_accuracy"] = direct_accuracy(n, profile);
      }
      std::cout << dump_json(out);
    } else if (*run) {
      const auto profile = load_profile(run_c.profile);
      const auto inst = run_instance_path.empty()
                            ? generate(family_arg(run_family), run_tokens, run_seed)
                            : instance_from_json(json::parse(read_text(run_instance_path)));
      std::unique_ptr<Oracle> oracle;
      if (run_backend == "symbolic") {
        oracle = std::make_unique<SymbolicOracle>(profile);
      } else if (run_backend == "stochastic") {
        oracle = std::make_unique<StochasticOracle>(profile, run_seed);
      } else {
        if (run_url.empty()) throw ConfigError("the remote backend requires --url");
        RemoteConfig rc;
        rc.url = run_url;
        rc.timeout_seconds = run_timeout;
        oracle = std::make_unique<RemoteOracle>(profile, rc);
      }
      RunOptions ro;
      ro.strategy = parse_strategy(run_c.strategy);
      ro.alpha = run_c.alpha;
      ro.jobs = run_jobs;
      const auto r = run_instance(inst, *oracle, ro);
      write_text(run_trace_out.empty() ? "" : run_trace_out, dump_json(run_document(r)));
      char line[256];
      std::snprintf(line, sizeof line, "task=%s n=%zu k=%zu tau=%zu calls=%zu cost=%.4f score=%.4f",
                    std::string(to_string(r.detection.task)).c_str(), inst.doc.size(),
                    r.plan.k_star, r.plan.tau_star, r.trace.oracle_calls,
                    r.trace.accumulated_cost, r.score_f1);
      if (run_trace_out.empty()) log(line);
      else std::cout << line << '\n';
    } else if (*verify) {
      std::vector<std::string> names;
      if (v_suite == "all") names = suite_names();
      else names.push_back(v_suite);
      v_opt.trace_dir = v_trace_dir;
      bool ok = true;
      json summary = json::array();
      for (const auto& name : names) {
        log("suite " + name);
        const auto r = run_suite(name, v_opt);
        ok = ok && r.passed;
        summary.push_back({{"suite", r.name},
                           {"passed", r.passed},
                           {"checks", r.checks},
                           {"failures", r.failures}});
        if (name == "lambda" && r.report.contains("factorial_3_trace"))
          std::cerr << dump_json(r.report["factorial_3_trace"]);
      }
      std::cout << dump_json(summary);
      return ok ? 0 : 1;
    } else if (*scaling) {
      ScalingConfig cfg;
      cfg.task = task_arg(sc_task);
      cfg.grid = grid_arg(sc_grid);
      cfg.trials = sc_trials;
      cfg.profile = load_profile(sc_c.profile);
      cfg.seed = sc_seed;
      cfg.strategy = parse_strategy(sc_c.strategy);
      cfg.alpha = sc_c.alpha;
      cfg.jobs = sc_jobs;
      cfg.truncate = sc_truncate;
      log("simulating " + std::to_string(cfg.grid.size()) + " grid points, " +
          std::to_string(cfg.trials) + " trials each, " + std::to_string(cfg.jobs) + " jobs");
      write_text(sc_out, scaling_csv(simulate_scaling(cfg)));
    } else if (*sweep) {
      const auto profile = load_profile(sw_profile);
      const auto tau = sw_tau ? sw_tau : profile.K - max_leaf_header_tokens();
      const auto s = sweep_optimal_k(sw_tokens, tau, profile, sw_kmax);
      json table = json::array();
      for (const auto& [k, v] : s.table) table.push_back({{"k", k}, {"bound", v}});
      std::cout << dump_json({{"n", sw_tokens}, {"tau", tau}, {"argmin", s.argmin}, {"table", table}});
    }
  } catch (const OracleError& e) {
    std::cout << dump_json({{"error",
                             {{"kind", e.kind()},
                              {"cause", e.cause()},
                              {"call_index", e.call_index()},
                              {"message", e.what()}}}});
    return 1;
  } catch (const Error& e) {
    std::cout << dump_json(error_object(e.kind(), e.what()));
    return 1;
  } catch (const json::exception& e) {
    std::cout << dump_json(error_object("MalformedInput", e.what()));
    return 1;
  } catch (const std::exception& e) {
    std::cout << dump_json(error_object("InternalError", e.what()));
    return 1;
  }
  return 0;
}
