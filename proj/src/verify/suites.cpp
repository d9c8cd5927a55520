#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "lrlm/analysis.hpp"
#include "lrlm/error.hpp"
#include "lrlm/executor.hpp"
#include "lrlm/lambda.hpp"
#include "lrlm/pipeline.hpp"
#include "lrlm/rng.hpp"
#include "lrlm/taskgen.hpp"
#include "lrlm/trace.hpp"
#include "lrlm/verify.hpp"

namespace lrlm {

namespace {

using nlohmann::json;

class Checker {
 public:
  explicit Checker(SuiteResult& r) : r_(r) {}
  void expect(bool ok, const std::string& what) {
    ++r_.checks;
    if (!ok) r_.failures.push_back(what);
  }

 private:
  SuiteResult& r_;
};

// Uniform in log space over [lo, hi].
double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(std::log(lo) + rng.unit() * (std::log(hi) - std::log(lo)));
}

std::size_t log_uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
  auto v = static_cast<std::size_t>(std::llround(
      log_uniform(rng, static_cast<double>(lo), static_cast<double>(hi))));
  return std::clamp(v, lo, hi);
}

std::uint64_t stream(std::uint64_t seed, std::uint64_t suite_tag) {
  return derive_seed({seed, suite_tag});
}

Detection symbolic_detection(const Document& doc, Oracle& oracle) {
  const auto n = doc.size();
  return detect_task(peek(doc, 0, detection_preview_length(n, oracle.profile())), n, oracle, 0);
}

// Exact call count on configurations where k^d divides n evenly, plus
// a sandwich check on unrestricted sizes.
void suite_termination(const SuiteOptions& opt, SuiteResult& r) {
  Checker c(r);
  Rng rng(stream(opt.seed, 1));
  const auto profile = builtin_profile("appendix-a");
  SymbolicOracle oracle(profile);
  const auto base = generate(Family::aggregate, 320000, derive_seed({opt.seed, 1, 0})).doc;

  json exact = json::array();
  for (int i = 0; i < 200; ++i) {
    std::size_t k, d, tau, s, n;
    while (true) {
      k = rng.between(2, 8);
      std::size_t dmax = 1;
      while (ipow(k, static_cast<int>(dmax + 1)) <= 5000) ++dmax;
      d = rng.between(1, dmax);
      tau = rng.between(8, 64);
      s = rng.between(tau / k + 1, tau);
      n = ipow(k, static_cast<int>(d)) * s;
      const double ratio = static_cast<double>(n) / static_cast<double>(tau);
      if (ratio >= 2.0 && ratio <= 5000.0) break;
    }
    const auto doc = peek(base, 0, n);
    const auto plan = plan_with(TaskType::aggregate, n, k, tau, profile);
    const auto det = symbolic_detection(doc, oracle);
    ExecOptions eo;
    eo.jobs = opt.jobs;
    eo.first_index = 1;
    const auto res = execute_phi(doc, plan, oracle, eo);
    const std::size_t expected = ipow(k, plan.depth) + 1;
    const std::size_t measured = res.trace.oracle_calls + 1;
    c.expect(static_cast<std::size_t>(plan.depth) == d,
             "case " + std::to_string(i) + ": depth " + std::to_string(plan.depth));
    c.expect(measured == expected, "case " + std::to_string(i) + ": calls " +
                                       std::to_string(measured) + " != " +
                                       std::to_string(expected));
    c.expect(res.trace.max_depth <= plan.depth, "case " + std::to_string(i) + ": depth bound");
    c.expect(det.task == TaskType::aggregate, "case " + std::to_string(i) + ": detection");
    exact.push_back({{"k", k},
                     {"tau", tau},
                     {"n", n},
                     {"d", plan.depth},
                     {"expected_calls", expected},
                     {"measured_calls", measured},
                     {"max_depth", res.trace.max_depth},
                     {"cost", res.trace.accumulated_cost + det.record.cost}});
  }

  // Arbitrary n: ceil(n/tau) <= leaf calls <= k^d.
  json loose = json::array();
  for (int i = 0; i < 50; ++i) {
    const std::size_t k = rng.between(2, 8);
    const std::size_t tau = rng.between(8, 64);
    const std::size_t n = log_uniform_int(rng, 2 * tau, 5000 * tau);
    const auto plan = plan_with(TaskType::aggregate, n, k, tau, profile);
    ExecOptions eo;
    eo.jobs = opt.jobs;
    const auto res = execute_phi(peek(base, 0, n), plan, oracle, eo);
    const auto calls = res.trace.oracle_calls;
    c.expect(calls >= ceil_div(n, tau) && calls <= ipow(k, plan.depth),
             "unrestricted case " + std::to_string(i) + ": calls " + std::to_string(calls));
    loose.push_back({{"k", k},
                     {"tau", tau},
                     {"n", n},
                     {"d", plan.depth},
                     {"leaf_calls", calls},
                     {"k_pow_d", ipow(k, plan.depth)},
                     {"empty_leaves", res.trace.has_flag("empty_leaf")}});
  }
  r.report = {{"exact", exact}, {"unrestricted", loose}};
}

// Measured cost against the recurrence (equality) and the closed form (bound).
void suite_cost(const SuiteOptions& opt, SuiteResult& r) {
  Checker c(r);
  Rng rng(stream(opt.seed, 2));
  const auto profile = builtin_profile("appendix-a");
  SymbolicOracle oracle(profile);
  const auto base = generate(Family::aggregate, 128000, derive_seed({opt.seed, 2, 0})).doc;

  json cases = json::array();
  double worst_ratio = 0.0;
  for (int i = 0; i < 1000; ++i) {
    // Every fifth case uses a neural composition operator.
    const TaskType task = i % 5 == 4 ? TaskType::summarise : TaskType::aggregate;
    const std::size_t k = rng.between(2, 16);
    const std::size_t tau = rng.between(4, 64);
    const std::size_t n = log_uniform_int(rng, tau, 2000 * tau);
    const auto plan = plan_with(task, n, k, tau, profile);
    ExecOptions eo;
    eo.jobs = opt.jobs;
    const auto res = execute_phi(peek(base, 0, n), plan, oracle, eo);
    const double measured = res.trace.accumulated_cost;
    const auto h = header_tokens(leaf_header(task));
    const double recurrence = cost_recurrence(n, k, tau, profile, h, plan.compose);
    const double closed = cost_closed_form(n, k, tau, profile, plan.compose);
    const std::string tag = "case " + std::to_string(i);
    c.expect(measured == recurrence, tag + ": measured != recurrence");
    c.expect(measured <= closed, tag + ": measured above closed form");
    worst_ratio = std::max(worst_ratio, measured / closed);
    cases.push_back({{"task", std::string(to_string(task))},
                     {"k", k},
                     {"tau", tau},
                     {"n", n},
                     {"d", plan.depth},
                     {"measured", measured},
                     {"recurrence", recurrence},
                     {"closed_form", closed}});
  }
  r.report = {{"cases", cases}, {"max_measured_over_bound", worst_ratio}};
}

// The worked OOLONG trace: 131K tokens, K = 32K.
void suite_appendix_a(const SuiteOptions& opt, SuiteResult& r) {
  Checker c(r);
  const auto profile = builtin_profile("appendix-a");
  const auto inst = generate(Family::aggregate, 131000, derive_seed({opt.seed, 3}));
  SymbolicOracle oracle(profile);
  RunOptions ro;
  ro.jobs = opt.jobs;
  const auto run = run_instance(inst, oracle, ro);
  const auto& p = run.plan;
  c.expect(inst.doc.size() == 131000, "n = " + std::to_string(inst.doc.size()));
  c.expect(run.detection.task == TaskType::aggregate, "detected task");
  c.expect(p.k_star == 5, "k* = " + std::to_string(p.k_star));
  c.expect(p.tau_star == 26200, "tau* = " + std::to_string(p.tau_star));
  c.expect(p.depth_algorithm == 1, "d = " + std::to_string(p.depth_algorithm));
  c.expect(std::abs(run.estimate.total - 0.17) <= 0.005,
           "estimated cost " + std::to_string(run.estimate.total));
  c.expect(run.estimate.predicted_calls == 6,
           "predicted calls " + std::to_string(run.estimate.predicted_calls));
  c.expect(run.trace.oracle_calls == 6, "calls " + std::to_string(run.trace.oracle_calls));
  c.expect(run.score_exact == 1.0, "score " + std::to_string(run.score_exact));
  c.expect(std::abs(cost_of(profile, 26200) - 0.03) < 1e-12, "C(tau*) = $0.03");
  c.expect(std::abs(cost_of(profile, 500) - 0.02) < 1e-12, "C(500) = $0.02");
  r.report = run_document(run);
  r.report["profile"] = format_profile(profile);
}

// Exhaustive sweep of the closed-form bound over k in [2, 16].
void suite_optimal_k(const SuiteOptions& opt, SuiteResult& r) {
  Checker c(r);
  Rng rng(stream(opt.seed, 4));
  json cases = json::array();
  for (int i = 0; i < 50; ++i) {
    OracleProfile p = builtin_profile("default");
    p.name = "sweep-" + std::to_string(i);
    p.c_in = log_uniform(rng, 1e-8, 1e-4);
    p.c_out = log_uniform(rng, 1e-8, 1e-3);
    p.c_oplus = log_uniform(rng, 1e-5, 1e-1);
    const std::size_t tau = rng.between(100, 30000);
    const std::size_t n = log_uniform_int(rng, 2 * tau, 10000 * tau);
    const auto sweep = sweep_optimal_k(n, tau, p, 16);
    c.expect(sweep.argmin == 2, "profile " + std::to_string(i) + ": argmin " +
                                    std::to_string(sweep.argmin));
    // Quantities of the analytic argument, reported next to the sweep.
    const double alpha = static_cast<double>(n) * cost_of(p, tau) / static_cast<double>(tau);
    const double beta = p.c_oplus * static_cast<double>(n) / static_cast<double>(tau);
    const double gamma = p.c_oplus;
    const double interior = std::ceil(1.0 + std::sqrt(1.0 - (alpha + gamma) / (alpha + beta)));
    json table = json::array();
    for (const auto& [k, v] : sweep.table) table.push_back({k, v});
    cases.push_back({{"c_in", p.c_in},
                     {"c_out", p.c_out},
                     {"c_oplus", p.c_oplus},
                     {"tau", tau},
                     {"n", n},
                     {"argmin", sweep.argmin},
                     {"interior_formula", interior},
                     {"table", table}});
  }
  r.report = {{"cases", cases}};
}

// Monte-Carlo contrast of direct inference and the recursive runtime.
void suite_accuracy(const SuiteOptions& opt, SuiteResult& r) {
  Checker c(r);
  ScalingConfig cfg;
  cfg.profile = builtin_profile("scaling");
  cfg.seed = derive_seed({opt.seed, 5});
  cfg.trials = opt.trials;
  cfg.jobs = opt.jobs;
  const auto rows = simulate_scaling(cfg);
  json out = json::array();
  for (const auto& row : rows) {
    const std::string tag = std::string(to_string(row.method)) + " n=" + std::to_string(row.n);
    if (row.method == Method::direct) {
      c.expect(std::abs(row.empirical_accuracy - direct_accuracy(row.n, cfg.profile)) <= 0.02,
               tag + ": direct accuracy off the exponential law");
    } else {
      const double a_tau = accuracy_at(cfg.profile, static_cast<double>(row.tau_star));
      c.expect(std::abs(row.empirical_accuracy - a_tau) <= 0.03,
               tag + ": per-query accuracy not within 3pp of A(tau*)");
      c.expect(row.empirical_accuracy >= row.lower_bound, tag + ": below the lower bound");
    }
    out.push_back({{"n", row.n},
                   {"method", std::string(to_string(row.method))},
                   {"trials", row.trials},
                   {"empirical_accuracy", row.empirical_accuracy},
                   {"predicted", row.predicted},
                   {"exact_accuracy", row.exact_accuracy},
                   {"ci", {row.ci_low, row.ci_high}},
                   {"lower_bound", row.lower_bound},
                   {"mean_calls", row.mean_calls},
                   {"mean_cost", row.mean_cost},
                   {"k", row.k_star},
                   {"tau", row.tau_star},
                   {"d", row.depth}});
  }
  double lo = 1.0, hi = 0.0;
  for (const auto& row : rows)
    if (row.method == Method::lambda_rlm) {
      lo = std::min(lo, row.empirical_accuracy);
      hi = std::max(hi, row.empirical_accuracy);
    }
  r.report = {{"profile", format_profile(cfg.profile)},
              {"rows", out},
              {"lambda_spread", hi - lo},
              {"rlm_baseline_8_turns",
               {{"calls", rlm_baseline_stub(0, 8, cfg.profile).calls},
                {"cost", rlm_baseline_stub(0, 8, cfg.profile).cost},
                {"label", rlm_baseline_stub(0, 8, cfg.profile).label}}}};
}

json reduction_json(const lambda::ReductionTrace& t) {
  json steps = json::array();
  for (const auto& s : t.steps)
    steps.push_back({{"kind", s.kind == lambda::StepKind::beta ? "beta" : "delta"},
                     {"before", lambda::to_string(s.before)},
                     {"after", lambda::to_string(s.after)}});
  return {{"steps", steps}, {"fuel_used", t.fuel_used}, {"terminated", t.terminated}};
}

void suite_lambda(const SuiteOptions&, SuiteResult& r) {
  using namespace lambda;
  Checker c(r);
  json out;

  const auto id = normalize(parse_expr("(\\x. x) y"));
  c.expect(alpha_equivalent(id.term, var("y")), "identity applied to y");
  out["identity"] = reduction_json(id.trace);

  const auto k_ab = parse_expr("(\\x. \\y. x) a b");
  const auto first = beta_step(k_ab);
  c.expect(first && alpha_equivalent(first->result, parse_expr("(\\y. a) b")),
           "const: outer lambda binds a");
  const auto k_nf = normalize(k_ab, 10);
  c.expect(alpha_equivalent(k_nf.term, var("a")), "const a b reduces to a");
  out["const"] = reduction_json(k_nf.trace);

  json facts = json::array();
  std::int64_t native = 1;
  for (std::int64_t n = 0; n <= 5; ++n) {
    if (n > 0) native *= n;
    const auto nf = normalize(app(y_combinator(), {factorial_recipe(), lit(n)}));
    const auto* v = nf.term.as<IntLit>();
    c.expect(v && v->value == native, "factorial " + std::to_string(n));
    facts.push_back({{"n", n},
                     {"value", v ? json(v->value) : json(to_string(nf.term))},
                     {"expected", native},
                     {"steps", nf.trace.fuel_used}});
    if (n == 3) out["factorial_3_trace"] = reduction_json(nf.trace);
  }
  out["factorial"] = facts;

  bool diverged = false;
  std::size_t used = 0;
  try {
    normalize(parse_expr("(\\x. x x) (\\x. x x)"), 100);
  } catch (const FuelExhausted& e) {
    diverged = true;
    used = e.trace().fuel_used;
  }
  c.expect(diverged, "omega exhausts its fuel");
  out["omega"] = {{"fuel_exhausted", diverged}, {"fuel_used", used}};
  r.report = out;
}

void suite_pairwise(const SuiteOptions& opt, SuiteResult& r) {
  Checker c(r);
  Rng rng(stream(opt.seed, 7));
  // A narrow window keeps the quadratic pair sets small while still
  // forcing several chunks per instance.
  auto profile = builtin_profile("scaling");
  profile.name = "scaling-k1024";
  profile.K = 1024;
  SymbolicOracle oracle(profile);
  json cases = json::array();
  for (int i = 0; i < 100; ++i) {
    const std::size_t tokens = rng.between(300, 3000);
    const auto inst = generate(Family::pairwise, tokens, derive_seed({opt.seed, 7, static_cast<std::uint64_t>(i)}));
    RunOptions ro;
    ro.jobs = opt.jobs;
    const auto run = run_instance(inst, oracle, ro);
    const std::size_t n = inst.doc.size();
    const std::size_t neural = run.trace.oracle_calls - 1;
    const std::size_t expected = ceil_div(n, run.plan.tau_star);
    const auto brute = pairwise_truth(inst.doc);
    const auto* got = std::get_if<PairSet>(&run.typed);
    const std::string tag = "instance " + std::to_string(i);
    c.expect(run.detection.task == TaskType::pairwise, tag + ": detection");
    c.expect(neural == expected, tag + ": neural calls " + std::to_string(neural) + " != " +
                                     std::to_string(expected));
    c.expect(got && *got == brute, tag + ": pair set differs from brute force");
    cases.push_back({{"n", n},
                     {"tau", run.plan.tau_star},
                     {"neural_calls", neural},
                     {"expected_calls", expected},
                     {"pairs", brute.size()},
                     {"emitted", got ? got->size() : 0},
                     {"cost", run.trace.accumulated_cost}});
  }
  r.report = {{"cases", cases}};
}

// Documents whose topic token matches the query topic, read off the text.
std::size_t topic_matches(const TaskInstance& inst) {
  std::string topic;
  inst.query.for_each_token([&](std::string_view t) {
    if (t.rfind("topic:", 0) == 0) topic = std::string(t);
  });
  std::size_t hits = 0;
  for (const auto& d : inst.corpus)
    if (!d.empty() && d.token(d.size() > 1 && d.token(0).front() == '#' ? 1 : 0) == topic) ++hits;
  return hits;
}

void suite_multihop(const SuiteOptions& opt, SuiteResult& r) {
  Checker c(r);
  Rng rng(stream(opt.seed, 8));
  const auto profile = builtin_profile("appendix-a");
  SymbolicOracle oracle(profile);
  json cases = json::array();
  auto record = [&](const std::string& tag, const TaskInstance& inst, bool zero_case) {
    RunOptions ro;
    ro.jobs = opt.jobs;
    const auto run = run_instance(inst, oracle, ro);
    const std::size_t retained = topic_matches(inst);
    std::size_t extract = 0;
    for (const auto& call : run.trace.calls) extract += call.kind == CallKind::extract;
    c.expect(run.detection.task == TaskType::multi_hop, tag + ": detection");
    c.expect(extract == retained, tag + ": extraction calls " + std::to_string(extract) +
                                      " != retained " + std::to_string(retained));
    c.expect(run.trace.oracle_calls == retained + 2,
             tag + ": calls " + std::to_string(run.trace.oracle_calls));
    if (zero_case) {
      c.expect(run.trace.has_flag("no_relevant_documents"), tag + ": zero-relevant flag");
    } else {
      c.expect(!run.trace.has_flag("no_relevant_documents"), tag + ": spurious flag");
    }
    cases.push_back({{"case", tag},
                     {"documents", inst.corpus.size()},
                     {"retained", retained},
                     {"calls", run.trace.oracle_calls},
                     {"answer", run.answer},
                     {"score", run.score_exact},
                     {"flags", run.trace.flags}});
  };
  for (int i = 0; i < 50; ++i) {
    const std::size_t tokens = rng.between(2500, 25000);
    const auto inst = generate(Family::multihop, tokens, derive_seed({opt.seed, 8, static_cast<std::uint64_t>(i)}));
    record("instance " + std::to_string(i), inst, false);
  }
  // Same corpus, a topic nobody writes about.
  auto none = generate(Family::multihop, 5000, derive_seed({opt.seed, 8, 1000}));
  none.query = Document::from_text("q:nobody:employer:city topic:t999999");
  record("zero-relevant", none, true);
  r.report = {{"cases", cases}};
}

const std::map<std::string, std::function<void(const SuiteOptions&, SuiteResult&)>>& registry() {
  static const std::map<std::string, std::function<void(const SuiteOptions&, SuiteResult&)>> m = {
      {"termination", suite_termination}, {"cost", suite_cost},
      {"appendix_a", suite_appendix_a},   {"optimal_k", suite_optimal_k},
      {"accuracy", suite_accuracy},       {"lambda", suite_lambda},
      {"pairwise", suite_pairwise},       {"multihop", suite_multihop}};
  return m;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"termination", "cost",   "appendix_a",
                                                 "optimal_k",   "accuracy", "lambda",
                                                 "pairwise",    "multihop"};
  return names;
}

SuiteResult run_suite(std::string_view name, const SuiteOptions& options) {
  const auto it = registry().find(std::string(name));
  if (it == registry().end()) throw ConfigError("unknown suite '" + std::string(name) + "'");
  SuiteResult r;
  r.name = it->first;
  it->second(options, r);
  r.passed = r.failures.empty();
  r.report["suite"] = r.name;
  r.report["seed"] = options.seed;
  r.report["checks"] = r.checks;
  r.report["failures"] = r.failures;
  r.report["passed"] = r.passed;
  if (!options.trace_dir.empty()) {
    std::filesystem::create_directories(options.trace_dir);
    std::ofstream os(std::filesystem::path(options.trace_dir) / (r.name + ".json"),
                     std::ios::binary | std::ios::trunc);
    os << dump_json(r.report);
    if (!os) throw Error("IoError", "cannot write trace for suite " + r.name);
  }
  return r;
}

}  // namespace lrlm
