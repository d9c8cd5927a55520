#include <algorithm>
#include <cstdio>
#include <sstream>

#include <omp.h>

#include "lrlm/analysis.hpp"
#include "lrlm/error.hpp"
#include "lrlm/executor.hpp"
#include "lrlm/rng.hpp"
#include "lrlm/taskgen.hpp"

namespace lrlm {

std::string_view to_string(Method m) noexcept {
  return m == Method::direct ? "direct" : "lambda_rlm";
}

namespace {

Family family_for(TaskType t) {
  switch (t) {
    case TaskType::search: return Family::needle;
    case TaskType::aggregate: return Family::aggregate;
    case TaskType::pairwise: return Family::pairwise;
    case TaskType::multi_hop: return Family::multihop;
    default: break;
  }
  throw ConfigError("no generator for task " + std::string(to_string(t)));
}

struct Trial {
  bool direct_ok = false;
  double direct_cost = 0.0;
  bool leaf_ok = false;
  bool exact_ok = false;
  double calls = 0.0;
  double cost = 0.0;
};

ExecTrace run_body(const TaskInstance& inst, const Plan& plan, Oracle& oracle, std::string& answer,
                   std::size_t preview_budget) {
  ExecOptions eo;
  eo.first_index = 1;
  switch (plan.task) {
    case TaskType::pairwise: {
      auto r = execute_pairwise(inst.doc, PairPredicate::same_label(), plan, oracle, eo);
      answer = format_pairs(r.pairs);
      return std::move(r.trace);
    }
    case TaskType::multi_hop: {
      auto r = execute_multihop(inst.corpus, inst.query, oracle, preview_budget, eo);
      answer = r.answer;
      return std::move(r.trace);
    }
    default: {
      eo.relevance_keywords = query_keywords(inst.query);
      auto r = execute_phi(inst.doc, plan, oracle, eo);
      answer = r.answer;
      return std::move(r.trace);
    }
  }
}

}  // namespace

std::vector<ScalingRow> simulate_scaling(const ScalingConfig& cfg) {
  if (cfg.trials == 0) throw ConfigError("trials must be >= 1");
  validate_profile(cfg.profile);
  const Family family = family_for(cfg.task);
  std::vector<ScalingRow> rows;
  StochasticOracle base(cfg.profile, cfg.seed);

  for (const std::size_t n_req : cfg.grid) {
    const auto inst = generate(family, n_req, derive_seed({cfg.seed, n_req}));
    const std::size_t n = inst.doc.size();

    // Detection is deterministic and shared by every trial.
    SymbolicOracle sym(cfg.profile);
    const auto det =
        detect_task(peek(inst.doc, 0, detection_preview_length(n, cfg.profile)), n, sym, 0);
    const auto plan = make_plan(det.task, n, cfg.profile, cfg.alpha, cfg.strategy);
    const Document direct_input =
        cfg.truncate && n > cfg.profile.K ? peek(inst.doc, 0, cfg.profile.K) : inst.doc;

    std::vector<Trial> trials(cfg.trials);
    std::vector<std::exception_ptr> errors(cfg.trials);
    const auto count = static_cast<long>(cfg.trials);
    const int jobs = std::max(1, cfg.jobs);
#pragma omp parallel for schedule(dynamic, 16) num_threads(jobs) if (jobs > 1)
    for (long i = 0; i < count; ++i) {
      const auto t = static_cast<std::uint64_t>(i);
      auto& out = trials[static_cast<std::size_t>(i)];
      try {
        auto oracle = base.with_seed(derive_seed({cfg.seed, n, t}));

        auto d = oracle.simulate(direct_input, 0);
        out.direct_ok = score(typed_answer(family, d.answer), inst.truth, Metric::exact) == 1.0;
        out.direct_cost = d.record.cost;

        std::string answer;
        const auto body = run_body(inst, plan, oracle, answer, default_preview_budget);
        out.exact_ok = score(typed_answer(family, answer), inst.truth, Metric::exact) == 1.0;
        out.calls = static_cast<double>(body.oracle_calls + 1);
        out.cost = det.record.cost;
        out.cost += body.accumulated_cost;
        if (!body.calls.empty()) {
          Rng pick(derive_seed({cfg.seed, n, t, 0x1eafULL}));
          const auto& rec = body.calls[pick.below(body.calls.size())];
          out.leaf_ok = rec.was_correct.value_or(false);
        }
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);

    // Serial reduction in trial order keeps the sums independent of jobs.
    std::size_t d_ok = 0, l_ok = 0, x_ok = 0;
    double d_cost = 0.0, l_cost = 0.0, l_calls = 0.0;
    for (const auto& tr : trials) {
      d_ok += tr.direct_ok;
      l_ok += tr.leaf_ok;
      x_ok += tr.exact_ok;
      d_cost += tr.direct_cost;
      l_cost += tr.cost;
      l_calls += tr.calls;
    }
    const double nt = static_cast<double>(cfg.trials);

    ScalingRow direct;
    direct.n = n;
    direct.method = Method::direct;
    direct.trials = cfg.trials;
    direct.empirical_accuracy = static_cast<double>(d_ok) / nt;
    direct.exact_accuracy = direct.empirical_accuracy;
    direct.predicted = direct_accuracy(direct_input.size(), cfg.profile);
    direct.mean_calls = 1.0;
    direct.mean_cost = d_cost / nt;
    std::tie(direct.ci_low, direct.ci_high) = wilson_interval(d_ok, cfg.trials);
    direct.tau_star = direct_input.size();
    rows.push_back(direct);

    ScalingRow lam;
    lam.n = n;
    lam.method = Method::lambda_rlm;
    lam.trials = cfg.trials;
    lam.empirical_accuracy = static_cast<double>(l_ok) / nt;
    lam.exact_accuracy = static_cast<double>(x_ok) / nt;
    lam.predicted = estimate_accuracy(plan, n, cfg.profile);
    lam.mean_calls = l_calls / nt;
    lam.mean_cost = l_cost / nt;
    std::tie(lam.ci_low, lam.ci_high) = wilson_interval(l_ok, cfg.trials);
    lam.lower_bound = plan.direct()
                          ? accuracy_at(cfg.profile, static_cast<double>(n))
                          : accuracy_lower_bound(n, plan.k_star, plan.tau_star, plan.depth,
                                                 cfg.profile);
    lam.k_star = plan.k_star;
    lam.tau_star = plan.tau_star;
    lam.depth = plan.depth;
    rows.push_back(lam);
  }
  return rows;
}

std::string scaling_csv(const std::vector<ScalingRow>& rows) {
  std::ostringstream os;
  os << "n,method,trials,empirical_accuracy,predicted,mean_calls,mean_cost,exact_accuracy,"
        "ci_low,ci_high,lower_bound,k_star,tau_star,depth\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%zu,%s,%zu,%.6f,%.6f,%.4f,%.8f,%.6f,%.6f,%.6f,%.6g,%zu,%zu,%d\n",
                  r.n, std::string(to_string(r.method)).c_str(), r.trials, r.empirical_accuracy,
                  r.predicted, r.mean_calls, r.mean_cost, r.exact_accuracy, r.ci_low, r.ci_high,
                  r.lower_bound, r.k_star, r.tau_star, r.depth);
    os << buf;
  }
  return os.str();
}

}  // namespace lrlm
