#include "lrlm/pipeline.hpp"

namespace lrlm {

RunResult run_instance(const TaskInstance& inst, Oracle& oracle, const RunOptions& options) {
  const auto& profile = oracle.profile();
  const Document& P = inst.doc;
  const std::size_t n = P.size();
  RunResult r;

  r.detection = detect_task(peek(P, 0, detection_preview_length(n, profile)), n, oracle, 0);
  r.plan = make_plan(r.detection.task, n, profile, options.alpha, options.strategy);
  r.estimate = estimate_cost(r.plan, n, profile);
  r.predicted_accuracy = estimate_accuracy(r.plan, n, profile);

  ExecOptions eo;
  eo.jobs = options.jobs;
  eo.first_index = 1;
  ExecTrace body;
  switch (r.detection.task) {
    case TaskType::pairwise: {
      auto res = execute_pairwise(P, PairPredicate::same_label(), r.plan, oracle, eo);
      r.answer = format_pairs(res.pairs);
      body = std::move(res.trace);
      break;
    }
    case TaskType::multi_hop: {
      const std::vector<Document> single{P};
      const auto& corpus = inst.corpus.empty() ? single : inst.corpus;
      auto res = execute_multihop(corpus, inst.query, oracle, options.preview_budget, eo);
      r.answer = res.answer;
      body = std::move(res.trace);
      break;
    }
    default: {
      eo.relevance_keywords = query_keywords(inst.query);
      auto res = execute_phi(P, r.plan, oracle, eo);
      r.answer = res.answer;
      body = std::move(res.trace);
      break;
    }
  }

  auto& t = r.trace;
  t.calls.push_back(make_record(0, 0, CallKind::detect, oracle.backend(), r.detection.record));
  t.calls.insert(t.calls.end(), body.calls.begin(), body.calls.end());
  t.oracle_calls = t.calls.size();
  t.max_depth = body.max_depth;
  t.accumulated_cost = r.detection.record.cost;
  t.accumulated_cost += body.accumulated_cost;
  t.pruned_chunks = body.pruned_chunks;
  if (!r.detection.recognized) {
    t.events.push_back({EventKind::unrecognized_task, 0, r.detection.prompt_tokens, 0, 0});
    t.flag("unrecognized_task");
  }
  for (const auto& f : r.plan.flags) t.flag(f);
  for (const auto& f : body.flags) t.flag(f);
  t.events.insert(t.events.end(), body.events.begin(), body.events.end());

  r.typed = typed_answer(inst.family, r.answer);
  r.score_exact = score(r.typed, inst.truth, Metric::exact);
  r.score_f1 = score(r.typed, inst.truth, Metric::f1);
  return r;
}

nlohmann::json run_document(const RunResult& r) {
  auto j = trace_document(r.plan, r.trace, r.answer);
  j["detected_task"] = std::string(to_string(r.detection.task));
  j["estimate"] = to_json(r.estimate);
  j["predicted_accuracy"] = r.predicted_accuracy;
  j["score"] = {{"exact", r.score_exact}, {"f1", r.score_f1}};
  return j;
}

}  // namespace lrlm
