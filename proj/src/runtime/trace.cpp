#include "lrlm/trace.hpp"

#include <algorithm>

namespace lrlm {

std::string_view to_string(CallKind k) noexcept {
  switch (k) {
    case CallKind::detect: return "detect";
    case CallKind::direct: return "direct";
    case CallKind::leaf: return "leaf";
    case CallKind::compose: return "compose";
    case CallKind::extract: return "extract";
    case CallKind::synth: return "synth";
  }
  return "?";
}

std::string_view to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::split: return "split";
    case EventKind::prune: return "prune";
    case EventKind::empty_leaf: return "empty_leaf";
    case EventKind::all_pruned: return "all_pruned";
    case EventKind::neural_phase: return "neural_phase";
    case EventKind::symbolic_phase: return "symbolic_phase";
    case EventKind::preview: return "preview";
    case EventKind::no_relevant_documents: return "no_relevant_documents";
    case EventKind::unrecognized_task: return "unrecognized_task";
    case EventKind::parse_failure: return "parse_failure";
  }
  return "?";
}

void ExecTrace::flag(const std::string& f) {
  if (!has_flag(f)) flags.push_back(f);
}

bool ExecTrace::has_flag(std::string_view f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

CallRecord make_record(std::uint64_t index, int depth, CallKind kind, std::string_view backend,
                       const OracleCallRecord& r) {
  CallRecord c;
  c.index = index;
  c.depth = depth;
  c.kind = kind;
  c.backend = std::string(backend);
  c.input_tokens = r.input_tokens;
  c.output_tokens = r.output_tokens;
  c.cost = r.cost;
  c.was_correct = r.was_correct;
  return c;
}

nlohmann::json to_json(const Strategy& s) { return to_string(s); }

nlohmann::json to_json(const Plan& p) {
  nlohmann::json stages = nlohmann::json::array();
  for (auto s : p.pipeline) stages.push_back(std::string(to_string(s)));
  return {{"task", std::string(to_string(p.task))},
          {"compose", std::string(to_string(p.compose))},
          {"pipeline", stages},
          {"n", p.n},
          {"k_star", p.k_star},
          {"tau_star", p.tau_star},
          {"depth", p.depth},
          {"depth_algorithm", p.depth_algorithm},
          {"strategy", to_string(p.strategy)},
          {"alpha", p.alpha},
          {"header_tokens", p.header_tokens},
          {"flags", p.flags}};
}

nlohmann::json to_json(const CostEstimate& e) {
  return {{"total", e.total},
          {"leaf_cost", e.leaf_cost},
          {"composition_cost", e.composition_cost},
          {"detection_cost", e.detection_cost},
          {"leaf_calls", e.leaf_calls},
          {"detection_calls", e.detection_calls},
          {"predicted_calls", e.predicted_calls}};
}

nlohmann::json to_json(const CallRecord& r) {
  nlohmann::json j = {{"index", r.index},
                      {"depth", r.depth},
                      {"input_tokens", r.input_tokens},
                      {"output_tokens", r.output_tokens},
                      {"cost", r.cost},
                      {"backend", r.backend},
                      {"kind", std::string(to_string(r.kind))}};
  if (r.was_correct) j["was_correct"] = *r.was_correct;
  return j;
}

nlohmann::json to_json(const ExecTrace& t) {
  nlohmann::json calls = nlohmann::json::array();
  for (const auto& c : t.calls) calls.push_back(to_json(c));
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : t.events)
    events.push_back({{"event", std::string(to_string(e.kind))},
                      {"depth", e.depth},
                      {"tokens", e.tokens},
                      {"count", e.count},
                      {"extra", e.extra}});
  return {{"calls", calls},
          {"oracle_calls", t.oracle_calls},
          {"max_depth", t.max_depth},
          {"accumulated_cost", t.accumulated_cost},
          {"pruned_chunks", t.pruned_chunks},
          {"flags", t.flags},
          {"events", events}};
}

nlohmann::json trace_document(const Plan& plan, const ExecTrace& trace, const std::string& answer) {
  auto j = to_json(trace);
  j["plan"] = to_json(plan);
  j["answer"] = answer;
  return j;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace lrlm
