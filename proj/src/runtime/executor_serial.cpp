#include <algorithm>

#include "lrlm/error.hpp"
#include "lrlm/executor.hpp"
#include "lrlm/fix.hpp"

namespace lrlm {

namespace {

struct Partial {
  std::string answer;
  double cost = 0.0;
};

}  // namespace

ExecResult execute_phi_serial(const Document& doc, const Plan& plan, Oracle& oracle,
                              const ExecOptions& opt) {
  validate_plan(plan, doc.size(), oracle.profile());
  ExecTrace trace;
  std::uint64_t next = opt.first_index;
  const bool prune = pipeline_prunes(plan.pipeline) && !opt.relevance_keywords.empty();
  const int ceiling = plan.direct() ? 0 : ceil_log(doc.size(), plan.tau_star, plan.k_star) + 2;

  auto invoke = [&](const Document& prompt, int depth, CallKind kind) {
    const auto index = next++;
    auto reply = oracle.call(prompt, index);
    trace.calls.push_back(make_record(index, depth, kind, oracle.backend(), reply.record));
    return reply;
  };

  // phi = fix (\f. \P. if |P| <= tau then M(leaf P) else compose (map f (split P k)))
  auto phi = fix([&](const auto& self, const Document& p, int depth) -> Partial {
    trace.max_depth = std::max(trace.max_depth, depth);
    if (plan.direct()) {
      auto r = invoke(p, depth, CallKind::direct);
      return {std::move(r.answer), r.record.cost};
    }
    if (depth > ceiling) throw PlanInvalid("recursion exceeded the stack ceiling d + 2");
    if (p.size() <= plan.tau_star) {
      if (p.empty()) {
        trace.events.push_back({EventKind::empty_leaf, depth, 0, 0, 0});
        trace.flag("empty_leaf");
        return {neutral_answer(plan.task), 0.0};
      }
      auto r = invoke(leaf_prompt(p, plan.task), depth, CallKind::leaf);
      return {std::move(r.answer), r.record.cost};
    }
    auto chunks = split(p, plan.k_star);
    trace.events.push_back({EventKind::split, depth, p.size(), chunks.size(), 0});
    if (prune) {
      const std::size_t preview = plan.tau_star / 10;
      const auto before = chunks.size();
      std::erase_if(chunks, [&](const Document& c) {
        return !chunk_relevant(c, preview, opt.relevance_keywords);
      });
      trace.events.push_back({EventKind::prune, depth, preview, chunks.size(), before - chunks.size()});
      trace.pruned_chunks += before - chunks.size();
      if (chunks.empty()) {
        trace.events.push_back({EventKind::all_pruned, depth, p.size(), 0, 0});
        trace.flag("all_chunks_pruned");
      }
    }
    std::vector<std::string> parts;
    double c = 0.0;
    for (const auto& chunk : chunks) {
      auto sub = self(chunk, depth + 1);
      parts.push_back(std::move(sub.answer));
      c += sub.cost;
    }
    if (parts.empty()) return {neutral_answer(plan.task), c};
    if (!is_neural(plan.compose)) {
      c += 0.0;
      return {compose_symbolic(plan.compose, parts), c};
    }
    const auto index = next++;
    auto reply = oracle.call(compose_prompt(plan.compose, parts), index);
    reply.record.cost = compose_cost(oracle.profile(), parts.size(), plan.compose);
    trace.calls.push_back(
        make_record(index, depth, CallKind::compose, oracle.backend(), reply.record));
    c += reply.record.cost;
    return {std::move(reply.answer), c};
  });

  auto top = phi(doc, 0);
  trace.oracle_calls = trace.calls.size();
  trace.accumulated_cost = top.cost;
  return {std::move(top.answer), std::move(trace)};
}

}  // namespace lrlm
