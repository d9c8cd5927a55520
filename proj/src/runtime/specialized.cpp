#include <algorithm>
#include <charconv>
#include <exception>
#include <map>

#include <omp.h>

#include "lrlm/error.hpp"
#include "lrlm/executor.hpp"

namespace lrlm {

PairPredicate PairPredicate::same_label() {
  return {"same_label", [](const LabelRecord&) { return true; },
          [](const LabelRecord& a, const LabelRecord& b) { return a.label == b.label; }};
}

PairPredicate PairPredicate::both(std::string label) {
  auto keep = [label](const LabelRecord& r) { return r.label == label; };
  return {"both:" + label, keep, [](const LabelRecord&, const LabelRecord&) { return true; }};
}

std::string format_pairs(const PairSet& pairs) {
  std::string out;
  for (const auto& [a, b] : pairs) {
    if (!out.empty()) out += ' ';
    out += std::to_string(a) + "," + std::to_string(b);
  }
  return out;
}

PairSet parse_pairs(std::string_view text) {
  PairSet out;
  std::size_t i = 0;
  while (i < text.size()) {
    auto sp = text.find(' ', i);
    if (sp == std::string_view::npos) sp = text.size();
    const auto w = text.substr(i, sp - i);
    i = sp + 1;
    const auto comma = w.find(',');
    if (comma == std::string_view::npos) continue;
    std::uint64_t a = 0, b = 0;
    std::from_chars(w.data(), w.data() + comma, a);
    std::from_chars(w.data() + comma + 1, w.data() + w.size(), b);
    out.emplace(a, b);
  }
  return out;
}

namespace {

struct Slot {
  Document prompt;
  std::uint64_t index = 0;
  int depth = 0;
  CallKind kind = CallKind::leaf;
  OracleReply reply;
};

// Runs independent calls concurrently and rethrows the lowest-index failure.
void dispatch(std::vector<Slot>& slots, Oracle& oracle, int jobs) {
  std::vector<std::exception_ptr> errors(slots.size());
  jobs = std::max(1, jobs);
  const auto count = static_cast<long>(slots.size());
#pragma omp parallel for schedule(dynamic) num_threads(jobs) if (jobs > 1 && count > 1)
  for (long i = 0; i < count; ++i) {
    auto& s = slots[static_cast<std::size_t>(i)];
    try {
      s.reply = oracle.call(s.prompt, s.index);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void record_all(ExecTrace& trace, const std::vector<Slot>& slots, const Oracle& oracle) {
  for (const auto& s : slots) {
    trace.calls.push_back(make_record(s.index, s.depth, s.kind, oracle.backend(), s.reply.record));
    trace.max_depth = std::max(trace.max_depth, s.depth);
  }
}

}  // namespace

PairwiseResult execute_pairwise(const Document& doc, const PairPredicate& predicate,
                                const Plan& plan, Oracle& oracle, const ExecOptions& opt) {
  validate_plan(plan, doc.size(), oracle.profile());
  PairwiseResult out;
  auto& trace = out.trace;
  std::uint64_t next = opt.first_index;

  // Phase A: neural labelling.
  std::vector<Slot> slots;
  if (plan.direct()) {
    slots.push_back({doc, next++, 0, CallKind::direct, {}});
  } else {
    const auto k = std::max<std::size_t>(1, ceil_div(doc.size(), plan.tau_star));
    const auto chunks = split(doc, k);
    trace.events.push_back({EventKind::split, 0, doc.size(), chunks.size(), 0});
    for (const auto& c : chunks) {
      if (c.empty()) {
        trace.events.push_back({EventKind::empty_leaf, 1, 0, 0, 0});
        trace.flag("empty_leaf");
        continue;
      }
      slots.push_back({leaf_prompt(c, TaskType::pairwise), next++, 1, CallKind::leaf, {}});
    }
  }
  trace.events.push_back({EventKind::neural_phase, 0, doc.size(), slots.size(), 0});
  dispatch(slots, oracle, opt.jobs);
  record_all(trace, slots, oracle);

  std::vector<std::string> parts;
  double cost = 0.0;
  for (const auto& s : slots) {
    parts.push_back(s.reply.answer);
    cost += s.reply.record.cost;
  }

  // Phase B: parse, filter, cross. No oracle involvement.
  auto parsed = parse_label_records(compose_symbolic(ComposeOp::CrossFilter, parts));
  out.malformed = parsed.malformed;
  if (parsed.malformed > 0) {
    trace.events.push_back({EventKind::parse_failure, 0, 0, parsed.malformed, 0});
    trace.flag("parse_failure");
  }
  std::map<std::uint64_t, LabelRecord> by_id;
  for (auto& r : parsed.records)
    if (predicate.keep(r)) by_id.emplace(r.id, std::move(r));
  std::vector<LabelRecord> q;
  for (auto& [id, r] : by_id) q.push_back(std::move(r));
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = i + 1; j < q.size(); ++j)
      if (predicate.relation(q[i], q[j])) out.pairs.emplace(q[i].id, q[j].id);
  trace.events.push_back({EventKind::symbolic_phase, 0, q.size(), out.pairs.size(), 0});

  trace.oracle_calls = trace.calls.size();
  trace.accumulated_cost = cost;
  return out;
}

MultihopResult execute_multihop(const std::vector<Document>& corpus, const Document& query,
                                Oracle& oracle, std::size_t preview_budget,
                                const ExecOptions& opt) {
  if (corpus.empty()) throw Error("EmptyCorpus", "multi-hop search needs at least one document");
  MultihopResult out;
  auto& trace = out.trace;
  const auto keywords =
      opt.relevance_keywords.empty() ? query_keywords(query) : opt.relevance_keywords;
  std::uint64_t next = opt.first_index;

  // A: preview and filter, symbolic.
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto budget = std::min(preview_budget, corpus[i].size());
    trace.events.push_back({EventKind::preview, 0, budget, i, 0});
    if (chunk_relevant(corpus[i], budget, keywords)) out.retained.push_back(i);
  }
  if (out.retained.empty()) {
    trace.events.push_back({EventKind::no_relevant_documents, 0, 0, corpus.size(), 0});
    trace.flag("no_relevant_documents");
  }

  // B: read only what survived.
  const auto room = oracle.profile().K - std::min(oracle.profile().K,
                                                   header_tokens(leaf_header(TaskType::multi_hop)));
  std::vector<Slot> slots;
  for (auto i : out.retained) {
    auto d = corpus[i];
    if (d.size() > room) {
      d = peek(d, 0, room);
      trace.flag("document_truncated");
    }
    slots.push_back({leaf_prompt(d, TaskType::multi_hop), next++, 1, CallKind::extract, {}});
  }
  dispatch(slots, oracle, opt.jobs);
  record_all(trace, slots, oracle);

  // C: one synthesis call over the joined evidence.
  double cost = 0.0;
  std::vector<std::string> facts;
  for (const auto& s : slots) {
    cost += s.reply.record.cost;
    if (!s.reply.answer.empty()) facts.push_back(s.reply.answer);
  }
  const auto evidence = Document::from_text(compose_symbolic(ComposeOp::Concat, facts));
  auto prompt = synthesis_prompt(query, evidence);
  const auto index = next++;
  auto reply = oracle.call(prompt, index);
  trace.calls.push_back(make_record(index, 0, CallKind::synth, oracle.backend(), reply.record));
  cost += reply.record.cost;

  out.answer = reply.answer;
  trace.oracle_calls = trace.calls.size();
  trace.accumulated_cost = cost;
  return out;
}

}  // namespace lrlm
