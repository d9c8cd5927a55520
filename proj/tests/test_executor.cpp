#include <algorithm>
#include <atomic>

#include "doctest.h"
#include "lrlm/error.hpp"
#include "lrlm/executor.hpp"
#include "lrlm/rng.hpp"
#include "lrlm/taskgen.hpp"
#include "lrlm/trace.hpp"

using namespace lrlm;

namespace {

OracleProfile appendix() { return builtin_profile("appendix-a"); }

std::size_t count_kind(const ExecTrace& t, CallKind k) {
  return static_cast<std::size_t>(
      std::count_if(t.calls.begin(), t.calls.end(), [&](const CallRecord& r) { return r.kind == k; }));
}

// Fails every call at or after `from`.
class Failing final : public Oracle {
 public:
  Failing(OracleProfile p, std::uint64_t from) : Oracle(std::move(p)), from_(from) {}
  std::string_view backend() const noexcept override { return "failing"; }

 protected:
  OracleReply do_call(const Document& prompt, std::uint64_t index) override {
    if (index >= from_) throw OracleError("HttpError", index, "injected");
    return {"", priced(prompt.size(), 1)};
  }

 private:
  std::uint64_t from_;
};

class Canned final : public Oracle {
 public:
  Canned(OracleProfile p, std::string reply) : Oracle(std::move(p)), reply_(std::move(reply)) {}
  std::string_view backend() const noexcept override { return "canned"; }

 protected:
  OracleReply do_call(const Document& prompt, std::uint64_t) override {
    return {reply_, priced(prompt.size(), 1)};
  }

 private:
  std::string reply_;
};

}  // namespace

TEST_CASE("input inside tau is one leaf call at depth 0") {
  const auto p = appendix();
  auto inst = gen_aggregate(2000, 6, 1);
  auto plan = plan_with(TaskType::aggregate, 2000, 5, 26000, p);
  SymbolicOracle o(p);
  auto r = execute_phi(inst.doc, plan, o);
  CHECK(r.trace.oracle_calls == 1);
  CHECK(r.trace.max_depth == 0);
  CHECK(r.trace.calls[0].kind == CallKind::leaf);
}

TEST_CASE("131k-token aggregate: five leaves, exact counts") {
  const auto p = appendix();
  auto inst = gen_aggregate(131000, 6, 2);
  auto plan = make_plan(TaskType::aggregate, 131000, p);
  SymbolicOracle o(p);
  auto r = execute_phi(inst.doc, plan, o);
  CHECK(r.trace.oracle_calls == 5);
  CHECK(r.trace.max_depth == 1);
  CHECK(parse_counts(r.answer) == std::get<CountMap>(inst.truth));
}

TEST_CASE("binary tree over 1000 tokens with tau 100 has 16 leaves") {
  auto p = appendix();
  auto inst = gen_aggregate(1000, 6, 3);
  auto plan = plan_with(TaskType::aggregate, 1000, 2, 100, p);
  CHECK(plan.depth == 4);
  SymbolicOracle o(p);
  auto r = execute_phi(inst.doc, plan, o);
  CHECK(r.trace.oracle_calls == 16);
  CHECK(r.trace.max_depth == 4);
}

TEST_CASE("empty trailing chunks become neutral leaves") {
  auto p = appendix();
  auto doc = Document::from_text("Q1 label:a x Q2 label:b y Q3 label:a z");
  REQUIRE(doc.size() == 9);
  auto plan = plan_with(TaskType::aggregate, 9, 4, 3, p);
  SymbolicOracle o(p);
  auto r = execute_phi(doc, plan, o);
  CHECK(r.trace.has_flag("empty_leaf"));
  CHECK(r.trace.oracle_calls == 3);
  CHECK(parse_counts(r.answer) == aggregate_truth(doc));
}

TEST_CASE("property: parallel and serial executors agree byte for byte") {
  Rng rng(5);
  const auto base = gen_aggregate(60000, 6, 9);
  for (int i = 0; i < 40; ++i) {
    auto p = appendix();
    p.K = rng.between(200, 5000);
    const std::size_t n = rng.between(50, base.doc.size());
    const auto doc = peek(base.doc, 0, n);
    const TaskType task = (i % 3 == 0) ? TaskType::summarise : TaskType::aggregate;
    const std::size_t k = rng.between(2, 6);
    const std::size_t tau = std::min<std::size_t>(p.K - max_leaf_header_tokens(),
                                                  std::max<std::size_t>(1, n / k));
    auto plan = plan_with(task, n, k, tau, p);
    StochasticOracle a(p, 77), b(p, 77);
    ExecOptions par;
    par.jobs = 4;
    auto x = execute_phi(doc, plan, a, par);
    auto y = execute_phi_serial(doc, plan, b);
    CHECK(x.answer == y.answer);
    CHECK(dump_json(trace_document(plan, x.trace, x.answer)) ==
          dump_json(trace_document(plan, y.trace, y.answer)));
  }
}

TEST_CASE("property: window safety and depth bound") {
  Rng rng(6);
  const auto base = gen_aggregate(80000, 6, 10);
  for (int i = 0; i < 60; ++i) {
    auto p = appendix();
    p.K = rng.between(100, 4000);
    const std::size_t n = rng.between(p.K + 1, base.doc.size());
    auto plan = make_plan(i % 2 ? TaskType::summarise : TaskType::aggregate, n, p, 0.8,
                          {StrategyKind::fixed, rng.between(2, 8)});
    SymbolicOracle o(p);
    auto r = execute_phi(peek(base.doc, 0, n), plan, o);
    for (const auto& c : r.trace.calls) {
      CHECK(c.input_tokens <= p.K);
      CHECK(c.depth <= plan.depth);
    }
    CHECK(r.trace.max_depth <= plan.depth);
    CHECK(r.trace.oracle_calls == r.trace.calls.size());
  }
}

TEST_CASE("property: pruning never adds calls and keeps the needle") {
  std::size_t pruned_total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto p = appendix();
    p.K = 2000;
    auto inst = gen_needle(40000, seed);
    auto plan = make_plan(TaskType::search, inst.doc.size(), p, 0.8, {StrategyKind::theorem_k2, 2});
    SymbolicOracle o(p);
    ExecOptions pruned;
    pruned.relevance_keywords = query_keywords(inst.query);
    REQUIRE_FALSE(pruned.relevance_keywords.empty());
    auto a = execute_phi(inst.doc, plan, o, pruned);
    auto b = execute_phi(inst.doc, plan, o);
    CHECK(a.trace.oracle_calls <= b.trace.oracle_calls);
    pruned_total += a.trace.pruned_chunks;
    CHECK(a.answer == std::get<std::string>(inst.truth));
  }
  // Chunks past the needle carry no key and are dropped.
  CHECK(pruned_total > 0);
}

TEST_CASE("oracle failure surfaces at the lowest failing index") {
  auto p = appendix();
  p.K = 200;
  auto inst = gen_aggregate(3000, 6, 4);
  auto plan = make_plan(TaskType::aggregate, 3000, p, 0.8, {StrategyKind::theorem_k2, 2});
  Failing o(p, 3);
  ExecOptions opt;
  opt.jobs = 4;
  try {
    execute_phi(inst.doc, plan, o, opt);
    FAIL("expected OracleError");
  } catch (const OracleError& e) {
    CHECK(e.call_index() == 3);
    CHECK(e.cause() == "HttpError");
  }
}

TEST_CASE("invalid plans are rejected before any call") {
  auto p = appendix();
  Plan plan = make_plan(TaskType::aggregate, 100000, p);
  plan.tau_star = p.K;
  Failing o(p, 0);
  CHECK_THROWS_AS(execute_phi(Document::from_text(std::string(10, 'a')), plan, o), PlanInvalid);
}

TEST_CASE("pairwise: both-A predicate") {
  auto p = appendix();
  auto doc = Document::from_text("#pairwise item:1:A filler item:2:A item:3:B");
  auto plan = make_plan(TaskType::pairwise, doc.size(), p);
  SymbolicOracle o(p);
  auto r = execute_pairwise(doc, PairPredicate::both("A"), plan, o);
  CHECK(r.pairs == PairSet{{1, 2}});
  CHECK(r.trace.oracle_calls == 1);
}

TEST_CASE("pairwise: ten windows of labelling, free cross product") {
  auto p = appendix();
  p.K = 1000;
  auto inst = gen_pairwise(800, 8);
  const std::size_t n = inst.doc.size();
  const std::size_t tau = ceil_div(n, 10);
  auto plan = plan_with(TaskType::pairwise, n, 2, tau, p);
  SymbolicOracle o(p);
  auto r = execute_pairwise(inst.doc, PairPredicate::same_label(), plan, o);
  CHECK(count_kind(r.trace, CallKind::leaf) == 10);
  CHECK(r.pairs == std::get<PairSet>(inst.truth));
  CHECK(r.trace.accumulated_cost > 0.0);
}

TEST_CASE("pairwise: no qualifying pair gives the empty set") {
  auto p = appendix();
  auto doc = Document::from_text("#pairwise item:1:A item:2:B item:3:C");
  SymbolicOracle o(p);
  auto r = execute_pairwise(doc, PairPredicate::same_label(), make_plan(TaskType::pairwise, doc.size(), p), o);
  CHECK(r.pairs.empty());
}

TEST_CASE("pairwise: malformed oracle output is flagged") {
  auto p = appendix();
  auto doc = Document::from_text("item:1:A item:2:A");
  Canned o(p, "1\tA\ngarbage\n2\tA\n");
  auto r = execute_pairwise(doc, PairPredicate::same_label(), make_plan(TaskType::pairwise, 2, p), o);
  CHECK(r.malformed == 1);
  CHECK(r.trace.has_flag("parse_failure"));
  CHECK(r.pairs == PairSet{{1, 2}});
}

namespace {

std::vector<Document> topic_corpus(std::size_t docs, std::size_t relevant) {
  std::vector<Document> out;
  for (std::size_t i = 0; i < docs; ++i) {
    std::string t = i < relevant ? "topic:t1" : "topic:t" + std::to_string(100 + i);
    t += " some text fact:a" + std::to_string(i) + ":employer:b" + std::to_string(i);
    out.push_back(Document::from_text(t));
  }
  return out;
}

}  // namespace

TEST_CASE("multihop: three relevant documents of a hundred") {
  auto p = appendix();
  auto corpus = topic_corpus(100, 3);
  auto q = Document::from_text("q:a0:employer:city topic:t1");
  SymbolicOracle o(p);
  auto r = execute_multihop(corpus, q, o);
  CHECK(r.retained == std::vector<std::size_t>{0, 1, 2});
  CHECK(count_kind(r.trace, CallKind::extract) == 3);
  CHECK(r.trace.oracle_calls == 4);
}

TEST_CASE("multihop: nothing relevant still synthesises once") {
  auto p = appendix();
  auto corpus = topic_corpus(20, 0);
  auto q = Document::from_text("q:a0:employer:city topic:t1");
  SymbolicOracle o(p);
  auto r = execute_multihop(corpus, q, o);
  CHECK(r.trace.oracle_calls == 1);
  CHECK(r.trace.has_flag("no_relevant_documents"));
}

TEST_CASE("multihop: preview reads at most the budget") {
  auto p = appendix();
  std::string far;
  for (int i = 0; i < 600; ++i) far += "w ";
  far += "topic:t1";
  std::vector<Document> corpus = {Document::from_text(far)};
  auto q = Document::from_text("q:a:employer:city topic:t1");
  SymbolicOracle o(p);
  auto r = execute_multihop(corpus, q, o);
  CHECK(r.retained.empty());
  for (const auto& e : r.trace.events)
    if (e.kind == EventKind::preview) CHECK(e.tokens <= default_preview_budget);
  auto wide = execute_multihop(corpus, q, o, 1000);
  CHECK(wide.retained.size() == 1);
}

TEST_CASE("multihop: generated instances resolve both hops") {
  auto p = appendix();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto inst = gen_multihop(30, seed, 4);
    SymbolicOracle o(p);
    auto r = execute_multihop(inst.corpus, inst.query, o);
    CHECK(r.retained.size() == 4);
    CHECK(r.answer == std::get<std::string>(inst.truth));
  }
}

TEST_CASE("pairs text round-trip") {
  PairSet s{{1, 2}, {3, 9}, {10, 11}};
  CHECK(parse_pairs(format_pairs(s)) == s);
  CHECK(parse_pairs("").empty());
}
