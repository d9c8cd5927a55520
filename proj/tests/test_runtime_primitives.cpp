#include <numeric>

#include "doctest.h"
#include "lrlm/combinators.hpp"
#include "lrlm/compose.hpp"
#include "lrlm/document.hpp"
#include "lrlm/rng.hpp"
#include "lrlm/task.hpp"

using namespace lrlm;

namespace {

Document numbered(std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s += "t" + std::to_string(i) + (i % 7 == 6 ? "\n" : " ");
  return Document::from_text(s);
}

std::vector<std::size_t> sizes(const std::vector<Document>& parts) {
  std::vector<std::size_t> out;
  for (const auto& p : parts) out.push_back(p.size());
  return out;
}

}  // namespace

TEST_CASE("tokenizer: whitespace units, exact byte reconstruction") {
  const std::string text = "  alpha beta\n\tgamma  delta ";
  const auto d = Document::from_text(text);
  CHECK(d.size() == 4);
  CHECK(d.token(0) == "alpha");
  CHECK(d.token(3) == "delta");
  CHECK(d.text() == text);
  CHECK_THROWS_AS(d.token(4), OutOfBounds);

  const auto c = Document::from_text("a b", TokenizerKind::character);
  CHECK(c.size() == 3);
  CHECK(c.token(1) == " ");
  CHECK(Document::from_text("   ").size() == 0);
}

TEST_CASE("split examples") {
  CHECK(sizes(split(numbered(10), 5)) == std::vector<std::size_t>{2, 2, 2, 2, 2});
  CHECK(sizes(split(numbered(7), 3)) == std::vector<std::size_t>{3, 3, 1});
  const auto big = split(numbered(131000), 5);
  CHECK(sizes(big) == std::vector<std::size_t>(5, 26200));
  // More chunks than tokens: trailing chunks are empty.
  CHECK(sizes(split(numbered(2), 4)) == std::vector<std::size_t>{1, 1, 0, 0});
  CHECK_THROWS_AS(split(numbered(3), 0), InvalidSplit);
}

TEST_CASE("property: split sizes follow the ceiling rule and concat inverts split") {
  Rng rng(21);
  for (int i = 0; i < 300; ++i) {
    const std::size_t n = rng.between(1, 400), k = rng.between(1, 40);
    const auto doc = numbered(n);
    const auto parts = split(doc, k);
    REQUIRE(parts.size() == k);
    const std::size_t c = ceil_div(n, k);
    std::size_t total = 0;
    for (std::size_t j = 0; j < k; ++j) {
      CHECK(parts[j].size() == std::min((j + 1) * c, n) - std::min(j * c, n));
      CHECK(parts[j].size() <= c);
      total += parts[j].size();
    }
    CHECK(total == n);
    const auto back = concat_op(parts);
    CHECK(back.tokens() == doc.tokens());
    CHECK(back.text() == doc.text());
    // Adjacent views of one text merge back into a single segment.
    CHECK(back.segments().size() == 1);
  }
}

TEST_CASE("peek examples and composition law") {
  const auto doc = numbered(1000);
  CHECK(peek(doc, 0, 0).empty());
  const auto head = peek(doc, 0, 500);
  CHECK(head.size() == 500);
  CHECK(head.token(499) == "t499");
  CHECK_THROWS_AS(peek(doc, 5, 4), OutOfBounds);
  CHECK_THROWS_AS(peek(doc, 0, 1001), OutOfBounds);

  Rng rng(22);
  for (int i = 0; i < 200; ++i) {
    const std::size_t a = rng.below(1000);
    const std::size_t b = rng.between(a, 1000);
    const std::size_t c = rng.between(0, b - a);
    CHECK(peek(peek(doc, a, b), 0, c).tokens() == peek(doc, a, a + c).tokens());
  }
}

TEST_CASE("concat across sources keeps tokens apart") {
  const auto a = Document::from_text("x y");
  const auto b = Document::from_text("z");
  const auto ab = concat(a, b);
  CHECK(ab.size() == 3);
  CHECK(ab.text() == "x y z");
  CHECK(Document::from_text(ab.text()).tokens() == ab.tokens());
}

TEST_CASE("list combinators") {
  const std::vector<int> xs{1, 2, 3, 4};
  CHECK(map_op([](int x) { return x * 10; }, xs) == std::vector<int>{10, 20, 30, 40});
  CHECK(filter_op([](int x) { return x % 2 == 0; }, xs) == std::vector<int>{2, 4});
  CHECK(reduce_op([](int a, int b) { return a - b; }, xs) == 1 - 2 - 3 - 4);
  CHECK_THROWS_AS(reduce_op([](int a, int b) { return a + b; }, std::vector<int>{}), EmptyReduce);

  const std::vector<std::string> l{"a", "b"}, r{"c"};
  const auto prod = cross_op(l, r);
  REQUIRE(prod.size() == 2);
  CHECK(prod[0] == std::pair<std::string, std::string>{"a", "c"});
  CHECK(prod[1] == std::pair<std::string, std::string>{"b", "c"});
}

TEST_CASE("MergeCounts: per-key sums, missing keys count as zero") {
  const std::vector<CountMap> parts{{{"desc", 45}}, {{"desc", 33}}};
  const auto merged =
      reduce_op([](CountMap a, const CountMap& b) { return merge_counts(std::move(a), b); }, parts);
  CHECK(merged == CountMap{{"desc", 78}});

  CHECK(parse_counts(compose_symbolic(ComposeOp::MergeCounts, {"desc:45 num:2", "desc:33 abbr:1"})) ==
        CountMap{{"abbr", 1}, {"desc", 78}, {"num", 2}});

  // Oracle: a direct map-sum over random maps.
  Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    std::vector<std::string> texts;
    CountMap expect;
    for (int p = 0; p < 5; ++p) {
      CountMap m;
      for (int j = 0; j < 4; ++j) {
        const auto key = "c" + std::to_string(rng.below(6));
        const auto v = static_cast<std::int64_t>(rng.below(50));
        m[key] += v;
        expect[key] += v;
      }
      texts.push_back(format_counts(m));
    }
    CHECK(parse_counts(compose_symbolic(ComposeOp::MergeCounts, texts)) == expect);
  }
}

TEST_CASE("count and label formats round-trip") {
  const CountMap m{{"desc", 3}, {"num", 0}, {"loc", 12}};
  CHECK(parse_counts(format_counts(m)) == m);
  const std::vector<LabelRecord> recs{{1, "A"}, {7, "B"}};
  const auto parsed = parse_label_records(format_label_records(recs));
  CHECK(parsed.records == recs);
  CHECK(parsed.malformed == 0);
  const auto bad = parse_label_records("1\tA\nnonsense\nx\tB\n3\tC\n");
  CHECK(bad.records.size() == 2);
  CHECK(bad.malformed == 2);
}

TEST_CASE("symbolic composition operators") {
  CHECK(compose_symbolic(ComposeOp::FilterBest, {"NONE", "", "v42", "v7"}) == "v42");
  CHECK(compose_symbolic(ComposeOp::FilterBest, {"NONE", "NONE"}) == "NONE");
  CHECK_THROWS(compose_symbolic(ComposeOp::NeuralConcat, {"a"}));
  CHECK_FALSE(is_neural(ComposeOp::MergeCounts));
  CHECK(is_neural(ComposeOp::NeuralSynth));
}

TEST_CASE("plan table rows") {
  const auto agg = lookup_plan(TaskType::aggregate);
  CHECK(agg.compose == ComposeOp::MergeCounts);
  CHECK(agg.pipeline == std::vector<Stage>{Stage::Split, Stage::MapOracle, Stage::Merge});
  const auto pw = lookup_plan(TaskType::pairwise);
  CHECK(pw.compose == ComposeOp::CrossFilter);
  CHECK(pw.pipeline ==
        std::vector<Stage>{Stage::Split, Stage::MapOracle, Stage::Parse, Stage::Filter, Stage::Cross});
  const auto mh = lookup_plan(TaskType::multi_hop);
  CHECK(mh.compose == ComposeOp::NeuralSynth);
  CHECK(mh.pipeline == std::vector<Stage>{Stage::SplitDelta, Stage::MapPeek, Stage::Filter,
                                          Stage::MapOracle, Stage::Synth});
  for (auto t : all_tasks) {
    const auto row = lookup_plan(t);
    REQUIRE_FALSE(row.pipeline.empty());
    CHECK((row.pipeline.front() == Stage::Split || row.pipeline.front() == Stage::SplitDelta));
    CHECK(parse_task(to_string(t)) == t);
  }
  CHECK(pipeline_prunes(lookup_plan(TaskType::search).pipeline));
  CHECK_FALSE(pipeline_prunes(pw.pipeline));
  CHECK_FALSE(parse_task("nonsense"));
}

TEST_CASE("leaf prompt = header + chunk") {
  const auto chunk = numbered(50);
  const auto p = leaf_prompt(chunk, TaskType::aggregate);
  CHECK(p.size() == header_tokens(leaf_header(TaskType::aggregate)) + 50);
  CHECK(p.text().rfind("count categories: ", 0) == 0);
  for (auto t : all_tasks)
    CHECK(leaf_prompt(chunk, t).size() == header_tokens(leaf_header(t)) + chunk.size());
  CHECK(max_leaf_header_tokens() >= header_tokens(leaf_header(TaskType::classify)));
}
