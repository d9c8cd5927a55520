#include <algorithm>

#include "lrlm/error.hpp"
#include "lrlm/rng.hpp"
#include "lrlm/taskgen.hpp"

namespace lrlm {

const std::vector<std::string>& filler_vocabulary() {
  static const std::vector<std::string> words = {
      "amber",  "basalt", "cinder", "delta",  "ember",  "fjord",  "garnet", "harbor",
      "indigo", "juniper", "kelp",  "lichen", "meadow", "nectar", "opal",   "pebble",
      "quartz", "river",  "saffron", "tundra", "umber", "violet", "willow", "xylem",
      "yarrow", "zephyr", "alder",  "bramble", "cobalt", "dune",  "estuary", "fern"};
  return words;
}

namespace {

std::string join(const std::vector<std::string>& toks) {
  std::string out;
  std::size_t bytes = 0;
  for (const auto& t : toks) bytes += t.size() + 1;
  out.reserve(bytes);
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (i) out += ' ';
    out += toks[i];
  }
  return out;
}

const std::string& filler(Rng& rng) {
  const auto& v = filler_vocabulary();
  return v[rng.below(v.size())];
}

}  // namespace

TaskInstance gen_needle(std::size_t n, std::uint64_t seed) {
  if (n < 100) throw ConfigError("needle instances need n >= 100");
  Rng rng(derive_seed({seed, 0x4E45ULL}));
  const std::string key = "k" + std::to_string(rng.below(100000));
  const std::string value = "v" + std::to_string(rng.below(1000000));
  const std::size_t pos = rng.between(3, n - 2);

  std::vector<std::string> toks(n);
  toks[0] = "#search";
  for (std::size_t i = 1; i < n; ++i) toks[i] = filler(rng);
  for (std::size_t q = pos; q >= 3; q -= 2) toks[q - 2] = "key:" + key;
  toks[pos] = "needle:" + key + "=" + value;
  toks[pos + 1] = "key:" + key;

  TaskInstance inst;
  inst.family = Family::needle;
  inst.seed = seed;
  inst.n = n;
  inst.doc = Document::from_text(join(toks));
  inst.query = Document::from_text("find the value for key:" + key);
  inst.truth = value;
  return inst;
}

std::vector<std::string> category_names(std::size_t categories) {
  static const char* base[] = {"desc", "num", "loc", "hum", "enty", "abbr"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < categories; ++i)
    out.push_back(i < 6 ? base[i] : "cat" + std::to_string(i + 1));
  return out;
}

TaskInstance gen_aggregate(std::size_t n, std::size_t categories, std::uint64_t seed) {
  if (categories < 2) throw ConfigError("aggregate instances need >= 2 categories");
  if (n < 1) throw ConfigError("aggregate instances need n >= 1");
  Rng rng(derive_seed({seed, 0x4147ULL}));
  const auto names = category_names(categories);
  // Skewed so that desc is rarer than num.
  std::vector<std::uint64_t> weight(categories, 10);
  const std::uint64_t base_w[] = {20, 24, 18, 16, 14, 8};
  for (std::size_t i = 0; i < std::min<std::size_t>(categories, 6); ++i) weight[i] = base_w[i];
  std::uint64_t total_w = 0;
  for (auto w : weight) total_w += w;

  std::vector<std::string> toks;
  toks.reserve(n);
  toks.push_back("#aggregate");
  CountMap truth;
  std::size_t q = 0;
  while (n - toks.size() >= 100) {
    const std::size_t room = n - toks.size();
    const std::size_t len = room <= 162 ? room : rng.between(100, 162);
    std::uint64_t pick = rng.below(total_w);
    std::size_t c = 0;
    while (pick >= weight[c]) pick -= weight[c++];
    toks.push_back("\nQ" + std::to_string(++q));
    toks.push_back("label:" + names[c]);
    ++truth[names[c]];
    for (std::size_t i = 2; i < len; ++i) toks.push_back(filler(rng));
  }
  while (toks.size() < n) toks.push_back(filler(rng));

  TaskInstance inst;
  inst.family = Family::aggregate;
  inst.seed = seed;
  inst.n = n;
  inst.doc = Document::from_text(join(toks));
  inst.query = Document::from_text("which category is least common among the questions");
  inst.truth = truth;
  return inst;
}

TaskInstance gen_pairwise(std::size_t items, std::uint64_t seed, std::size_t labels) {
  if (items < 2) throw ConfigError("pairwise instances need >= 2 items");
  if (labels < 1) throw ConfigError("pairwise instances need >= 1 label");
  Rng rng(derive_seed({seed, 0x5041ULL}));
  std::vector<std::string> alphabet;
  for (std::size_t i = 0; i < labels; ++i)
    alphabet.push_back(i < 26 ? std::string(1, static_cast<char>('A' + i)) : "L" + std::to_string(i));

  std::vector<std::string> toks{"#pairwise"};
  std::vector<LabelRecord> recs;
  for (std::size_t i = 1; i <= items; ++i) {
    const auto& lab = alphabet[rng.below(alphabet.size())];
    toks.push_back("item:" + std::to_string(i) + ":" + lab);
    recs.push_back({i, lab});
    for (auto f = rng.below(4); f > 0; --f) toks.push_back(filler(rng));
  }
  PairSet truth;
  for (std::size_t i = 0; i < recs.size(); ++i)
    for (std::size_t j = i + 1; j < recs.size(); ++j)
      if (recs[i].label == recs[j].label) truth.emplace(recs[i].id, recs[j].id);

  TaskInstance inst;
  inst.family = Family::pairwise;
  inst.seed = seed;
  inst.n = toks.size();
  inst.doc = Document::from_text(join(toks));
  inst.query = Document::from_text("list all pairs of items sharing a label");
  inst.truth = truth;
  return inst;
}

TaskInstance gen_multihop(std::size_t docs, std::uint64_t seed, std::size_t relevant) {
  if (docs < 2) throw ConfigError("multihop instances need >= 2 documents");
  relevant = std::clamp<std::size_t>(relevant, 2, docs);
  Rng rng(derive_seed({seed, 0x4D48ULL}));
  const auto topic = rng.below(1000);
  const auto tag = [](std::uint64_t t) { return "topic:t" + std::to_string(t); };
  const std::string x = "e" + std::to_string(rng.below(100000));
  const std::string y = "org" + std::to_string(rng.below(100000));
  const std::string z = "city" + std::to_string(rng.below(100000));

  // Slots for the two hops and the extra same-topic documents.
  std::vector<std::size_t> order(docs);
  for (std::size_t i = 0; i < docs; ++i) order[i] = i;
  for (std::size_t i = docs; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<int> role(docs, 0);  // 0 distractor, 1 hop one, 2 hop two, 3 same topic
  role[order[0]] = 1;
  role[order[1]] = 2;
  for (std::size_t i = 2; i < relevant; ++i) role[order[i]] = 3;

  TaskInstance inst;
  inst.family = Family::multihop;
  inst.seed = seed;
  std::size_t total = 0;
  for (std::size_t d = 0; d < docs; ++d) {
    const std::size_t len = rng.between(100, 400);
    std::vector<std::string> toks;
    if (d == 0) toks.push_back("#multi_hop");
    std::uint64_t t = topic;
    if (role[d] == 0) {
      t = rng.below(999);
      if (t >= topic) ++t;
    }
    toks.push_back(tag(t));
    while (toks.size() < len) toks.push_back(filler(rng));
    const std::size_t at = rng.between(d == 0 ? 2 : 1, len - 1);
    const auto id = std::to_string(rng.below(100000));
    switch (role[d]) {
      case 1: toks[at] = "fact:" + x + ":employer:" + y; break;
      case 2: toks[at] = "fact:" + y + ":city:" + z; break;
      case 3: toks[at] = "fact:p" + id + ":hobby:h" + id; break;
      default: toks[at] = "fact:d" + id + ":employer:o" + id; break;
    }
    total += toks.size();
    inst.corpus.push_back(Document::from_text(join(toks)));
  }
  inst.doc = concat(inst.corpus);
  inst.n = total;
  inst.query = Document::from_text("q:" + x + ":employer:city " + tag(topic));
  inst.truth = z;
  return inst;
}

TaskInstance generate(Family family, std::size_t tokens, std::uint64_t seed) {
  switch (family) {
    case Family::needle: return gen_needle(tokens, seed);
    case Family::aggregate: return gen_aggregate(tokens, 6, seed);
    case Family::pairwise: return gen_pairwise(std::max<std::size_t>(2, tokens * 2 / 5), seed);
    case Family::multihop: return gen_multihop(std::max<std::size_t>(2, tokens / 250), seed);
  }
  throw ConfigError("unknown family");
}

}  // namespace lrlm
