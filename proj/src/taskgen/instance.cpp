#include <map>

#include "lrlm/error.hpp"
#include "lrlm/taskgen.hpp"

namespace lrlm {

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::needle: return "needle";
    case Family::aggregate: return "aggregate";
    case Family::pairwise: return "pairwise";
    case Family::multihop: return "multihop";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view name) noexcept {
  for (auto f : {Family::needle, Family::aggregate, Family::pairwise, Family::multihop})
    if (to_string(f) == name) return f;
  return std::nullopt;
}

TaskType task_of(Family f) noexcept {
  switch (f) {
    case Family::needle: return TaskType::search;
    case Family::aggregate: return TaskType::aggregate;
    case Family::pairwise: return TaskType::pairwise;
    case Family::multihop: return TaskType::multi_hop;
  }
  return TaskType::aggregate;
}

std::string needle_truth(const Document& doc) {
  std::string out = "NONE";
  doc.for_each_token([&](std::string_view t) {
    if (t.substr(0, 7) != "needle:") return;
    if (auto eq = t.find('='); eq != std::string_view::npos) out = std::string(t.substr(eq + 1));
  });
  return out;
}

std::size_t needle_count(const Document& doc) {
  std::size_t c = 0;
  doc.for_each_token([&](std::string_view t) { c += t.substr(0, 7) == "needle:"; });
  return c;
}

CountMap aggregate_truth(const Document& doc) {
  CountMap out;
  doc.for_each_token([&](std::string_view t) {
    if (t.size() > 6 && t.substr(0, 6) == "label:") ++out[std::string(t.substr(6))];
  });
  return out;
}

std::vector<LabelRecord> item_labels(const Document& doc) {
  std::vector<LabelRecord> out;
  doc.for_each_token([&](std::string_view t) {
    if (t.substr(0, 5) != "item:") return;
    const auto rest = t.substr(5);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) return;
    out.push_back({std::stoull(std::string(rest.substr(0, colon))),
                   std::string(rest.substr(colon + 1))});
  });
  return out;
}

PairSet pairwise_truth(const Document& doc) {
  const auto recs = item_labels(doc);
  PairSet out;
  for (std::size_t i = 0; i < recs.size(); ++i)
    for (std::size_t j = 0; j < recs.size(); ++j)
      if (recs[i].id < recs[j].id && recs[i].label == recs[j].label)
        out.emplace(recs[i].id, recs[j].id);
  return out;
}

std::string multihop_truth(const std::vector<Document>& corpus, const Document& query) {
  std::map<std::pair<std::string, std::string>, std::string> facts;
  for (const auto& d : corpus)
    d.for_each_token([&](std::string_view t) {
      if (t.substr(0, 5) != "fact:") return;
      std::vector<std::string> f;
      std::size_t i = 0;
      for (;;) {
        auto c = t.find(':', i);
        f.emplace_back(t.substr(i, c == std::string_view::npos ? t.npos : c - i));
        if (c == std::string_view::npos) break;
        i = c + 1;
      }
      if (f.size() == 4) facts.emplace(std::make_pair(f[1], f[2]), f[3]);
    });
  std::string out = "NONE";
  query.for_each_token([&](std::string_view t) {
    if (t.substr(0, 2) != "q:") return;
    std::vector<std::string> q;
    std::size_t i = 0;
    for (;;) {
      auto c = t.find(':', i);
      q.emplace_back(t.substr(i, c == std::string_view::npos ? t.npos : c - i));
      if (c == std::string_view::npos) break;
      i = c + 1;
    }
    if (q.size() != 4) return;
    auto hop = facts.find({q[1], q[2]});
    if (hop == facts.end()) return;
    auto end = facts.find({hop->second, q[3]});
    if (end != facts.end()) out = end->second;
  });
  return out;
}

Answer typed_answer(Family family, const std::string& text) {
  switch (family) {
    case Family::aggregate: return parse_counts(text);
    case Family::pairwise: return parse_pairs(text);
    default: return text;
  }
}

std::string answer_text(const Answer& a) {
  if (const auto* s = std::get_if<std::string>(&a)) return *s;
  if (const auto* c = std::get_if<CountMap>(&a)) return format_counts(*c);
  return format_pairs(std::get<PairSet>(a));
}

nlohmann::json to_json(const TaskInstance& inst) {
  nlohmann::json j = {{"schema", std::string(instance_schema)},
                      {"family", std::string(to_string(inst.family))},
                      {"task", std::string(to_string(task_of(inst.family)))},
                      {"seed", inst.seed},
                      {"n", inst.n},
                      {"query", inst.query.text()}};
  if (inst.family == Family::multihop) {
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& d : inst.corpus) docs.push_back(d.text());
    j["corpus"] = docs;
  } else {
    j["doc"] = inst.doc.text();
  }
  if (const auto* c = std::get_if<CountMap>(&inst.truth)) {
    j["truth"] = *c;
  } else if (const auto* p = std::get_if<PairSet>(&inst.truth)) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [a, b] : *p) pairs.push_back({a, b});
    j["truth"] = pairs;
  } else {
    j["truth"] = std::get<std::string>(inst.truth);
  }
  return j;
}

TaskInstance instance_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != instance_schema)
      throw ConfigError("unsupported instance schema " + j.at("schema").get<std::string>());
    TaskInstance inst;
    const auto fam = parse_family(j.at("family").get<std::string>());
    if (!fam) throw ConfigError("unknown family " + j.at("family").get<std::string>());
    inst.family = *fam;
    inst.seed = j.at("seed").get<std::uint64_t>();
    inst.n = j.at("n").get<std::size_t>();
    inst.query = Document::from_text(j.at("query").get<std::string>());
    if (inst.family == Family::multihop) {
      for (const auto& d : j.at("corpus")) inst.corpus.push_back(Document::from_text(d.get<std::string>()));
      inst.doc = concat(inst.corpus);
    } else {
      inst.doc = Document::from_text(j.at("doc").get<std::string>());
    }
    const auto& t = j.at("truth");
    if (inst.family == Family::aggregate) {
      inst.truth = t.get<CountMap>();
    } else if (inst.family == Family::pairwise) {
      PairSet p;
      for (const auto& pr : t) p.emplace(pr.at(0).get<std::uint64_t>(), pr.at(1).get<std::uint64_t>());
      inst.truth = p;
    } else {
      inst.truth = t.get<std::string>();
    }
    if (inst.doc.size() != inst.n) throw ConfigError("instance token count does not match n");
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed instance: ") + e.what());
  }
}

}  // namespace lrlm
