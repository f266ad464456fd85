#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "sciret/bursts.hpp"
#include "sciret/keyphrase.hpp"

namespace sciret {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Keyphrase dump: one record per phrase.

inline void write_keyphrase_dump(std::ostream& out, const std::vector<KeyphraseSet>& sets) {
  for (const auto& set : sets)
    for (const auto& p : set.phrases)
      out << json{{"article_id", set.article_id},
                  {"method", method_name(set.method)},
                  {"lemma_form", p.lemma_form},
                  {"surface_form", p.surface_form},
                  {"rank", p.rank}}
                 .dump()
          << '\n';
}

// Records are regrouped per (article, method) in file order.
inline std::vector<KeyphraseSet> read_keyphrase_dump(std::istream& in) {
  std::map<std::pair<std::string, Method>, KeyphraseSet> sets;
  std::vector<std::pair<std::string, Method>> order;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    const auto j = json::parse(line);
    const auto key = std::make_pair(j.at("article_id").get<std::string>(), parse_method(j.at("method").get<std::string>()));
    auto [it, inserted] = sets.try_emplace(key);
    if (inserted) {
      it->second.article_id = key.first;
      it->second.method = key.second;
      order.push_back(key);
    }
    it->second.phrases.push_back(
        {j.at("lemma_form").get<std::string>(), j.at("surface_form").get<std::string>(), j.at("rank").get<double>()});
  }
  std::vector<KeyphraseSet> out;
  for (const auto& key : order) {
    auto& set = sets.at(key);
    for (const auto& p : set.phrases) set.total_rank += p.rank;
    out.push_back(std::move(set));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Score dump: one record per (mention, method).

struct ScoreRecord {
  std::string mention_id;
  std::string article_id;
  Platform platform;
  Method method = Method::TextRank;
  double value = 0.0;
};

inline void write_score_dump(std::ostream& out, const std::vector<ScoreRecord>& records) {
  for (const auto& r : records)
    out << json{{"mention_id", r.mention_id},
                {"article_id", r.article_id},
                {"platform", r.platform.name()},
                {"method", method_name(r.method)},
                {"value", r.value}}
               .dump()
        << '\n';
}

inline std::vector<ScoreRecord> read_score_dump(std::istream& in) {
  std::vector<ScoreRecord> out;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    const auto j = json::parse(line);
    out.push_back({j.at("mention_id").get<std::string>(), j.at("article_id").get<std::string>(),
                   Platform::parse(j.at("platform").get<std::string>()), parse_method(j.at("method").get<std::string>()),
                   j.at("value").get<double>()});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Burst dump: one record per burst (per method when scores are attached).

inline std::string group_id(const std::string& article_id, int position) {
  return article_id + "#" + std::to_string(position);
}

inline void write_burst_dump(std::ostream& out, const std::vector<BurstSequence>& sequences,
                             std::optional<Method> method = std::nullopt) {
  for (const auto& seq : sequences)
    for (const auto& g : seq.groups)
      for (const auto& b : g.bursts) {
        json j{{"article_id", b.article_id},
               {"platform", b.platform.name()},
               {"start_day", format_date(b.start_day)},
               {"end_day", format_date(b.end_day)},
               {"peak_day", format_date(b.peak_day)},
               {"size", b.size},
               {"score", b.score ? json(*b.score) : json(nullptr)},
               {"sequence_position", b.position ? json(*b.position) : json(nullptr)},
               {"group_id", b.position ? json(group_id(b.article_id, *b.position)) : json(nullptr)},
               {"cooccurring", g.cooccurring()},
               {"mention_ids", b.mention_ids}};
        if (method) j["method"] = method_name(*method);
        out << j.dump() << '\n';
      }
}

// Rebuilds sequences from a burst dump, keeping only records of `method` when
// the dump carries methods.
inline std::vector<BurstSequence> read_burst_dump(std::istream& in, std::optional<Method> method = std::nullopt) {
  std::map<std::string, std::map<int, BurstGroup>> articles;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    const auto j = json::parse(line);
    if (method && j.contains("method") && parse_method(j.at("method").get<std::string>()) != *method) continue;
    Burst b;
    b.article_id = j.at("article_id").get<std::string>();
    b.platform = Platform::parse(j.at("platform").get<std::string>());
    b.start_day = *parse_date(j.at("start_day").get<std::string>());
    b.end_day = *parse_date(j.at("end_day").get<std::string>());
    b.peak_day = *parse_date(j.at("peak_day").get<std::string>());
    b.size = j.at("size").get<std::size_t>();
    if (!j.at("score").is_null()) b.score = j.at("score").get<double>();
    if (!j.at("sequence_position").is_null()) b.position = j.at("sequence_position").get<int>();
    b.mention_ids = j.value("mention_ids", std::vector<std::string>{});
    auto& g = articles[b.article_id][b.position.value_or(0)];
    if (g.bursts.empty() || b.start_day < g.anchor_day) g.anchor_day = b.start_day;
    g.platforms.insert(b.platform);
    g.bursts.push_back(std::move(b));
  }
  std::vector<BurstSequence> out;
  for (auto& [id, groups] : articles) {
    BurstSequence seq{id, {}};
    for (auto& [pos, g] : groups) seq.groups.push_back(std::move(g));
    out.push_back(std::move(seq));
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV helpers

inline std::string csv_number(double v, int precision = 6) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

inline std::string csv_number(const std::optional<double>& v, int precision = 6) {
  return v ? csv_number(*v, precision) : std::string();
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace sciret
