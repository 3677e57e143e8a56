#include "feedsim/report.hpp"

#include <cstdio>

#include "feedsim/errors.hpp"

namespace feedsim::metrics {

using nlohmann::json;

namespace {

std::optional<double> mean_of(const std::vector<std::optional<double>>& scores, std::size_t begin, std::size_t end) {
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t i = begin; i < end; ++i) {
    if (scores[i]) {
      sum += *scores[i];
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json pairs_json(const PartyCounts& c) {
  return {{"external", c.external}, {"internal", c.internal}, {"excluded", c.excluded}};
}

PartyCounts pairs_from(const json& j) {
  return {j.at("external").get<std::size_t>(), j.at("internal").get<std::size_t>(),
          j.at("excluded").get<std::size_t>()};
}

void check_unit(const json& j, const char* key, double lo, double hi, bool nullable,
                std::vector<std::string>& problems, const std::string& where) {
  if (!j.contains(key)) {
    problems.push_back(where + key + " is missing");
    return;
  }
  const auto& v = j[key];
  if (v.is_null()) {
    if (!nullable) problems.push_back(where + key + " must not be null");
    return;
  }
  if (!v.is_number()) {
    problems.push_back(where + key + " must be a number");
    return;
  }
  const double d = v.get<double>();
  if (d < lo || d > hi) problems.push_back(where + key + " is outside its range");
}

std::string fmt(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", *v);
  return buf;
}

}  // namespace

RunReport build_report(const feed::PlatformState& state, ToxicityScorer& scorer, const std::string& platform) {
  RunReport r;
  r.platform = platform;
  r.scorer = scorer.name();
  r.agents = state.agent_count();
  r.posts = state.posts().size();
  r.comments = state.comments().size();
  r.likes = state.likes().size();
  for (Party p : state.parties()) ++r.agents_by_party[std::string(to_string(p))];

  std::vector<std::string> texts;
  for (const auto& p : state.posts()) {
    texts.push_back(p.text);
    r.texts.push_back({"post", p.id, std::nullopt});
  }
  for (const auto& c : state.comments()) {
    texts.push_back(c.text);
    r.texts.push_back({"comment", c.id, std::nullopt});
  }
  const auto tox = toxicity(texts, scorer);
  for (std::size_t i = 0; i < texts.size(); ++i) r.texts[i].score = tox.scores[i];
  r.toxicity_mean = tox.mean;
  r.toxicity_coverage = tox.coverage;
  r.toxicity_posts = mean_of(tox.scores, 0, r.posts);
  r.toxicity_comments = mean_of(tox.scores, r.posts, texts.size());

  const auto interactions = interactions_from_state(state);
  r.comment_pairs = count_interactions(interactions, InteractionKind::Comment);
  r.like_pairs = count_interactions(interactions, InteractionKind::Like);
  r.ei_comments = ei_index(r.comment_pairs.external, r.comment_pairs.internal);
  r.ei_likes = ei_index(r.like_pairs.external, r.like_pairs.internal);
  return r;
}

json to_json(const RunReport& r) {
  json texts = json::array();
  for (const auto& t : r.texts) texts.push_back({{"kind", t.kind}, {"id", t.id}, {"toxicity", opt(t.score)}});
  return {{"schema", r.schema},
          {"platform", r.platform},
          {"scorer", r.scorer},
          {"toxicity",
           {{"mean", opt(r.toxicity_mean)},
            {"posts", opt(r.toxicity_posts)},
            {"comments", opt(r.toxicity_comments)},
            {"coverage", r.toxicity_coverage}}},
          {"ei_comments", opt(r.ei_comments)},
          {"ei_likes", opt(r.ei_likes)},
          {"pairs", {{"comments", pairs_json(r.comment_pairs)}, {"likes", pairs_json(r.like_pairs)}}},
          {"counts",
           {{"agents", r.agents},
            {"posts", r.posts},
            {"comments", r.comments},
            {"likes", r.likes},
            {"agents_by_party", r.agents_by_party}}},
          {"texts", texts}};
}

std::vector<std::string> validate_report_json(const json& j) {
  std::vector<std::string> problems;
  if (!j.is_object()) return {"report must be a JSON object"};
  if (j.value("schema", "") != kReportSchema) problems.push_back("schema must be " + std::string(kReportSchema));
  for (const char* key : {"platform", "scorer"}) {
    if (!j.contains(key) || !j[key].is_string()) problems.push_back(std::string(key) + " must be a string");
  }
  if (!j.contains("toxicity") || !j["toxicity"].is_object()) {
    problems.push_back("toxicity must be an object");
  } else {
    const auto& t = j["toxicity"];
    for (const char* key : {"mean", "posts", "comments"}) check_unit(t, key, 0, 1, true, problems, "toxicity.");
    check_unit(t, "coverage", 0, 1, false, problems, "toxicity.");
  }
  check_unit(j, "ei_comments", -1, 1, true, problems, "");
  check_unit(j, "ei_likes", -1, 1, true, problems, "");
  try {
    const auto& c = j.at("counts");
    for (const char* key : {"agents", "posts", "comments", "likes"}) {
      if (!c.at(key).is_number_unsigned()) problems.push_back(std::string("counts.") + key + " must be a count");
    }
    pairs_from(j.at("pairs").at("comments"));
    pairs_from(j.at("pairs").at("likes"));
    const auto& texts = j.at("texts");
    if (!texts.is_array()) problems.push_back("texts must be an array");
    for (const auto& t : texts) {
      const auto kind = t.at("kind").get<std::string>();
      if (kind != "post" && kind != "comment") problems.push_back("texts[].kind must be post or comment");
      check_unit(t, "toxicity", 0, 1, true, problems, "texts[].");
    }
  } catch (const json::exception& e) {
    problems.push_back(std::string("malformed report: ") + e.what());
  }
  return problems;
}

RunReport report_from_json(const json& j) {
  const auto problems = validate_report_json(j);
  if (!problems.empty()) throw ValidationError("invalid report: " + problems.front());
  RunReport r;
  r.schema = j["schema"].get<std::string>();
  r.platform = j["platform"].get<std::string>();
  r.scorer = j["scorer"].get<std::string>();
  const auto& t = j["toxicity"];
  r.toxicity_mean = opt_from(t["mean"]);
  r.toxicity_posts = opt_from(t["posts"]);
  r.toxicity_comments = opt_from(t["comments"]);
  r.toxicity_coverage = t["coverage"].get<double>();
  r.ei_comments = opt_from(j["ei_comments"]);
  r.ei_likes = opt_from(j["ei_likes"]);
  r.comment_pairs = pairs_from(j["pairs"]["comments"]);
  r.like_pairs = pairs_from(j["pairs"]["likes"]);
  const auto& c = j["counts"];
  r.agents = c["agents"].get<std::size_t>();
  r.posts = c["posts"].get<std::size_t>();
  r.comments = c["comments"].get<std::size_t>();
  r.likes = c["likes"].get<std::size_t>();
  r.agents_by_party = c["agents_by_party"].get<std::map<std::string, std::size_t>>();
  for (const auto& x : j["texts"]) {
    r.texts.push_back({x["kind"].get<std::string>(), x["id"].get<std::uint64_t>(), opt_from(x["toxicity"])});
  }
  return r;
}

std::string format_table_row(const RunReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-10s %9s %13s %10s", r.platform.c_str(), fmt(r.toxicity_mean).c_str(),
                fmt(r.ei_comments).c_str(), fmt(r.ei_likes).c_str());
  return buf;
}

}  // namespace feedsim::metrics
