#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "feedsim/metrics.hpp"
#include "feedsim/platform.hpp"
#include "feedsim/toxicity.hpp"

namespace feedsim::metrics {

inline constexpr const char* kReportSchema = "feedsim-report/1";

struct TextScore {
  std::string kind;  ///< "post" or "comment"
  std::uint64_t id = 0;
  std::optional<double> score;
  bool operator==(const TextScore&) const = default;
};

struct RunReport {
  std::string schema = kReportSchema;
  std::string platform;
  std::string scorer;
  std::optional<double> toxicity_mean;  ///< posts and comments together
  std::optional<double> toxicity_posts;
  std::optional<double> toxicity_comments;
  double toxicity_coverage = 1;
  std::optional<double> ei_comments;
  std::optional<double> ei_likes;
  PartyCounts comment_pairs;
  PartyCounts like_pairs;
  std::size_t agents = 0;
  std::size_t posts = 0;
  std::size_t comments = 0;
  std::size_t likes = 0;
  std::map<std::string, std::size_t> agents_by_party;
  std::vector<TextScore> texts;

  bool operator==(const RunReport&) const = default;
};

RunReport build_report(const feed::PlatformState& state, ToxicityScorer& scorer, const std::string& platform);

nlohmann::json to_json(const RunReport& report);
/// Throws ValidationError when the document does not follow the schema.
RunReport report_from_json(const nlohmann::json& j);
/// Schema problems in a report document; empty when valid.
std::vector<std::string> validate_report_json(const nlohmann::json& j);

/// One-row text table: platform, toxicity, E-I comments, E-I likes.
std::string format_table_row(const RunReport& report);

}  // namespace feedsim::metrics
