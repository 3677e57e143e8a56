#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace feedsim::persona {

/// Self-reported social media use, lowest to highest.
enum class MediaFrequency { Never, OnceAWeek, FewTimesAWeek, OnceADay, ManyTimesADay };

/// How often the respondent discusses politics on social media.
enum class DiscussFrequency { Never, Rarely, Sometimes, Often, VeryOften };

std::string_view to_string(MediaFrequency freq);
std::string_view to_string(DiscussFrequency freq);
/// Throws ConfigError for unknown levels. "rarely" is accepted as Never.
MediaFrequency parse_media_frequency(std::string_view text);
DiscussFrequency parse_discuss_frequency(std::string_view text);

struct FigureRating {
  std::string name;
  double value = 0;
};

/// One survey row. Absent answers are std::nullopt or empty lists.
struct SurveyRespondent {
  std::string id;
  std::optional<int> age;
  std::optional<std::string> gender;
  std::optional<std::string> race;
  std::optional<std::string> education;
  std::optional<std::string> income_class;
  std::optional<std::string> religion;
  std::optional<std::string> state;
  std::optional<double> therm_dem;
  std::optional<double> therm_rep;
  std::vector<FigureRating> therm_figures;
  std::optional<std::string> vote_2020;
  std::optional<DiscussFrequency> discuss_politics;
  MediaFrequency social_media_freq = MediaFrequency::Never;
  std::vector<std::string> news_sources;
  std::vector<std::string> nonpolitical_interests;
};

/// Column order of the survey file. The header line must match exactly.
inline constexpr std::array<std::string_view, 16> kSurveyColumns = {
    "id",       "age",       "gender",        "race",           "education",
    "income_class", "religion", "state",      "therm_dem",      "therm_rep",
    "therm_figures", "vote_2020", "discuss_politics", "social_media_freq",
    "news_sources", "nonpolitical_interests"};

/// Reads a survey file (tab-separated, '#' comment lines, header row, empty
/// field = absent). An empty file yields no respondents.
///
/// Throws LoadError naming row and field for malformed rows, and
/// ValidationError for out-of-range values.
std::vector<SurveyRespondent> load_survey(const std::filesystem::path& path);
std::vector<SurveyRespondent> parse_survey(std::istream& in, std::string_view source_name);

/// Inverse of parse_survey (used for fixtures and round-trip tests).
void write_survey(std::ostream& out, const std::vector<SurveyRespondent>& rows);

}  // namespace feedsim::persona
