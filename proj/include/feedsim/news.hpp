#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace feedsim::gen {

struct NewsStory {
  std::string id;
  std::string source;  ///< outlet identifier, e.g. "nyt"
  std::string headline;
  std::string summary;
  std::string date;  ///< YYYY-MM-DD
};

/// Number of stories offered in a first-post prompt.
inline constexpr std::size_t kStoriesPerPrompt = 15;

std::span<const std::string_view> known_outlets();
bool is_known_outlet(std::string_view id);
/// "nyt" -> "The New York Times". Unknown ids are returned unchanged.
std::string_view outlet_display_name(std::string_view id);

/// One JSON object per line with id, source, headline, summary, date.
/// Throws LoadError on malformed lines and ValidationError for an empty
/// headline, an unknown outlet or a duplicate id.
std::vector<NewsStory> parse_stories(std::istream& in, std::string_view source_name);
std::vector<NewsStory> load_stories(const std::filesystem::path& path);

struct StorySelection {
  std::vector<NewsStory> stories;
  std::size_t from_diet = 0;  ///< leading entries drawn from the persona's outlets
};

/// Picks kStoriesPerPrompt stories: the persona's outlets first (pool order),
/// padded from the rest of the pool. Throws ConfigError when the pool holds
/// fewer than kStoriesPerPrompt stories.
StorySelection select_stories(std::span<const std::string> diet, std::span<const NewsStory> pool);

}  // namespace feedsim::gen
