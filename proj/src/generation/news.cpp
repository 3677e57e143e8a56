#include "feedsim/news.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <utility>

#include "json.hpp"

#include "feedsim/errors.hpp"

namespace feedsim::gen {
namespace {

constexpr std::array<std::pair<std::string_view, std::string_view>, 20> kOutlets = {{
    {"abc", "ABC News"},
    {"ap", "The Associated Press"},
    {"breitbart", "Breitbart"},
    {"cbs", "CBS News"},
    {"cnn", "CNN"},
    {"fox", "Fox News"},
    {"guardian", "The Guardian"},
    {"huffpost", "HuffPost"},
    {"msnbc", "MSNBC"},
    {"nbc", "NBC News"},
    {"npr", "NPR"},
    {"nyt", "The New York Times"},
    {"politico", "Politico"},
    {"reuters", "Reuters"},
    {"usatoday", "USA Today"},
    {"wapo", "The Washington Post"},
    {"wsj", "The Wall Street Journal"},
    {"newsmax", "Newsmax"},
    {"dailywire", "The Daily Wire"},
    {"bbc", "BBC News"},
}};

const std::array<std::string_view, kOutlets.size()> kOutletIds = [] {
  std::array<std::string_view, kOutlets.size()> ids{};
  for (std::size_t i = 0; i < kOutlets.size(); ++i) ids[i] = kOutlets[i].first;
  return ids;
}();

std::string required_string(const nlohmann::json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string()) throw LoadError(where + ": missing string field '" + key + "'");
  return j[key].get<std::string>();
}

}  // namespace

std::span<const std::string_view> known_outlets() { return kOutletIds; }

bool is_known_outlet(std::string_view id) {
  return std::any_of(kOutlets.begin(), kOutlets.end(), [&](const auto& o) { return o.first == id; });
}

std::string_view outlet_display_name(std::string_view id) {
  for (const auto& [key, name] : kOutlets) {
    if (key == id) return name;
  }
  return id;
}

std::vector<NewsStory> parse_stories(std::istream& in, std::string_view source_name) {
  std::vector<NewsStory> stories;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = std::string(source_name) + " line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw LoadError(where + ": " + e.what());
    }
    NewsStory s{required_string(j, "id", where), required_string(j, "source", where),
                required_string(j, "headline", where), required_string(j, "summary", where),
                required_string(j, "date", where)};
    if (s.headline.empty()) throw ValidationError(where + ": empty headline");
    if (!is_known_outlet(s.source)) throw ValidationError(where + ": unknown outlet '" + s.source + "'");
    if (!seen.insert(s.id).second) throw ValidationError(where + ": duplicate story id '" + s.id + "'");
    stories.push_back(std::move(s));
  }
  return stories;
}

std::vector<NewsStory> load_stories(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open stories file " + path.string());
  return parse_stories(in, path.string());
}

StorySelection select_stories(std::span<const std::string> diet, std::span<const NewsStory> pool) {
  if (pool.size() < kStoriesPerPrompt) {
    throw ConfigError("story pool has " + std::to_string(pool.size()) + " stories, need at least " +
                      std::to_string(kStoriesPerPrompt));
  }
  StorySelection sel;
  std::vector<bool> taken(pool.size(), false);
  for (std::size_t i = 0; i < pool.size() && sel.stories.size() < kStoriesPerPrompt; ++i) {
    if (std::find(diet.begin(), diet.end(), pool[i].source) != diet.end()) {
      sel.stories.push_back(pool[i]);
      taken[i] = true;
    }
  }
  sel.from_diet = sel.stories.size();
  for (std::size_t i = 0; i < pool.size() && sel.stories.size() < kStoriesPerPrompt; ++i) {
    if (!taken[i]) sel.stories.push_back(pool[i]);
  }
  return sel;
}

}  // namespace feedsim::gen
