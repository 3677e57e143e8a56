#include "feedsim/survey.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "feedsim/errors.hpp"

namespace feedsim::persona {
namespace {

constexpr std::array<std::string_view, 5> kMediaLevels = {
    "never", "once a week", "a few times a week", "once a day", "many times a day"};
constexpr std::array<std::string_view, 5> kDiscussLevels = {
    "never", "rarely", "sometimes", "often", "very often"};

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string format_number(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return std::to_string(static_cast<long long>(v));
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

struct RowContext {
  std::string_view source;
  std::size_t line;

  [[noreturn]] void load_fail(std::string_view field, const std::string& msg) const {
    throw LoadError(std::string(source) + " line " + std::to_string(line) + ", field " +
                    std::string(field) + ": " + msg);
  }
  [[noreturn]] void invalid(std::string_view field, const std::string& msg) const {
    throw ValidationError(std::string(source) + " line " + std::to_string(line) + ", field " +
                          std::string(field) + ": " + msg);
  }

  double number(std::string_view field, std::string_view text) const {
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
      load_fail(field, "not a number: '" + std::string(text) + "'");
    }
    return v;
  }

  double thermometer(std::string_view field, std::string_view text) const {
    const double v = number(field, text);
    if (v < 0 || v > 100) invalid(field, "thermometer " + std::string(text) + " outside [0,100]");
    return v;
  }
};

std::optional<std::string> optional_text(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return std::string(s);
}

std::vector<std::string> list_field(std::string_view s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  for (auto part : split(s, ';')) {
    part = trim(part);
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

SurveyRespondent parse_row(const std::vector<std::string_view>& f, const RowContext& ctx) {
  SurveyRespondent r;
  r.id = std::string(f[0]);
  if (r.id.empty()) ctx.load_fail("id", "missing required field");
  if (r.id.find_first_of(" \t") != std::string::npos) ctx.load_fail("id", "ids must not contain whitespace");

  if (!f[1].empty()) {
    const double age = ctx.number("age", f[1]);
    if (age != std::floor(age)) ctx.load_fail("age", "not an integer");
    if (age < 18) ctx.invalid("age", "respondents must be at least 18");
    r.age = static_cast<int>(age);
  }
  r.gender = optional_text(f[2]);
  r.race = optional_text(f[3]);
  r.education = optional_text(f[4]);
  r.income_class = optional_text(f[5]);
  r.religion = optional_text(f[6]);
  r.state = optional_text(f[7]);
  if (!f[8].empty()) r.therm_dem = ctx.thermometer("therm_dem", f[8]);
  if (!f[9].empty()) r.therm_rep = ctx.thermometer("therm_rep", f[9]);

  if (!f[10].empty()) {
    for (auto entry : split(f[10], ';')) {
      entry = trim(entry);
      if (entry.empty()) continue;
      const auto eq = entry.rfind('=');
      if (eq == std::string_view::npos || eq == 0) {
        ctx.load_fail("therm_figures", "expected name=value, got '" + std::string(entry) + "'");
      }
      r.therm_figures.push_back(
          {std::string(trim(entry.substr(0, eq))), ctx.thermometer("therm_figures", trim(entry.substr(eq + 1)))});
    }
  }
  r.vote_2020 = optional_text(f[11]);
  if (!f[12].empty()) {
    try {
      r.discuss_politics = parse_discuss_frequency(f[12]);
    } catch (const ConfigError& e) {
      ctx.load_fail("discuss_politics", e.what());
    }
  }
  if (f[13].empty()) ctx.load_fail("social_media_freq", "missing required field");
  try {
    r.social_media_freq = parse_media_frequency(f[13]);
  } catch (const ConfigError& e) {
    ctx.load_fail("social_media_freq", e.what());
  }
  r.news_sources = list_field(f[14]);
  r.nonpolitical_interests = list_field(f[15]);
  return r;
}

}  // namespace

std::string_view to_string(MediaFrequency freq) { return kMediaLevels[static_cast<std::size_t>(freq)]; }
std::string_view to_string(DiscussFrequency freq) { return kDiscussLevels[static_cast<std::size_t>(freq)]; }

MediaFrequency parse_media_frequency(std::string_view text) {
  text = trim(text);
  if (text == "rarely") return MediaFrequency::Never;
  for (std::size_t i = 0; i < kMediaLevels.size(); ++i) {
    if (text == kMediaLevels[i]) return static_cast<MediaFrequency>(i);
  }
  throw ConfigError("unknown social media frequency level '" + std::string(text) + "'");
}

DiscussFrequency parse_discuss_frequency(std::string_view text) {
  text = trim(text);
  for (std::size_t i = 0; i < kDiscussLevels.size(); ++i) {
    if (text == kDiscussLevels[i]) return static_cast<DiscussFrequency>(i);
  }
  throw ConfigError("unknown discuss_politics level '" + std::string(text) + "'");
}

std::vector<SurveyRespondent> parse_survey(std::istream& in, std::string_view source_name) {
  std::vector<SurveyRespondent> rows;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto fields = split(line, '\t');
    const RowContext ctx{source_name, line_no};
    if (!header_seen) {
      if (fields.size() != kSurveyColumns.size()) {
        throw LoadError(std::string(source_name) + " line " + std::to_string(line_no) +
                        ": header has " + std::to_string(fields.size()) + " columns, expected " +
                        std::to_string(kSurveyColumns.size()));
      }
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] != kSurveyColumns[i]) {
          ctx.load_fail(kSurveyColumns[i], "header column is '" + std::string(fields[i]) + "'");
        }
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != kSurveyColumns.size()) {
      const std::string_view field =
          fields.size() < kSurveyColumns.size() ? kSurveyColumns[fields.size()] : "(extra)";
      ctx.load_fail(field, "row has " + std::to_string(fields.size()) + " fields, expected " +
                               std::to_string(kSurveyColumns.size()));
    }
    SurveyRespondent r = parse_row(fields, ctx);
    if (!seen.insert(r.id).second) ctx.invalid("id", "duplicate id '" + r.id + "'");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SurveyRespondent> load_survey(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open survey file " + path.string());
  return parse_survey(in, path.string());
}

void write_survey(std::ostream& out, const std::vector<SurveyRespondent>& rows) {
  auto opt = [](const std::optional<std::string>& s) { return s.value_or(""); };
  auto join = [](const std::vector<std::string>& items) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ";" : "") + items[i];
    return s;
  };
  for (std::size_t i = 0; i < kSurveyColumns.size(); ++i) out << (i ? "\t" : "") << kSurveyColumns[i];
  out << '\n';
  for (const auto& r : rows) {
    std::string figures;
    for (std::size_t i = 0; i < r.therm_figures.size(); ++i) {
      figures += (i ? ";" : "") + r.therm_figures[i].name + "=" + format_number(r.therm_figures[i].value);
    }
    out << r.id << '\t' << (r.age ? std::to_string(*r.age) : "") << '\t' << opt(r.gender) << '\t'
        << opt(r.race) << '\t' << opt(r.education) << '\t' << opt(r.income_class) << '\t'
        << opt(r.religion) << '\t' << opt(r.state) << '\t'
        << (r.therm_dem ? format_number(*r.therm_dem) : "") << '\t'
        << (r.therm_rep ? format_number(*r.therm_rep) : "") << '\t' << figures << '\t'
        << opt(r.vote_2020) << '\t'
        << (r.discuss_politics ? std::string(to_string(*r.discuss_politics)) : "") << '\t'
        << to_string(r.social_media_freq) << '\t' << join(r.news_sources) << '\t'
        << join(r.nonpolitical_interests) << '\n';
  }
}

}  // namespace feedsim::persona
