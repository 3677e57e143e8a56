#include "feedsim/toxicity.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "json.hpp"

#include "feedsim/errors.hpp"
#include "feedsim/hash.hpp"

namespace feedsim::metrics {

using nlohmann::json;

LexiconScorer LexiconScorer::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open lexicon " + path.string());
  std::map<std::string, double> weights;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const std::string where = path.string() + " line " + std::to_string(line_no);
    if (tab == std::string::npos) throw LoadError(where + ": expected word<TAB>weight");
    double w = 0;
    try {
      w = std::stod(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw LoadError(where + ": weight is not a number");
    }
    if (!(w > 0 && w <= 1)) throw ValidationError(where + ": weight must lie in (0, 1]");
    weights[line.substr(0, tab)] = w;
  }
  return LexiconScorer(std::move(weights));
}

double LexiconScorer::score_one(const std::string& text) const {
  std::size_t words = 0;
  double hits = 0;
  std::string word;
  auto flush = [&] {
    if (word.empty()) return;
    ++words;
    if (const auto it = weights_.find(word); it != weights_.end()) hits += it->second;
    word.clear();
  };
  for (unsigned char c : text) {
    if (std::isalpha(c) || c == '\'') {
      word += static_cast<char>(std::tolower(c));
    } else {
      flush();
    }
  }
  flush();
  if (words == 0) return 0;
  return 1.0 - std::exp(-5.0 * hits / static_cast<double>(words));
}

std::vector<std::optional<double>> LexiconScorer::score(std::span<const std::string> texts) {
  std::vector<std::optional<double>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.emplace_back(score_one(t));
  return out;
}

namespace {

std::string key_from_env(const std::string& var) {
  const char* key = std::getenv(var.c_str());
  if (key == nullptr || *key == '\0') throw ConfigError("remote scorer needs an API key in $" + var);
  return key;
}

}  // namespace

PerspectiveScorer::PerspectiveScorer(PerspectiveConfig config)
    : PerspectiveScorer(config, key_from_env(config.api_key_env),
                        std::make_shared<gen::HttplibTransport>(config.base_url, config.timeout),
                        gen::real_sleeper()) {}

PerspectiveScorer::PerspectiveScorer(PerspectiveConfig config, std::string api_key,
                                     std::shared_ptr<gen::HttpTransport> transport, gen::Sleeper sleeper)
    : config_(std::move(config)),
      api_key_(std::move(api_key)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)) {
  if (config_.cache_path && std::filesystem::exists(*config_.cache_path)) {
    try {
      cache_ = json::parse(read_file(*config_.cache_path)).get<std::map<std::string, double>>();
    } catch (const json::exception& e) {
      throw LoadError("toxicity cache " + config_.cache_path->string() + ": " + e.what());
    }
  }
}

std::optional<double> PerspectiveScorer::request_one(const std::string& text) {
  const json body = {{"comment", {{"text", text}}},
                     {"languages", {"en"}},
                     {"requestedAttributes", {{"TOXICITY", json::object()}}},
                     {"doNotStore", true}};
  try {
    {
      std::lock_guard lock(mu_);
      ++requests_;
    }
    const auto r = gen::post_with_retry(*transport_, "/v1alpha1/comments:analyze?key=" + api_key_, body.dump(),
                                        {}, config_.retry, sleeper_);
    const double v =
        json::parse(r.body).at("attributeScores").at("TOXICITY").at("summaryScore").at("value").get<double>();
    if (!(v >= 0 && v <= 1)) return std::nullopt;
    return v;
  } catch (const BackendError&) {
    return std::nullopt;
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

std::vector<std::optional<double>> PerspectiveScorer::score(std::span<const std::string> texts) {
  std::vector<std::string> keys;
  std::vector<std::size_t> pending;
  {
    std::lock_guard lock(mu_);
    std::set<std::string> queued;
    for (std::size_t i = 0; i < texts.size(); ++i) {
      keys.push_back(sha256_hex(texts[i]));
      if (!cache_.count(keys.back()) && queued.insert(keys.back()).second) pending.push_back(i);
    }
  }
  const std::size_t width = std::max<std::size_t>(1, config_.max_in_flight);
  for (std::size_t start = 0; start < pending.size(); start += width) {
    std::vector<std::pair<std::size_t, std::future<std::optional<double>>>> batch;
    for (std::size_t j = start; j < std::min(pending.size(), start + width); ++j) {
      const std::size_t i = pending[j];
      batch.emplace_back(i, std::async(std::launch::async, [this, &texts, i] { return request_one(texts[i]); }));
    }
    for (auto& [i, f] : batch) {
      if (const auto v = f.get()) {
        std::lock_guard lock(mu_);
        cache_[keys[i]] = *v;
      }
    }
  }
  std::vector<std::optional<double>> out;
  std::lock_guard lock(mu_);
  for (const auto& k : keys) {
    const auto it = cache_.find(k);
    out.push_back(it == cache_.end() ? std::nullopt : std::optional<double>(it->second));
  }
  return out;
}

void PerspectiveScorer::save_cache() const {
  if (!config_.cache_path) return;
  std::lock_guard lock(mu_);
  write_file(*config_.cache_path, json(cache_).dump(2) + "\n");
}

std::size_t PerspectiveScorer::cache_size() const {
  std::lock_guard lock(mu_);
  return cache_.size();
}

ToxicityResult toxicity(std::span<const std::string> texts, ToxicityScorer& scorer) {
  std::map<std::string, std::size_t> slot;
  std::vector<std::string> distinct;
  for (const auto& t : texts) {
    if (slot.emplace(t, distinct.size()).second) distinct.push_back(t);
  }
  const auto scored = scorer.score(distinct);
  if (scored.size() != distinct.size()) throw BackendError("scorer returned the wrong number of scores");

  ToxicityResult result;
  double sum = 0;
  std::size_t n = 0;
  for (const auto& t : texts) {
    auto s = scored[slot.at(t)];
    if (s && !(*s >= 0 && *s <= 1)) throw ValidationError("toxicity score outside [0, 1]");
    if (s) {
      sum += *s;
      ++n;
    }
    result.scores.push_back(s);
  }
  if (n > 0) result.mean = sum / static_cast<double>(n);
  result.coverage = texts.empty() ? 1.0 : static_cast<double>(n) / static_cast<double>(texts.size());
  return result;
}

}  // namespace feedsim::metrics
