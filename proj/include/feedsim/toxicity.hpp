#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "feedsim/http.hpp"

namespace feedsim::metrics {

/// Scores texts in [0, 1]; an absent score means the text could not be rated.
class ToxicityScorer {
 public:
  virtual ~ToxicityScorer() = default;
  virtual std::vector<std::optional<double>> score(std::span<const std::string> texts) = 0;
  virtual std::string name() const = 0;
};

/// Offline word-list scorer: 1 - exp(-5 * r), where r is the summed weight of
/// listed words divided by the word count. Words are lowercase runs of
/// letters and apostrophes.
class LexiconScorer final : public ToxicityScorer {
 public:
  explicit LexiconScorer(std::map<std::string, double> weights) : weights_(std::move(weights)) {}
  /// "word<TAB>weight" lines; '#' starts a comment. Throws LoadError.
  static LexiconScorer load(const std::filesystem::path& path);

  double score_one(const std::string& text) const;
  std::vector<std::optional<double>> score(std::span<const std::string> texts) override;
  std::string name() const override { return "lexicon"; }
  std::size_t size() const { return weights_.size(); }

 private:
  std::map<std::string, double> weights_;
};

struct PerspectiveConfig {
  std::string base_url = "https://commentanalyzer.googleapis.com";
  std::string api_key_env = "PERSPECTIVE_API_KEY";
  std::chrono::milliseconds timeout{30000};
  gen::RetryPolicy retry;
  std::size_t max_in_flight = 4;
  /// JSON object mapping sha256(text) to score; read at start, rewritten by
  /// save_cache().
  std::optional<std::filesystem::path> cache_path;
};

/// Perspective-style analyze endpoint, attribute TOXICITY. Scores are cached
/// by text hash, so each distinct text is requested at most once.
class PerspectiveScorer final : public ToxicityScorer {
 public:
  /// Reads the key from config.api_key_env; throws ConfigError if unset.
  explicit PerspectiveScorer(PerspectiveConfig config);
  PerspectiveScorer(PerspectiveConfig config, std::string api_key, std::shared_ptr<gen::HttpTransport> transport,
                    gen::Sleeper sleeper);

  std::vector<std::optional<double>> score(std::span<const std::string> texts) override;
  std::string name() const override { return "perspective"; }
  void save_cache() const;
  std::size_t cache_size() const;
  std::size_t requests_sent() const { return requests_; }

 private:
  std::optional<double> request_one(const std::string& text);

  PerspectiveConfig config_;
  std::string api_key_;
  std::shared_ptr<gen::HttpTransport> transport_;
  gen::Sleeper sleeper_;
  mutable std::mutex mu_;
  std::map<std::string, double> cache_;
  std::size_t requests_ = 0;
};

struct ToxicityResult {
  std::vector<std::optional<double>> scores;  ///< aligned with the input texts
  std::optional<double> mean;                 ///< over scored texts
  double coverage = 0;                        ///< scored / total; 1 for no texts
};

/// Scores each distinct text once and averages the per-text scores.
ToxicityResult toxicity(std::span<const std::string> texts, ToxicityScorer& scorer);

}  // namespace feedsim::metrics
