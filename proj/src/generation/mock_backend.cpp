#include "feedsim/mock_backend.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "feedsim/errors.hpp"
#include "feedsim/length.hpp"
#include "feedsim/rng.hpp"

namespace feedsim::gen {
namespace {

constexpr std::array<std::string_view, 48> kPlainWords = {
    "people", "really", "think",   "this",    "news",    "today",   "country", "about",  "again",  "honestly",
    "every",  "time",   "story",   "never",   "just",    "believe", "right",   "always", "still",  "know",
    "folks",  "matter", "world",   "seems",   "change",  "read",   "should",  "maybe",  "state",  "local",
    "school", "family", "summer",  "health",  "season",  "public",  "point",   "going",  "make",   "look",
    "well",   "here",   "another", "week",    "whole",   "nothing", "care",    "sense"};

constexpr std::array<std::string_view, 16> kHostileWords = {
    "idiot", "stupid", "moron",  "pathetic", "liar",   "clown",      "disgusting", "garbage",
    "loser", "fool",   "ignorant", "crap",  "damn",   "brainwashed", "hypocrite",  "traitor"};

constexpr std::array<std::string_view, 12> kFirstNames = {"Alex",  "Jordan", "Taylor", "Morgan", "Casey", "Riley",
                                                           "Jamie", "Avery",  "Quinn",  "Drew",   "Parker", "Reese"};
constexpr std::array<std::string_view, 12> kSurnames = {"Miller", "Johnson", "Garcia", "Brown",  "Davis", "Lopez",
                                                         "Wilson", "Moore",   "Clark",  "Hughes", "Reed",  "Foster"};
constexpr std::array<std::string_view, 10> kTraits = {
    "enjoys weekend barbecues", "follows college football", "volunteers at a food bank",
    "keeps a vegetable garden", "plays pickup basketball",  "reads mystery novels",
    "is a devoted dog owner",   "likes to fix old cars",    "goes to church on Sundays",
    "listens to true-crime podcasts"};

template <std::size_t N>
std::string_view pick(const std::array<std::string_view, N>& bank, Rng& rng) {
  return bank[rng.below(N)];
}

std::string compose(int words, double hostile_rate, Rng& rng) {
  std::string out;
  for (int i = 0; i < words; ++i) {
    if (i) out += ' ';
    std::string w(rng.bernoulli(hostile_rate) ? pick(kHostileWords, rng) : pick(kPlainWords, rng));
    if (i == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
    out += w;
  }
  out += '.';
  return out;
}

double hostile_rate(const MockPolicyParams& params, double dp) {
  return std::clamp(params.toxic_base + params.toxic_slope * std::abs(dp) / 2.0, 0.0, 1.0);
}

bool agrees(Party viewer, Party author) { return viewer == author; }

}  // namespace

ParsedResponse mock_policy(const GenerationRequest& request, const MockPolicyParams& params) {
  Rng rng(derive_seed(request.seed, "mock", static_cast<std::uint64_t>(request.kind)));
  switch (request.kind) {
    case PromptKind::FirstPost: {
      if (request.stories.empty()) throw BackendError("first-post request without stories");
      int index = 1;
      for (std::size_t i = 0; i < request.stories.size(); ++i) {
        const auto& diet = request.viewer.news_sources;
        if (std::find(diet.begin(), diet.end(), request.stories[i].source) != diet.end()) {
          index = static_cast<int>(i) + 1;
          break;
        }
      }
      const int words = 10 + static_cast<int>(rng.below(41));
      return PostChoice{index, compose(words, params.toxic_base, rng)};
    }
    case PromptKind::Comment: {
      if (request.shown.empty()) throw BackendError("comment request without a timeline");
      const bool conflict = rng.bernoulli(params.q_conflict);
      std::size_t best = 0;
      double best_dp = std::abs(request.viewer.partisanship - request.shown[0].author_partisanship);
      for (std::size_t i = 1; i < request.shown.size(); ++i) {
        const double dp = std::abs(request.viewer.partisanship - request.shown[i].author_partisanship);
        if (conflict ? dp > best_dp : dp < best_dp) {
          best = i;
          best_dp = dp;
        }
      }
      const int words = request.target_words.value_or(sample_message_length(rng));
      return CommentChoice{request.shown[best].id, static_cast<int>(best) + 1,
                           compose(words, hostile_rate(params, best_dp), rng)};
    }
    case PromptKind::LikeBatch: {
      LikeDecisions d;
      for (const auto& post : request.shown) {
        const double p = agrees(request.viewer.party, post.author_party) ? params.p_agree : params.p_cross;
        d.liked.push_back(rng.bernoulli(p));
      }
      return d;
    }
    case PromptKind::Enrich: {
      Rng named(derive_seed(request.seed, request.persona_text));
      std::string text = "Name: " + std::string(pick(kFirstNames, named)) + " " + std::string(pick(kSurnames, named)) +
                         ". Traits: " + std::string(pick(kTraits, named));
      const auto second = pick(kTraits, named);
      if (text.find(second) == std::string::npos) text += "; " + std::string(second);
      return EnrichText{text + "."};
    }
  }
  throw BackendError("unknown prompt kind");
}

std::string format_response(const ParsedResponse& parsed) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PostChoice>) {
          return "CHOICE: " + std::to_string(v.headline_index) + "\nTEXT: " + v.text;
        } else if constexpr (std::is_same_v<T, CommentChoice>) {
          return "CHOICE: " + std::to_string(v.shown_index) + "\nTEXT: " + v.text;
        } else if constexpr (std::is_same_v<T, LikeDecisions>) {
          std::string out;
          for (std::size_t i = 0; i < v.liked.size(); ++i) {
            out += "LIKE " + std::to_string(i + 1) + ": " + (v.liked[i] ? "yes" : "no") + "\n";
          }
          return out;
        } else {
          return v.text;
        }
      },
      parsed);
}

RawReply MockBackend::generate(const GenerationRequest& request, const std::string&) {
  return {format_response(mock_policy(request, params_)), 0.0};
}

}  // namespace feedsim::gen
