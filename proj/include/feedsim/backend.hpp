#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "feedsim/prompts.hpp"

namespace feedsim::gen {

struct PostChoice {
  int headline_index = 0;  ///< 1-based
  std::string text;
};

struct CommentChoice {
  PostId post_id = 0;
  int shown_index = 0;  ///< 1-based position in the prompt's timeline
  std::string text;
};

struct LikeDecisions {
  std::vector<bool> liked;  ///< one per shown post, in prompt order
  std::size_t missing = 0;  ///< entries absent from the answer, counted as "no"
};

struct EnrichText {
  std::string text;
};

using ParsedResponse = std::variant<PostChoice, CommentChoice, LikeDecisions, EnrichText>;

struct BackendResponse {
  std::string raw_text;
  ParsedResponse parsed;
  double latency_ms = 0;
  int attempts = 1;
};

struct RawReply {
  std::string text;
  double latency_ms = 0;
};

/// A text generator. Implementations must tolerate concurrent calls.
class Backend {
 public:
  virtual ~Backend() = default;
  /// `user_message` is the request's rendered prompt, possibly followed by a
  /// format reminder. Throws BackendError on failure.
  virtual RawReply generate(const GenerationRequest& request, const std::string& user_message) = 0;
  virtual std::string name() const = 0;
};

/// "CHOICE: <int>" line then "TEXT: <message>" (the message may span lines).
/// Returns nullopt unless the choice is within [1, options].
std::optional<std::pair<int, std::string>> parse_choice(std::string_view raw, std::size_t options);

/// "LIKE <i>: yes|no" lines. Entry i-1 holds the decision for message i;
/// absent or out-of-range lines leave nullopt.
std::vector<std::optional<bool>> parse_likes(std::string_view raw, std::size_t count);

/// Parses the raw text for the request's kind; nullopt when the text does not
/// follow the layout (a like batch with missing entries counts as malformed).
std::optional<ParsedResponse> parse_response(const GenerationRequest& request, std::string_view raw);

/// Sends the request and parses the answer. A malformed answer is retried once
/// with a format reminder. After that, missing like decisions become "no" and
/// any other malformed answer throws BackendError.
BackendResponse complete(Backend& backend, const GenerationRequest& request);

}  // namespace feedsim::gen
