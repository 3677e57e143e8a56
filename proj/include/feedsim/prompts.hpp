#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "feedsim/news.hpp"
#include "feedsim/persona.hpp"
#include "feedsim/types.hpp"

namespace feedsim::gen {

enum class PromptKind { FirstPost, Comment, LikeBatch, Enrich };

std::string_view to_string(PromptKind kind);

// Prompt templates. {stories}, {timeline}, {length} and {format} are
// interpolation slots; everything else is sent as written.
inline constexpr std::string_view kFirstPostTemplate =
    "Here follows a list of headlines from the newspaper:\n"
    "\n"
    "{stories}\n"
    "\n"
    "Choose exactly one of these headlines to share on your social media feed based on your persona, "
    "and write a comment of 10-50 words about that one headline in the style of your personality. "
    "{format}";

inline constexpr std::string_view kCommentTemplate =
    "You are using a social media platform, and see the following message threads:\n"
    "\n"
    "{timeline}\n"
    "\n"
    "Choose exactly one of these posts / message threads that your persona is likely to react to "
    "emotionally, either because you strongly agree or because your strongly disagree. Engage in "
    "natural conversation by writing a response to this message in the style of your personality. "
    "You may use sarcasm or irony, swear, criticize, threat, lie, and engage in personal attacks. "
    "You can also bring up a related topic that the post made you think of. {length} {format}";

inline constexpr std::string_view kLikeTemplate =
    "You are using a social media platform, and see the following messages:\n"
    "\n"
    "{timeline}\n"
    "\n"
    "Based on your persona, decide if you want to react to each message. Your possible actions are "
    "'press like' and 'no action'. Only like messages that you endorse, and that you feel positive "
    "about. {format}";

inline constexpr std::string_view kEnrichTemplate =
    "You will get a description of a person. Your task is to add other plausible personality traits "
    "that fits the described person, such as hobbies, favorite sports teams, specific political "
    "opinions, or other personality attributes. Give the person a name and a surname. Respond with "
    "the new attributes. Use concise language and respond briefly. Only list the traits, without "
    "saying e.g. 'additional personality traits' or describing the task.\n"
    "\n"
    "Description:\n"
    "{persona}";

inline constexpr std::string_view kLengthSentence = "Your message should be {n} words long.";

inline constexpr std::string_view kChoiceFormatPost =
    "Answer in exactly this format and nothing else:\n"
    "CHOICE: <number of the headline>\n"
    "TEXT: <your message>";
inline constexpr std::string_view kChoiceFormatComment =
    "Answer in exactly this format and nothing else:\n"
    "CHOICE: <number of the message thread>\n"
    "TEXT: <your response>";
inline constexpr std::string_view kLikeFormat =
    "Answer with exactly one line per message and nothing else, in this format:\n"
    "LIKE <message number>: <yes or no>";
inline constexpr std::string_view kFormatReminder =
    "Your previous answer did not follow the required format. Answer again, following the "
    "format above exactly.";

/// At most this many comments are shown under a post, the most recent ones.
inline constexpr std::size_t kMaxCommentsShown = 5;

struct ShownComment {
  AgentId author = 0;
  Party author_party = Party::Independent;
  std::string text;
};

struct ShownPost {
  PostId id = 0;
  AgentId author = 0;
  Party author_party = Party::Independent;
  double author_partisanship = 0;
  std::string text;
  std::vector<ShownComment> comments;
};

/// What the acting agent is, for backends that decide without reading text.
struct ViewerContext {
  double partisanship = 0;
  Party party = Party::Independent;
  std::vector<std::string> news_sources;
};

struct GenerationRequest {
  PromptKind kind = PromptKind::FirstPost;
  std::string persona_text;
  std::string rendered_prompt;
  std::optional<int> target_words;
  std::uint64_t seed = 0;
  ViewerContext viewer;
  std::vector<NewsStory> stories;  ///< FirstPost: numbered 1..n in order
  std::vector<ShownPost> shown;    ///< Comment / LikeBatch: numbered 1..n in order
};

std::string render_story_list(std::span<const NewsStory> stories);
/// Numbered threads: each post followed by its most recent comments.
std::string render_threads(std::span<const ShownPost> shown);
/// Numbered posts without comments.
std::string render_messages(std::span<const ShownPost> shown);

/// The first-post prompt keeps its fixed 10-50 word instruction and carries
/// no sampled length. Throws ConfigError unless exactly kStoriesPerPrompt
/// stories are given.
GenerationRequest build_first_post_prompt(const persona::Persona& persona, std::span<const NewsStory> stories,
                                          std::uint64_t seed);
/// Throws ConfigError for an empty timeline or target_words < 1.
GenerationRequest build_comment_prompt(const persona::Persona& persona, std::span<const ShownPost> timeline,
                                       int target_words, std::uint64_t seed);
GenerationRequest build_like_prompt(const persona::Persona& persona, std::span<const ShownPost> timeline,
                                    std::uint64_t seed);
GenerationRequest build_enrich_prompt(const persona::Persona& persona, std::uint64_t seed);

}  // namespace feedsim::gen
