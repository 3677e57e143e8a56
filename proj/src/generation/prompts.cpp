#include "feedsim/prompts.hpp"

#include <algorithm>

#include "feedsim/errors.hpp"

namespace feedsim::gen {
namespace {

std::string fill(std::string_view tmpl, std::string_view slot, std::string_view value) {
  std::string out(tmpl);
  const auto pos = out.find(slot);
  if (pos != std::string::npos) out.replace(pos, slot.size(), value);
  return out;
}

ViewerContext viewer_of(const persona::Persona& p) {
  return {p.partisanship, p.party, p.news_sources};
}

}  // namespace

std::string_view to_string(PromptKind kind) {
  switch (kind) {
    case PromptKind::FirstPost: return "first_post";
    case PromptKind::Comment: return "comment";
    case PromptKind::LikeBatch: return "like_batch";
    case PromptKind::Enrich: return "enrich";
  }
  return "first_post";
}

std::string render_story_list(std::span<const NewsStory> stories) {
  std::string out;
  for (std::size_t i = 0; i < stories.size(); ++i) {
    if (i) out += "\n\n";
    out += std::to_string(i + 1) + ". " + std::string(outlet_display_name(stories[i].source)) + ": " +
           stories[i].headline + "\n" + stories[i].summary;
  }
  return out;
}

std::string render_threads(std::span<const ShownPost> shown) {
  std::string out;
  for (std::size_t i = 0; i < shown.size(); ++i) {
    if (i) out += "\n\n";
    out += "Thread " + std::to_string(i + 1) + ":\nPost: " + shown[i].text;
    const auto& cs = shown[i].comments;
    const std::size_t first = cs.size() > kMaxCommentsShown ? cs.size() - kMaxCommentsShown : 0;
    for (std::size_t c = first; c < cs.size(); ++c) out += "\n  Reply: " + cs[c].text;
  }
  return out;
}

std::string render_messages(std::span<const ShownPost> shown) {
  std::string out;
  for (std::size_t i = 0; i < shown.size(); ++i) {
    if (i) out += "\n\n";
    out += "Message " + std::to_string(i + 1) + ": " + shown[i].text;
  }
  return out;
}

GenerationRequest build_first_post_prompt(const persona::Persona& persona, std::span<const NewsStory> stories,
                                          std::uint64_t seed) {
  if (stories.size() != kStoriesPerPrompt) {
    throw ConfigError("a first-post prompt needs exactly " + std::to_string(kStoriesPerPrompt) + " stories, got " +
                      std::to_string(stories.size()));
  }
  GenerationRequest r;
  r.kind = PromptKind::FirstPost;
  r.persona_text = persona.persona_text;
  r.seed = seed;
  r.viewer = viewer_of(persona);
  r.stories.assign(stories.begin(), stories.end());
  r.rendered_prompt = fill(fill(kFirstPostTemplate, "{stories}", render_story_list(stories)), "{format}",
                           kChoiceFormatPost);
  return r;
}

GenerationRequest build_comment_prompt(const persona::Persona& persona, std::span<const ShownPost> timeline,
                                       int target_words, std::uint64_t seed) {
  if (timeline.empty()) throw ConfigError("comment prompt needs a nonempty timeline");
  if (target_words < 1) throw ConfigError("target length must be positive");
  GenerationRequest r;
  r.kind = PromptKind::Comment;
  r.persona_text = persona.persona_text;
  r.target_words = target_words;
  r.seed = seed;
  r.viewer = viewer_of(persona);
  r.shown.assign(timeline.begin(), timeline.end());
  std::string prompt = fill(kCommentTemplate, "{timeline}", render_threads(timeline));
  prompt = fill(prompt, "{length}", fill(kLengthSentence, "{n}", std::to_string(target_words)));
  r.rendered_prompt = fill(prompt, "{format}", kChoiceFormatComment);
  return r;
}

GenerationRequest build_like_prompt(const persona::Persona& persona, std::span<const ShownPost> timeline,
                                    std::uint64_t seed) {
  if (timeline.empty()) throw ConfigError("like prompt needs a nonempty timeline");
  GenerationRequest r;
  r.kind = PromptKind::LikeBatch;
  r.persona_text = persona.persona_text;
  r.seed = seed;
  r.viewer = viewer_of(persona);
  r.shown.assign(timeline.begin(), timeline.end());
  r.rendered_prompt =
      fill(fill(kLikeTemplate, "{timeline}", render_messages(timeline)), "{format}", kLikeFormat);
  return r;
}

GenerationRequest build_enrich_prompt(const persona::Persona& persona, std::uint64_t seed) {
  GenerationRequest r;
  r.kind = PromptKind::Enrich;
  r.persona_text = persona.persona_text;
  r.seed = seed;
  r.viewer = viewer_of(persona);
  r.rendered_prompt = fill(kEnrichTemplate, "{persona}", persona.persona_text);
  return r;
}

}  // namespace feedsim::gen
