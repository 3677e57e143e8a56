#include "feedsim/ranking.hpp"

#include <algorithm>
#include <cctype>

#include "feedsim/errors.hpp"

namespace feedsim::feed {
namespace {

struct Scored {
  std::size_t score;
  std::int64_t step;
  PostId id;
};

bool better(const Scored& a, const Scored& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.step != b.step) return a.step > b.step;
  return a.id > b.id;
}

std::size_t score_of(Algorithm algorithm, const Post& post, const PlatformState& state) {
  return algorithm == Algorithm::Bridging ? bridging_score(post, state) : engagement_score(post, state);
}

std::vector<PostId> top_k(std::vector<Scored>& scored, std::size_t k) {
  const auto keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), better);
  std::vector<PostId> out;
  out.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) out.push_back(scored[i].id);
  return out;
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Follow: return "Follow";
    case Algorithm::Global: return "Global";
    case Algorithm::Bridging: return "Bridging";
  }
  return "Follow";
}

Algorithm parse_algorithm(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "follow") return Algorithm::Follow;
  if (lower == "global") return Algorithm::Global;
  if (lower == "bridging") return Algorithm::Bridging;
  throw ConfigError("unknown platform '" + std::string(text) + "' (expected follow, global or bridging)");
}

std::size_t engagement_score(const Post& post, const PlatformState& state) {
  return state.like_count(post.id) + state.comment_count(post.id);
}

std::size_t bridging_score(const Post& post, const PlatformState& state) {
  return state.cross_like_count(post.id);
}

std::vector<PostId> rank_timeline(Algorithm algorithm, AgentId viewer, const PlatformState& state,
                                  std::size_t k) {
  if (k == 0) throw ConfigError("timeline size must be at least 1");
  std::vector<Scored> scored;
  if (algorithm == Algorithm::Follow) {
    const auto* g = state.graph();
    if (g == nullptr) throw ConfigError("the follow timeline needs a follow graph");
    for (AgentId followee : g->followees(viewer)) {
      if (followee == viewer) continue;
      for (PostId id : state.posts_by(followee)) {
        const Post& p = state.post(id);
        scored.push_back({score_of(algorithm, p, state), p.created_step, p.id});
      }
    }
  } else {
    scored.reserve(state.posts().size());
    for (const Post& p : state.posts()) {
      if (p.author == viewer) continue;
      scored.push_back({score_of(algorithm, p, state), p.created_step, p.id});
    }
  }
  return top_k(scored, k);
}

std::vector<PostId> rank_all(Algorithm algorithm, const PlatformState& state, std::size_t k) {
  std::vector<Scored> scored;
  for (const Post& p : state.posts()) scored.push_back({score_of(algorithm, p, state), p.created_step, p.id});
  return top_k(scored, k);
}

}  // namespace feedsim::feed
