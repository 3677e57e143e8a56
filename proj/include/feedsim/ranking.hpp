#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "feedsim/platform.hpp"

namespace feedsim::feed {

/// Timeline algorithms. Follow: followees' posts by engagement. Global: all
/// posts by engagement. Bridging: all posts by likes from the author's
/// opposing party.
enum class Algorithm { Follow, Global, Bridging };

std::string_view to_string(Algorithm algorithm);
/// Accepts "follow", "global", "bridging" (any case).
Algorithm parse_algorithm(std::string_view text);

/// Likes plus comments.
std::size_t engagement_score(const Post& post, const PlatformState& state);
/// Likes whose liker belongs to the major party opposite the author's.
/// Independent authors score 0; Independent likers never count.
std::size_t bridging_score(const Post& post, const PlatformState& state);

/// Up to k post ids for `viewer`, best first. Ties break by created_step
/// descending, then id descending. The viewer's own posts never appear.
/// Follow requires a graph on the state.
std::vector<PostId> rank_timeline(Algorithm algorithm, AgentId viewer, const PlatformState& state,
                                  std::size_t k);

/// Ranking without a viewer (no exclusions). Follow has no meaning without a
/// viewer and ranks by engagement over all posts, like Global.
std::vector<PostId> rank_all(Algorithm algorithm, const PlatformState& state, std::size_t k);

}  // namespace feedsim::feed
