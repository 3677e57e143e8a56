#pragma once

// Reference ranker and random states shared by the feed tests and the
// acceptance suite. Scores are recounted from the raw like and comment lists.

#include <algorithm>
#include <memory>
#include <tuple>
#include <vector>

#include "feedsim/platform.hpp"
#include "feedsim/ranking.hpp"
#include "feedsim/rng.hpp"

namespace oracle {

using namespace feedsim;

inline std::size_t score(feed::Algorithm a, const feed::Post& p, const feed::PlatformState& s) {
  std::size_t likes = 0, cross = 0, comments = 0;
  const Party author = s.parties()[p.author];
  for (const auto& l : s.likes()) {
    if (l.post_id != p.id) continue;
    ++likes;
    const Party liker = s.parties()[l.author];
    if ((author == Party::Democrat && liker == Party::Republican) ||
        (author == Party::Republican && liker == Party::Democrat)) {
      ++cross;
    }
  }
  for (const auto& c : s.comments()) comments += c.post_id == p.id;
  return a == feed::Algorithm::Bridging ? cross : likes + comments;
}

inline std::vector<PostId> rank(feed::Algorithm a, AgentId viewer, const feed::PlatformState& s, std::size_t k) {
  std::vector<std::tuple<std::size_t, std::int64_t, PostId>> rows;
  for (const auto& p : s.posts()) {
    if (p.author == viewer) continue;
    if (a == feed::Algorithm::Follow && !s.graph()->follows(viewer, p.author)) continue;
    rows.emplace_back(score(a, p, s), p.created_step, p.id);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x > y; });
  std::vector<PostId> out;
  for (std::size_t i = 0; i < rows.size() && i < k; ++i) out.push_back(std::get<2>(rows[i]));
  return out;
}

struct RandomState {
  feed::PlatformState state;
  std::size_t agents;
};

/// Up to 50 posts and up to 200 likes plus comments over 4..15 agents.
/// Steps are drawn from a small range so ties occur.
inline RandomState random_state(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = 4 + rng.below(12);
  std::vector<Party> parties;
  for (std::size_t i = 0; i < n; ++i) parties.push_back(static_cast<Party>(rng.below(3)));
  std::vector<std::vector<AgentId>> edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && rng.bernoulli(0.4)) edges[i].push_back(static_cast<AgentId>(j));
    }
  }
  auto graph = std::make_shared<const graph::FollowGraph>(std::move(edges), 0, 0, 0);
  feed::PlatformState s(parties, graph);
  const std::size_t posts = rng.below(51);
  for (std::size_t i = 0; i < posts; ++i) {
    s.add_post(static_cast<AgentId>(rng.below(n)), "s01", "p", static_cast<std::int64_t>(rng.below(10)));
  }
  if (posts > 0) {
    const std::size_t actions = rng.below(201);
    for (std::size_t i = 0; i < actions; ++i) {
      const PostId post = 1 + rng.below(posts);
      const auto agent = static_cast<AgentId>(rng.below(n));
      if (rng.bernoulli(0.5)) {
        if (!s.has_liked(post, agent)) s.add_like(post, agent, 100 + static_cast<std::int64_t>(i));
      } else {
        s.add_comment(post, agent, "c", 100 + static_cast<std::int64_t>(i));
      }
    }
  }
  return {std::move(s), n};
}

}  // namespace oracle
