#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "feedsim/follow_graph.hpp"
#include "feedsim/types.hpp"

namespace feedsim::feed {

struct Post {
  PostId id = 0;
  AgentId author = 0;
  std::string story_id;
  std::string text;
  std::int64_t created_step = 0;
};

struct Comment {
  CommentId id = 0;
  PostId post_id = 0;
  AgentId author = 0;
  std::string text;
  std::int64_t created_step = 0;
};

struct Like {
  PostId post_id = 0;
  AgentId author = 0;
  std::int64_t created_step = 0;
};

/// Append-only store of posts, comments and likes plus the follow graph.
///
/// Post and comment ids are assigned densely from 1. Per-post engagement
/// counters are maintained on insert; the rankers read them.
class PlatformState {
 public:
  PlatformState() = default;
  explicit PlatformState(std::vector<Party> party_of,
                         std::shared_ptr<const graph::FollowGraph> graph = nullptr);

  const Post& add_post(AgentId author, std::string story_id, std::string text, std::int64_t step);
  /// Throws IntegrityError if the post does not exist.
  const Comment& add_comment(PostId post, AgentId author, std::string text, std::int64_t step);
  /// Throws IntegrityError if the post does not exist or the pair already liked it.
  const Like& add_like(PostId post, AgentId author, std::int64_t step);

  bool has_post(PostId id) const { return id >= 1 && id <= posts_.size(); }
  const Post& post(PostId id) const;
  bool has_liked(PostId post, AgentId author) const;

  std::span<const Post> posts() const { return posts_; }
  std::span<const Comment> comments() const { return comments_; }
  std::span<const Like> likes() const { return likes_; }

  std::size_t like_count(PostId id) const { return counters(id).likes; }
  std::size_t comment_count(PostId id) const { return counters(id).comments; }
  /// Likes from the major party opposite the author's.
  std::size_t cross_like_count(PostId id) const { return counters(id).cross_likes; }
  /// Indices into comments(), in creation order.
  std::span<const std::size_t> comments_on(PostId id) const { return counters(id).comment_index; }
  std::span<const PostId> posts_by(AgentId agent) const { return posts_by_.at(agent); }

  std::size_t agent_count() const { return party_of_.size(); }
  Party party_of(AgentId agent) const { return party_of_.at(agent); }
  std::span<const Party> parties() const { return party_of_; }
  const graph::FollowGraph* graph() const { return graph_.get(); }
  void set_graph(std::shared_ptr<const graph::FollowGraph> graph) { graph_ = std::move(graph); }

  /// SHA-256 over a canonical serialization of posts, comments and likes.
  std::string content_hash() const;

 private:
  struct PostCounters {
    std::size_t likes = 0;
    std::size_t comments = 0;
    std::size_t cross_likes = 0;
    std::vector<std::size_t> comment_index;
    std::vector<AgentId> likers;  // sorted
  };
  const PostCounters& counters(PostId id) const;
  void check_agent(AgentId agent, std::int64_t step) const;

  std::vector<Party> party_of_;
  std::shared_ptr<const graph::FollowGraph> graph_;
  std::vector<Post> posts_;
  std::vector<Comment> comments_;
  std::vector<Like> likes_;
  std::vector<PostCounters> counters_;
  std::vector<std::vector<PostId>> posts_by_;
};

}  // namespace feedsim::feed
