#include "feedsim/platform.hpp"

#include <algorithm>

#include "json.hpp"

#include "feedsim/errors.hpp"
#include "feedsim/hash.hpp"

namespace feedsim::feed {

PlatformState::PlatformState(std::vector<Party> party_of, std::shared_ptr<const graph::FollowGraph> graph)
    : party_of_(std::move(party_of)), graph_(std::move(graph)), posts_by_(party_of_.size()) {
  if (graph_ && graph_->size() != party_of_.size()) {
    throw ConfigError("follow graph size does not match population");
  }
}

void PlatformState::check_agent(AgentId agent, std::int64_t step) const {
  if (agent >= party_of_.size()) throw IntegrityError("unknown agent index " + std::to_string(agent), step);
}

const PlatformState::PostCounters& PlatformState::counters(PostId id) const {
  if (!has_post(id)) throw IntegrityError("unknown post id " + std::to_string(id));
  return counters_[id - 1];
}

const Post& PlatformState::post(PostId id) const {
  if (!has_post(id)) throw IntegrityError("unknown post id " + std::to_string(id));
  return posts_[id - 1];
}

bool PlatformState::has_liked(PostId post, AgentId author) const {
  const auto& l = counters(post).likers;
  return std::binary_search(l.begin(), l.end(), author);
}

const Post& PlatformState::add_post(AgentId author, std::string story_id, std::string text, std::int64_t step) {
  check_agent(author, step);
  const PostId id = posts_.size() + 1;
  posts_.push_back({id, author, std::move(story_id), std::move(text), step});
  counters_.emplace_back();
  posts_by_[author].push_back(id);
  return posts_.back();
}

const Comment& PlatformState::add_comment(PostId post, AgentId author, std::string text, std::int64_t step) {
  check_agent(author, step);
  if (!has_post(post)) throw IntegrityError("comment on unknown post " + std::to_string(post), step);
  const CommentId id = comments_.size() + 1;
  comments_.push_back({id, post, author, std::move(text), step});
  auto& c = counters_[post - 1];
  ++c.comments;
  c.comment_index.push_back(comments_.size() - 1);
  return comments_.back();
}

const Like& PlatformState::add_like(PostId post, AgentId author, std::int64_t step) {
  check_agent(author, step);
  if (!has_post(post)) throw IntegrityError("like on unknown post " + std::to_string(post), step);
  auto& c = counters_[post - 1];
  const auto pos = std::lower_bound(c.likers.begin(), c.likers.end(), author);
  if (pos != c.likers.end() && *pos == author) {
    throw IntegrityError("agent " + std::to_string(author) + " already liked post " + std::to_string(post), step);
  }
  c.likers.insert(pos, author);
  ++c.likes;
  const Party author_party = party_of_[posts_[post - 1].author];
  if (is_major(author_party) && party_of_[author] == opposite(author_party)) ++c.cross_likes;
  likes_.push_back({post, author, step});
  return likes_.back();
}

std::string PlatformState::content_hash() const {
  nlohmann::json doc = {{"posts", nlohmann::json::array()},
                        {"comments", nlohmann::json::array()},
                        {"likes", nlohmann::json::array()}};
  for (const auto& p : posts_) {
    doc["posts"].push_back({p.id, p.author, p.story_id, p.text, p.created_step});
  }
  for (const auto& c : comments_) {
    doc["comments"].push_back({c.id, c.post_id, c.author, c.text, c.created_step});
  }
  for (const auto& l : likes_) doc["likes"].push_back({l.post_id, l.author, l.created_step});
  return sha256_hex(doc.dump());
}

}  // namespace feedsim::feed
