#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "feedsim/types.hpp"

namespace feedsim::graph {

/// Directed follow graph. out_edges[i] lists the agents i follows, in the
/// order they were drawn.
class FollowGraph {
 public:
  FollowGraph() = default;
  /// Throws ValidationError on self-follows, duplicates or out-of-range ids.
  FollowGraph(std::vector<std::vector<AgentId>> out_edges, std::size_t out_degree, double homophily,
              std::uint64_t seed);

  std::size_t size() const { return out_edges_.size(); }
  std::size_t out_degree() const { return out_degree_; }
  double homophily() const { return homophily_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t edge_count() const;

  std::span<const AgentId> followees(AgentId agent) const { return out_edges_.at(agent); }
  bool follows(AgentId follower, AgentId followee) const;
  const std::vector<std::vector<AgentId>>& out_edges() const { return out_edges_; }

  /// Every agent follows every other agent.
  static FollowGraph complete(std::size_t n);

 private:
  std::vector<std::vector<AgentId>> out_edges_;
  std::vector<std::vector<AgentId>> sorted_;
  std::size_t out_degree_ = 0;
  double homophily_ = 0;
  std::uint64_t seed_ = 0;
};

/// 1 - d^H with d = |p_i - p_j| / 2.
double connection_weight(double p_i, double p_j, double homophily);

/// Each follower draws `out_degree` followees by weighted sampling without
/// replacement (weights from connection_weight, self excluded). When fewer
/// positive-weight candidates exist, the rest are drawn uniformly from the
/// zero-weight candidates.
///
/// Throws ConfigError when partisanship.size() <= out_degree.
FollowGraph generate_follow_graph(std::span<const double> partisanship, double homophily,
                                  std::size_t out_degree, std::uint64_t seed);

struct HomophilyStats {
  double mean_edge_dp = 0;  ///< mean |dP| over edges
  double baseline_dp = 0;   ///< mean |dP| over all ordered pairs
  std::optional<double> ei_edges;  ///< absent when no edge joins two major-party agents
  std::size_t cross_edges = 0;
  std::size_t same_edges = 0;
};

HomophilyStats graph_homophily_stats(const FollowGraph& g, std::span<const double> partisanship,
                                     std::span<const Party> parties);

/// Edge list: '#' header comment with n, out_degree, H and seed, then one
/// "follower followee" pair of agent ids per line in draw order.
void write_edge_list(std::ostream& out, const FollowGraph& g, std::span<const std::string> ids);
FollowGraph read_edge_list(std::istream& in, std::span<const std::string> ids);

}  // namespace feedsim::graph
