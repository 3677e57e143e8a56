#pragma once

#include <span>
#include <vector>

#include "feedsim/rng.hpp"
#include "feedsim/types.hpp"

namespace feedsim::engine {

/// Weighted selection of the next agent. draw() leaves the agent in the urn;
/// remove() takes it out for draws without replacement.
class Urn {
 public:
  /// Throws ConfigError for an empty or non-positive weight.
  explicit Urn(std::span<const double> weights);

  AgentId draw(Rng& rng) const;
  void remove(AgentId agent);
  bool contains(AgentId agent) const { return active_.at(agent); }
  std::size_t remaining() const { return remaining_; }
  bool empty() const { return remaining_ == 0; }
  double probability(AgentId agent) const;

 private:
  std::vector<double> weights_;
  std::vector<bool> active_;
  std::size_t remaining_ = 0;
};

}  // namespace feedsim::engine
