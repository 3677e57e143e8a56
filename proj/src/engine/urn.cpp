#include "feedsim/urn.hpp"

#include <cmath>

#include "feedsim/errors.hpp"

namespace feedsim::engine {

Urn::Urn(std::span<const double> weights) : weights_(weights.begin(), weights.end()), active_(weights.size(), true) {
  if (weights_.empty()) throw ConfigError("urn needs at least one agent");
  for (double w : weights_) {
    if (!(w > 0) || !std::isfinite(w)) throw ConfigError("urn weights must be positive and finite");
  }
  remaining_ = weights_.size();
}

AgentId Urn::draw(Rng& rng) const {
  if (remaining_ == 0) throw ConfigError("draw from an empty urn");
  double total = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (active_[i]) total += weights_[i];
  }
  double u = rng.uniform() * total;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (!active_[i]) continue;
    last = i;
    if (u < weights_[i]) return static_cast<AgentId>(i);
    u -= weights_[i];
  }
  return static_cast<AgentId>(last);
}

void Urn::remove(AgentId agent) {
  if (active_.at(agent)) {
    active_[agent] = false;
    --remaining_;
  }
}

double Urn::probability(AgentId agent) const {
  if (!active_.at(agent)) return 0;
  double total = 0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (active_[i]) total += weights_[i];
  }
  return weights_[agent] / total;
}

}  // namespace feedsim::engine
