#include "feedsim/metrics.hpp"

namespace feedsim::metrics {

std::vector<Interaction> interactions_from_state(const feed::PlatformState& state) {
  std::vector<Interaction> out;
  out.reserve(state.comments().size() + state.likes().size());
  for (const auto& c : state.comments()) {
    out.push_back({state.party_of(c.author), state.party_of(state.post(c.post_id).author), InteractionKind::Comment});
  }
  for (const auto& l : state.likes()) {
    out.push_back({state.party_of(l.author), state.party_of(state.post(l.post_id).author), InteractionKind::Like});
  }
  return out;
}

PartyCounts count_interactions(std::span<const Interaction> interactions, InteractionKind kind) {
  PartyCounts c;
  for (const auto& i : interactions) {
    if (i.kind != kind) continue;
    if (!is_major(i.actor) || !is_major(i.target)) {
      ++c.excluded;
    } else if (i.actor == i.target) {
      ++c.internal;
    } else {
      ++c.external;
    }
  }
  return c;
}

std::optional<double> ei_index(std::size_t external, std::size_t internal) {
  if (external + internal == 0) return std::nullopt;
  return (static_cast<double>(external) - static_cast<double>(internal)) /
         static_cast<double>(external + internal);
}

std::optional<double> ei_index(std::span<const Interaction> interactions, InteractionKind kind) {
  const auto c = count_interactions(interactions, kind);
  return ei_index(c.external, c.internal);
}

}  // namespace feedsim::metrics
