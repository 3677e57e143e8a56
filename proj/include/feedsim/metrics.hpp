#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "feedsim/platform.hpp"
#include "feedsim/types.hpp"

namespace feedsim::metrics {

enum class InteractionKind { Comment, Like };

struct Interaction {
  Party actor = Party::Independent;
  Party target = Party::Independent;  ///< party of the author of the post acted on
  InteractionKind kind = InteractionKind::Comment;
};

/// One entry per comment and per like, in state order.
std::vector<Interaction> interactions_from_state(const feed::PlatformState& state);

struct PartyCounts {
  std::size_t external = 0;  ///< actor and target in different major parties
  std::size_t internal = 0;  ///< same major party
  std::size_t excluded = 0;  ///< an Independent on either side
  bool operator==(const PartyCounts&) const = default;
};

PartyCounts count_interactions(std::span<const Interaction> interactions, InteractionKind kind);

/// (E - I) / (E + I); absent when both are zero.
std::optional<double> ei_index(std::size_t external, std::size_t internal);
std::optional<double> ei_index(std::span<const Interaction> interactions, InteractionKind kind);

}  // namespace feedsim::metrics
