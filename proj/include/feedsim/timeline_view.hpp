#pragma once

#include <span>
#include <vector>

#include "feedsim/platform.hpp"
#include "feedsim/prompts.hpp"

namespace feedsim::gen {

/// Snapshot of ranked posts with their comments, in ranking order.
/// `partisanship` is indexed by agent.
std::vector<ShownPost> build_timeline_view(const feed::PlatformState& state, std::span<const PostId> ranked,
                                           std::span<const double> partisanship);

}  // namespace feedsim::gen
