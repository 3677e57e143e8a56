#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace feedsim {

/// Index of an agent in the population (position in the persona list).
using AgentId = std::uint32_t;
/// Post ids start at 1 and increase in creation order.
using PostId = std::uint64_t;
using CommentId = std::uint64_t;

enum class Party { Democrat, Republican, Independent };

std::string_view to_string(Party party);
/// Accepts the full label ("Democrat") or the one-letter code ("D").
Party party_from_string(std::string_view text);

constexpr bool is_major(Party party) { return party != Party::Independent; }

/// Opposite major party; Independent maps to itself.
constexpr Party opposite(Party party) {
  switch (party) {
    case Party::Democrat: return Party::Republican;
    case Party::Republican: return Party::Democrat;
    default: return Party::Independent;
  }
}

/// ceil(fraction * n), tolerant of binary rounding (0.3 * 100 must give 30).
std::size_t ceil_fraction(double fraction, std::size_t n);

}  // namespace feedsim
