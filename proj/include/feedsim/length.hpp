#pragma once

#include "feedsim/rng.hpp"

namespace feedsim::gen {

/// Three-parameter log-normal fitted to message word counts:
/// X = location + scale * exp(shape * Z), Z standard normal.
struct LengthDistribution {
  double shape = 0.8066;
  double location = 0.2178;
  double scale = 10.69;

  double median() const { return location + scale; }
};

inline constexpr int kMinWords = 3;
inline constexpr int kMaxWords = 60;

/// One unrounded, unclamped draw.
double sample_message_length_raw(Rng& rng, const LengthDistribution& dist = {});
/// Rounded to the nearest integer and clamped to [kMinWords, kMaxWords].
int sample_message_length(Rng& rng, const LengthDistribution& dist = {});

}  // namespace feedsim::gen
