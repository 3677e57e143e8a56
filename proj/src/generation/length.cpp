#include "feedsim/length.hpp"

#include <algorithm>
#include <cmath>

namespace feedsim::gen {

double sample_message_length_raw(Rng& rng, const LengthDistribution& dist) {
  return dist.location + dist.scale * std::exp(dist.shape * rng.normal());
}

int sample_message_length(Rng& rng, const LengthDistribution& dist) {
  const double x = std::round(sample_message_length_raw(rng, dist));
  return static_cast<int>(std::clamp(x, double(kMinWords), double(kMaxWords)));
}

}  // namespace feedsim::gen
