#include "feedsim/types.hpp"

#include <cmath>

#include "feedsim/errors.hpp"

namespace feedsim {

std::string_view to_string(Party party) {
  switch (party) {
    case Party::Democrat: return "Democrat";
    case Party::Republican: return "Republican";
    case Party::Independent: return "Independent";
  }
  return "Independent";
}

Party party_from_string(std::string_view text) {
  if (text == "Democrat" || text == "D") return Party::Democrat;
  if (text == "Republican" || text == "R") return Party::Republican;
  if (text == "Independent" || text == "I") return Party::Independent;
  throw ValidationError("unknown party label '" + std::string(text) + "'");
}

std::size_t ceil_fraction(double fraction, std::size_t n) {
  const double raw = fraction * static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(raw - 1e-9));
}

}  // namespace feedsim
