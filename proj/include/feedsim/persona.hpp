#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "feedsim/survey.hpp"
#include "feedsim/types.hpp"

namespace feedsim::gen {
class Backend;
}

namespace feedsim::persona {

struct PersonaOptions {
  /// |P| at or below this is Independent.
  double independence_threshold = 0.1;
  /// Figure thermometers at or above `warm_cutoff` or at or below
  /// `cold_cutoff` are salient and get a sentence.
  double warm_cutoff = 70;
  double cold_cutoff = 30;
};

struct Persona {
  std::string id;
  std::string persona_text;
  double partisanship = 0;  ///< P in [-1, 1]
  Party party = Party::Independent;
  /// Set when a party thermometer was missing and P defaulted to 0.
  bool partisanship_imputed = false;
  double activity_rate = 1;
  std::vector<std::string> news_sources;
  bool enriched = false;
};

/// P = (therm_dem - therm_rep) / 100.
double partisanship_score(double therm_dem, double therm_rep);

/// Democrat if P > threshold, Republican if P < -threshold, else Independent.
Party party_label(double partisanship, double threshold);

/// Relative posting propensity: a geometric ladder with ratio 2, 1 at Never.
double activity_rate(MediaFrequency freq);
/// Throws ConfigError for an unknown level.
double activity_rate(std::string_view level);

/// Builds the persona text sentence by sentence from the present fields.
Persona render_persona(const SurveyRespondent& respondent, const PersonaOptions& options = {});

struct EnrichOutcome {
  Persona persona;
  std::optional<std::string> warning;
};

/// Asks the backend for a name and extra traits and appends them to the text.
/// Backend failure or an empty answer leaves the persona unchanged.
EnrichOutcome enrich_persona(const Persona& persona, gen::Backend& backend, std::uint64_t seed);

/// Enriches every persona with up to `max_in_flight` concurrent backend calls.
/// Results come back in input order. Each persona's request seed is
/// derive_seed(seed, "enrich", index).
std::vector<EnrichOutcome> enrich_all(std::span<const Persona> personas, gen::Backend& backend,
                                      std::uint64_t seed, std::size_t max_in_flight = 4);

/// One JSON object per line, keys in sorted order.
void write_personas(std::ostream& out, std::span<const Persona> personas);
std::vector<Persona> read_personas(std::istream& in);
std::vector<Persona> load_personas(const std::filesystem::path& path);

}  // namespace feedsim::persona
