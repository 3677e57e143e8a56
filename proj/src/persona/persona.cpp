#include "feedsim/persona.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <istream>
#include <ostream>

#include "json.hpp"

#include "feedsim/backend.hpp"
#include "feedsim/errors.hpp"
#include "feedsim/news.hpp"
#include "feedsim/prompts.hpp"
#include "feedsim/rng.hpp"

namespace feedsim::persona {
namespace {

using json = nlohmann::json;

std::string join_natural(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += (i + 1 == items.size()) ? " and " : ", ";
    out += items[i];
  }
  return out;
}

std::string_view media_phrase(MediaFrequency freq) {
  switch (freq) {
    case MediaFrequency::Never: return "rarely";
    case MediaFrequency::OnceAWeek: return "about once a week";
    case MediaFrequency::FewTimesAWeek: return "a few times a week";
    case MediaFrequency::OnceADay: return "about once a day";
    case MediaFrequency::ManyTimesADay: return "many times a day";
  }
  return "rarely";
}

std::string party_sentence(double p, Party party) {
  if (party == Party::Independent) return "You prefer neither party.";
  const bool dem = party == Party::Democrat;
  if (std::abs(p) >= 0.5) return dem ? "You are a strong Democrat." : "You are a strong Republican.";
  return dem ? "You lean toward the Democratic party." : "You lean toward the Republican party.";
}

class TextBuilder {
 public:
  void add(std::string sentence) {
    if (!text_.empty()) text_ += ' ';
    text_ += sentence;
  }
  std::string take() { return std::move(text_); }

 private:
  std::string text_;
};

}  // namespace

double partisanship_score(double therm_dem, double therm_rep) {
  return std::clamp((therm_dem - therm_rep) / 100.0, -1.0, 1.0);
}

Party party_label(double partisanship, double threshold) {
  if (partisanship > threshold) return Party::Democrat;
  if (partisanship < -threshold) return Party::Republican;
  return Party::Independent;
}

double activity_rate(MediaFrequency freq) {
  return std::ldexp(1.0, static_cast<int>(freq));
}

double activity_rate(std::string_view level) { return activity_rate(parse_media_frequency(level)); }

Persona render_persona(const SurveyRespondent& r, const PersonaOptions& options) {
  Persona p;
  p.id = r.id;
  p.activity_rate = activity_rate(r.social_media_freq);
  p.news_sources = r.news_sources;
  if (r.therm_dem && r.therm_rep) {
    p.partisanship = partisanship_score(*r.therm_dem, *r.therm_rep);
  } else {
    p.partisanship = 0;
    p.partisanship_imputed = true;
  }
  p.party = party_label(p.partisanship, options.independence_threshold);

  TextBuilder text;
  text.add("You are a social media user in the United States.");
  text.add("You use social media " + std::string(media_phrase(r.social_media_freq)) + ".");
  if (r.age) text.add("You are " + std::to_string(*r.age) + " years old.");
  if (r.gender) text.add("Your gender is " + *r.gender + ".");
  if (r.race) text.add("Your race or ethnicity is " + *r.race + ".");
  if (r.education) text.add("Your highest level of education is " + *r.education + ".");
  if (r.income_class) text.add("Your income class is " + *r.income_class + ".");
  if (r.religion) text.add("Your religion is " + *r.religion + ".");
  if (r.state) text.add("You live in " + *r.state + ".");

  const bool apolitical = r.discuss_politics == DiscussFrequency::Never;
  if (!apolitical) {
    if (r.vote_2020) {
      if (*r.vote_2020 == "did not vote") {
        text.add("You did not vote in the 2020 presidential election.");
      } else {
        text.add("You voted for " + *r.vote_2020 + " in 2020.");
      }
    }
    if (!p.partisanship_imputed) text.add(party_sentence(p.partisanship, p.party));
    for (const auto& fig : r.therm_figures) {
      if (fig.value >= options.warm_cutoff) {
        text.add("You have strong positive feelings toward " + fig.name + ".");
      } else if (fig.value <= options.cold_cutoff) {
        text.add("You have strong negative feelings toward " + fig.name + ".");
      }
    }
    if (r.discuss_politics == DiscussFrequency::VeryOften) text.add("You like to argue about politics.");
  }

  if (!r.news_sources.empty()) {
    std::vector<std::string> names;
    for (const auto& src : r.news_sources) names.emplace_back(gen::outlet_display_name(src));
    text.add("You get your news from " + join_natural(names) + ".");
  }

  if (apolitical) {
    text.add("You never discuss politics on social media.");
    if (!r.nonpolitical_interests.empty()) {
      text.add("You care much more about " + join_natural(r.nonpolitical_interests) +
               " than about politics.");
    }
  } else if (!r.nonpolitical_interests.empty()) {
    text.add("In your free time you enjoy " + join_natural(r.nonpolitical_interests) + ".");
  }

  p.persona_text = text.take();
  return p;
}

EnrichOutcome enrich_persona(const Persona& persona, gen::Backend& backend, std::uint64_t seed) {
  EnrichOutcome out{persona, std::nullopt};
  const gen::GenerationRequest request = gen::build_enrich_prompt(persona, seed);
  try {
    const gen::BackendResponse response = gen::complete(backend, request);
    const auto& traits = std::get<gen::EnrichText>(response.parsed).text;
    if (traits.empty()) {
      out.warning = "enrichment for " + persona.id + " returned no text";
      return out;
    }
    out.persona.persona_text += "\n" + traits;
    out.persona.enriched = true;
  } catch (const BackendError& e) {
    out.warning = "enrichment for " + persona.id + " failed: " + e.what();
  }
  return out;
}

std::vector<EnrichOutcome> enrich_all(std::span<const Persona> personas, gen::Backend& backend,
                                      std::uint64_t seed, std::size_t max_in_flight) {
  std::vector<EnrichOutcome> results;
  results.reserve(personas.size());
  max_in_flight = std::max<std::size_t>(1, max_in_flight);
  for (std::size_t start = 0; start < personas.size(); start += max_in_flight) {
    const std::size_t end = std::min(personas.size(), start + max_in_flight);
    std::vector<std::future<EnrichOutcome>> batch;
    for (std::size_t i = start; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, [&, i] {
        return enrich_persona(personas[i], backend, derive_seed(seed, "enrich", i));
      }));
    }
    for (auto& f : batch) results.push_back(f.get());
  }
  return results;
}

void write_personas(std::ostream& out, std::span<const Persona> personas) {
  for (const auto& p : personas) {
    const json j = {{"id", p.id},
                    {"persona_text", p.persona_text},
                    {"partisanship", p.partisanship},
                    {"partisanship_imputed", p.partisanship_imputed},
                    {"party", std::string(to_string(p.party))},
                    {"activity_rate", p.activity_rate},
                    {"news_sources", p.news_sources},
                    {"enriched", p.enriched}};
    out << j.dump() << '\n';
  }
}

std::vector<Persona> read_personas(std::istream& in) {
  std::vector<Persona> personas;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      Persona p;
      p.id = j.at("id").get<std::string>();
      p.persona_text = j.at("persona_text").get<std::string>();
      p.partisanship = j.at("partisanship").get<double>();
      p.partisanship_imputed = j.at("partisanship_imputed").get<bool>();
      p.party = party_from_string(j.at("party").get<std::string>());
      p.activity_rate = j.at("activity_rate").get<double>();
      p.news_sources = j.at("news_sources").get<std::vector<std::string>>();
      p.enriched = j.at("enriched").get<bool>();
      if (p.partisanship < -1 || p.partisanship > 1) throw ValidationError("partisanship outside [-1,1]");
      if (!(p.activity_rate > 0)) throw ValidationError("activity_rate must be positive");
      personas.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw LoadError("personas line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError("personas line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return personas;
}

std::vector<Persona> load_personas(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open personas file " + path.string());
  return read_personas(in);
}

}  // namespace feedsim::persona
