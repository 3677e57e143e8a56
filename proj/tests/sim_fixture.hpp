#pragma once

// Synthetic populations for engine, metrics and acceptance runs.

#include <memory>
#include <string>
#include <vector>

#include "feedsim/follow_graph.hpp"
#include "feedsim/news.hpp"
#include "feedsim/persona.hpp"
#include "feedsim/rng.hpp"

namespace simfix {

using namespace feedsim;

/// Bimodal electorate at +-pole with a little jitter; every fifth agent is
/// Independent near zero. Activity rates cycle through the ladder.
inline std::vector<persona::Persona> population(std::size_t n, std::uint64_t seed, double pole = 0.8) {
  static const std::vector<std::vector<std::string>> diets = {
      {"nyt", "cnn", "msnbc"}, {"fox", "breitbart", "wsj"}, {"ap", "reuters", "npr"}, {}};
  Rng rng(derive_seed(seed, "population"));
  std::vector<persona::Persona> out;
  for (std::size_t i = 0; i < n; ++i) {
    persona::Persona p;
    p.id = "a" + std::to_string(i);
    double x;
    if (i % 5 == 4) {
      x = (rng.uniform() - 0.5) * 0.1;
    } else {
      x = (i % 2 == 0 ? pole : -pole) + (rng.uniform() - 0.5) * 0.1;
    }
    p.partisanship = x;
    p.party = persona::party_label(x, 0.1);
    p.activity_rate = double(1u << (i % 4));
    p.news_sources = diets[p.party == Party::Democrat ? 0 : p.party == Party::Republican ? 1 : (i % 3 == 0 ? 3 : 2)];
    p.persona_text = "You are agent " + p.id + ".";
    out.push_back(std::move(p));
  }
  return out;
}

inline std::vector<double> partisanship(const std::vector<persona::Persona>& ps) {
  std::vector<double> out;
  for (const auto& p : ps) out.push_back(p.partisanship);
  return out;
}

inline std::shared_ptr<const graph::FollowGraph> follow_graph(const std::vector<persona::Persona>& ps, double h,
                                                              std::size_t degree, std::uint64_t seed) {
  const auto p = partisanship(ps);
  return std::make_shared<const graph::FollowGraph>(graph::generate_follow_graph(p, h, degree, seed));
}

inline std::vector<gen::NewsStory> stories() {
  return gen::load_stories(std::string(FEEDSIM_DATA_DIR) + "/news_2020-07-01.jsonl");
}

}  // namespace simfix
