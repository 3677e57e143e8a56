#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "feedsim/action_log.hpp"
#include "feedsim/backend.hpp"
#include "feedsim/follow_graph.hpp"
#include "feedsim/news.hpp"
#include "feedsim/persona.hpp"
#include "feedsim/platform.hpp"
#include "feedsim/ranking.hpp"

namespace feedsim::engine {

struct SimulationConfig {
  std::uint64_t seed = 0;
  feed::Algorithm platform = feed::Algorithm::Follow;
  std::size_t timeline_k = 10;
  /// Share of agents that post a story in the first phase.
  double post_fraction = 0.4;
  /// Stop once this share of agents has liked and commented.
  double stop_fraction = 0.3;
  /// Count an agent as active after a like OR a comment.
  bool disjunctive_stop = false;
  /// Abort when more than this share of turns failed in the backend...
  double max_skip_fraction = 0.05;
  /// ...once at least this many turns have run.
  std::int64_t skip_grace_turns = 20;
  /// Hard cap on engagement turns; 0 means 200 per agent.
  std::int64_t max_turns = 0;
  /// Recorded in the log header; describes backend and policy settings.
  nlohmann::json backend = nlohmann::json::object();
};

nlohmann::json to_json(const SimulationConfig& config);
SimulationConfig config_from_json(const nlohmann::json& j);
/// Throws ConfigError for out-of-range values.
void validate(const SimulationConfig& config, std::size_t n_agents);

enum class RunStatus { Completed, TurnLimit, Aborted };
std::string_view to_string(RunStatus status);

struct SimulationResult {
  feed::PlatformState state;
  ActionLog log;
  RunStatus status = RunStatus::Completed;
  std::string message;  ///< reason for Aborted / TurnLimit
  std::int64_t turns = 0;
  std::int64_t phase1_turns = 0;
  std::int64_t skipped_turns = 0;  ///< backend failures
  std::int64_t empty_timelines = 0;
  std::uint64_t backend_calls = 0;
  std::size_t active_agents = 0;  ///< agents meeting the stop criterion
  std::vector<std::string> warnings;

  LogFooter footer() const;
};

struct SimulationInputs {
  std::span<const persona::Persona> personas;
  std::shared_ptr<const graph::FollowGraph> graph;
  std::span<const gen::NewsStory> stories;
  /// Free-form provenance copied into the log header (file hashes etc).
  nlohmann::json provenance = nlohmann::json::object();
};

/// Runs both phases. Phase one draws agents without replacement, weighted by
/// activity, until ceil(post_fraction * n) have shared a story. Phase two
/// draws with replacement; each turn ranks the agent's timeline, asks for
/// likes on it, then for one comment on the same view. Every action is
/// applied before the next one, and the run stops as soon as
/// ceil(stop_fraction * n) agents are active.
SimulationResult run_simulation(const SimulationConfig& config, const SimulationInputs& inputs,
                                gen::Backend& backend);

}  // namespace feedsim::engine
