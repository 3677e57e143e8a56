#include "feedsim/simulation.hpp"

#include <atomic>

#include "feedsim/errors.hpp"
#include "feedsim/hash.hpp"
#include "feedsim/length.hpp"
#include "feedsim/prompts.hpp"
#include "feedsim/timeline_view.hpp"
#include "feedsim/urn.hpp"

#ifndef FEEDSIM_VERSION
#define FEEDSIM_VERSION "dev"
#endif

namespace feedsim::engine {

using nlohmann::json;

namespace {

class CountingBackend final : public gen::Backend {
 public:
  explicit CountingBackend(gen::Backend& inner) : inner_(inner) {}
  gen::RawReply generate(const gen::GenerationRequest& request, const std::string& user_message) override {
    ++calls_;
    return inner_.generate(request, user_message);
  }
  std::string name() const override { return inner_.name(); }
  std::uint64_t calls() const { return calls_; }

 private:
  gen::Backend& inner_;
  std::atomic<std::uint64_t> calls_{0};
};

class Run {
 public:
  Run(const SimulationConfig& config, const SimulationInputs& inputs, gen::Backend& backend)
      : config_(config),
        inputs_(inputs),
        backend_(backend),
        n_(inputs.personas.size()),
        result_{feed::PlatformState(parties(inputs.personas), inputs.graph), ActionLog(make_header()), {}, {}, 0, 0,
                0, 0, 0, 0, {}},
        liked_(n_, false),
        commented_(n_, false) {
    for (const auto& p : inputs.personas) {
      weights_.push_back(p.activity_rate);
      partisanship_.push_back(p.partisanship);
    }
    stop_target_ = ceil_fraction(config.stop_fraction, n_);
  }

  SimulationResult execute() {
    try {
      phase_one();
      if (result_.status == RunStatus::Completed) phase_two();
    } catch (const Aborted&) {
    }
    result_.backend_calls = backend_.calls();
    result_.active_agents = active_;
    return std::move(result_);
  }

 private:
  struct Aborted {};

  static std::vector<Party> parties(std::span<const persona::Persona> personas) {
    std::vector<Party> out;
    for (const auto& p : personas) out.push_back(p.party);
    return out;
  }

  LogHeader make_header() const {
    LogHeader h;
    h.tool_version = FEEDSIM_VERSION;
    h.seed = config_.seed;
    h.platform = std::string(feed::to_string(config_.platform));
    for (const auto& p : inputs_.personas) {
      h.agent_ids.push_back(p.id);
      h.parties.push_back(p.party);
    }
    h.config = to_json(config_);
    h.config_hash = sha256_hex(h.config.dump());
    h.inputs = inputs_.provenance;
    return h;
  }

  bool stop_reached() const { return active_ >= stop_target_; }

  void mark(AgentId agent, bool like) {
    const bool before = is_active(agent);
    (like ? liked_ : commented_)[agent] = true;
    if (!before && is_active(agent)) ++active_;
  }

  bool is_active(AgentId a) const {
    return config_.disjunctive_stop ? (liked_[a] || commented_[a]) : (liked_[a] && commented_[a]);
  }

  void skip(std::int64_t turn, AgentId agent, std::string reason, std::string prompt_hash, bool backend_failure) {
    ActionRecord r;
    r.turn = turn;
    r.agent = agent;
    r.kind = ActionKind::Skip;
    r.reason = std::move(reason);
    r.prompt_hash = std::move(prompt_hash);
    result_.log.append(std::move(r));
    if (backend_failure) ++result_.skipped_turns;
  }

  void end_turn() {
    ++result_.turns;
    if (result_.turns >= config_.skip_grace_turns &&
        static_cast<double>(result_.skipped_turns) > config_.max_skip_fraction * static_cast<double>(result_.turns)) {
      result_.status = RunStatus::Aborted;
      result_.message = std::to_string(result_.skipped_turns) + " of " + std::to_string(result_.turns) +
                        " turns failed in the backend, above the allowed share";
      throw Aborted{};
    }
  }

  void phase_one() {
    Urn urn(weights_);
    Rng draw_rng(derive_seed(config_.seed, "urn-post"));
    const std::size_t target = ceil_fraction(config_.post_fraction, n_);
    std::size_t posted = 0;
    while (posted < target && !urn.empty()) {
      const std::int64_t turn = result_.turns;
      const AgentId agent = urn.draw(draw_rng);
      urn.remove(agent);
      const auto& persona = inputs_.personas[agent];
      const auto selection = gen::select_stories(persona.news_sources, inputs_.stories);
      if (selection.from_diet == 0) {
        result_.warnings.push_back("agent " + persona.id + " reads none of the story outlets; using the general pool");
      }
      Rng rng(derive_seed(config_.seed, "turn", static_cast<std::uint64_t>(turn)));
      const auto request = gen::build_first_post_prompt(persona, selection.stories, rng.next());
      const std::string prompt_hash = sha256_hex(request.rendered_prompt);
      try {
        const auto response = gen::complete(backend_, request);
        const auto& choice = std::get<gen::PostChoice>(response.parsed);
        const auto& story = selection.stories[static_cast<std::size_t>(choice.headline_index - 1)];
        const auto& post = result_.state.add_post(agent, story.id, choice.text, result_.log.next_step());
        ActionRecord r;
        r.turn = turn;
        r.agent = agent;
        r.kind = ActionKind::Post;
        r.post_id = post.id;
        r.story_id = story.id;
        r.text = choice.text;
        r.prompt_hash = prompt_hash;
        r.latency_ms = response.latency_ms;
        result_.log.append(std::move(r));
        ++posted;
      } catch (const BackendError& e) {
        skip(turn, agent, std::string("backend: ") + e.what(), prompt_hash, true);
      }
      end_turn();
    }
    result_.phase1_turns = result_.turns;
    if (posted < target) {
      result_.warnings.push_back("only " + std::to_string(posted) + " of " + std::to_string(target) +
                                 " planned first posts were made");
    }
  }

  void phase_two() {
    Urn urn(weights_);
    Rng draw_rng(derive_seed(config_.seed, "urn-engage"));
    const std::int64_t limit = config_.max_turns > 0 ? config_.max_turns : 200 * static_cast<std::int64_t>(n_);
    std::int64_t engage_turns = 0;
    while (!stop_reached()) {
      if (engage_turns >= limit) {
        result_.status = RunStatus::TurnLimit;
        result_.message = "stop criterion not met after " + std::to_string(limit) + " engagement turns";
        return;
      }
      ++engage_turns;
      const std::int64_t turn = result_.turns;
      const AgentId agent = urn.draw(draw_rng);
      engage(turn, agent);
      end_turn();
    }
  }

  void engage(std::int64_t turn, AgentId agent) {
    const auto& persona = inputs_.personas[agent];
    auto& state = result_.state;
    const auto ranked = feed::rank_timeline(config_.platform, agent, state, config_.timeline_k);
    if (ranked.empty()) {
      ++result_.empty_timelines;
      skip(turn, agent, "empty timeline", "", false);
      return;
    }
    const auto view = gen::build_timeline_view(state, ranked, partisanship_);
    Rng rng(derive_seed(config_.seed, "turn", static_cast<std::uint64_t>(turn)));
    const std::uint64_t like_seed = rng.next();
    const int target_words = gen::sample_message_length(rng);
    const std::uint64_t comment_seed = rng.next();

    const auto like_request = gen::build_like_prompt(persona, view, like_seed);
    const std::string like_hash = sha256_hex(like_request.rendered_prompt);
    gen::BackendResponse likes;
    try {
      likes = gen::complete(backend_, like_request);
    } catch (const BackendError& e) {
      skip(turn, agent, std::string("backend: ") + e.what(), like_hash, true);
      return;
    }
    const auto& decisions = std::get<gen::LikeDecisions>(likes.parsed);
    if (decisions.missing > 0) {
      result_.warnings.push_back("turn " + std::to_string(turn) + ": " + std::to_string(decisions.missing) +
                                 " like decisions missing, treated as no action");
    }
    for (std::size_t i = 0; i < view.size(); ++i) {
      if (!decisions.liked[i] || state.has_liked(view[i].id, agent)) continue;
      state.add_like(view[i].id, agent, result_.log.next_step());
      ActionRecord r;
      r.turn = turn;
      r.agent = agent;
      r.kind = ActionKind::Like;
      r.post_id = view[i].id;
      r.prompt_hash = like_hash;
      r.latency_ms = likes.latency_ms;
      result_.log.append(std::move(r));
      mark(agent, true);
      if (stop_reached()) return;
    }

    const auto comment_request = gen::build_comment_prompt(persona, view, target_words, comment_seed);
    const std::string comment_hash = sha256_hex(comment_request.rendered_prompt);
    try {
      const auto response = gen::complete(backend_, comment_request);
      const auto& choice = std::get<gen::CommentChoice>(response.parsed);
      const auto& comment = state.add_comment(choice.post_id, agent, choice.text, result_.log.next_step());
      ActionRecord r;
      r.turn = turn;
      r.agent = agent;
      r.kind = ActionKind::Comment;
      r.post_id = choice.post_id;
      r.comment_id = comment.id;
      r.text = choice.text;
      r.target_words = target_words;
      r.prompt_hash = comment_hash;
      r.latency_ms = response.latency_ms;
      result_.log.append(std::move(r));
      mark(agent, false);
    } catch (const BackendError& e) {
      skip(turn, agent, std::string("backend: ") + e.what(), comment_hash, true);
    }
  }

  const SimulationConfig& config_;
  const SimulationInputs& inputs_;
  CountingBackend backend_;
  std::size_t n_;
  SimulationResult result_;
  std::vector<double> weights_;
  std::vector<double> partisanship_;
  std::vector<bool> liked_;
  std::vector<bool> commented_;
  std::size_t active_ = 0;
  std::size_t stop_target_ = 0;
};

}  // namespace

json to_json(const SimulationConfig& c) {
  return {{"seed", c.seed},
          {"platform", feed::to_string(c.platform)},
          {"timeline_k", c.timeline_k},
          {"post_fraction", c.post_fraction},
          {"stop_fraction", c.stop_fraction},
          {"disjunctive_stop", c.disjunctive_stop},
          {"max_skip_fraction", c.max_skip_fraction},
          {"skip_grace_turns", c.skip_grace_turns},
          {"max_turns", c.max_turns},
          {"backend", c.backend}};
}

SimulationConfig config_from_json(const json& j) {
  SimulationConfig c;
  c.seed = j.at("seed").get<std::uint64_t>();
  c.platform = feed::parse_algorithm(j.at("platform").get<std::string>());
  c.timeline_k = j.at("timeline_k").get<std::size_t>();
  c.post_fraction = j.at("post_fraction").get<double>();
  c.stop_fraction = j.at("stop_fraction").get<double>();
  c.disjunctive_stop = j.at("disjunctive_stop").get<bool>();
  c.max_skip_fraction = j.at("max_skip_fraction").get<double>();
  c.skip_grace_turns = j.at("skip_grace_turns").get<std::int64_t>();
  c.max_turns = j.at("max_turns").get<std::int64_t>();
  c.backend = j.value("backend", json::object());
  return c;
}

void validate(const SimulationConfig& c, std::size_t n_agents) {
  if (n_agents == 0) throw ConfigError("simulation needs at least one agent");
  if (c.timeline_k == 0) throw ConfigError("timeline_k must be at least 1");
  if (!(c.post_fraction > 0 && c.post_fraction <= 1)) throw ConfigError("post_fraction must lie in (0, 1]");
  if (!(c.stop_fraction >= 0 && c.stop_fraction <= 1)) throw ConfigError("stop_fraction must lie in [0, 1]");
  if (!(c.max_skip_fraction >= 0 && c.max_skip_fraction <= 1)) {
    throw ConfigError("max_skip_fraction must lie in [0, 1]");
  }
  if (c.max_turns < 0) throw ConfigError("max_turns must not be negative");
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Completed: return "completed";
    case RunStatus::TurnLimit: return "turn_limit";
    case RunStatus::Aborted: return "aborted";
  }
  return "completed";
}

LogFooter SimulationResult::footer() const {
  return {log.next_step(), turns, std::string(to_string(status)), state.content_hash(), backend_calls, skipped_turns};
}

SimulationResult run_simulation(const SimulationConfig& config, const SimulationInputs& inputs, gen::Backend& backend) {
  validate(config, inputs.personas.size());
  if (config.platform == feed::Algorithm::Follow && !inputs.graph) {
    throw ConfigError("the follow platform needs a follow graph");
  }
  if (inputs.graph && inputs.graph->size() != inputs.personas.size()) {
    throw ConfigError("follow graph has " + std::to_string(inputs.graph->size()) + " agents, personas file has " +
                      std::to_string(inputs.personas.size()));
  }
  return Run(config, inputs, backend).execute();
}

}  // namespace feedsim::engine
