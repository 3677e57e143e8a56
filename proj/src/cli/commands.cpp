#include "feedsim/commands.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "feedsim/action_log.hpp"
#include "feedsim/errors.hpp"
#include "feedsim/follow_graph.hpp"
#include "feedsim/hash.hpp"
#include "feedsim/manifest.hpp"
#include "feedsim/mock_backend.hpp"
#include "feedsim/news.hpp"
#include "feedsim/persona.hpp"
#include "feedsim/ranking.hpp"
#include "feedsim/remote_backend.hpp"
#include "feedsim/report.hpp"
#include "feedsim/simulation.hpp"
#include "feedsim/survey.hpp"
#include "feedsim/toxicity.hpp"

#ifndef FEEDSIM_VERSION
#define FEEDSIM_VERSION "dev"
#endif
#ifndef FEEDSIM_DATA_DIR
#define FEEDSIM_DATA_DIR "data"
#endif

namespace feedsim::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct BackendOptions {
  std::string kind = "mock";
  std::string transcript;
  std::string record_transcript;
  std::string model = gen::RemoteConfig{}.model;
  std::string base_url = gen::RemoteConfig{}.base_url;
  std::string api_key_env = gen::RemoteConfig{}.api_key_env;
  double temperature = 1.0;
  gen::MockPolicyParams mock;

  void add_to(CLI::App& app) {
    app.add_option("--backend", kind, "Generation backend")
        ->check(CLI::IsMember({"mock", "remote", "recorded"}))
        ->capture_default_str();
    app.add_option("--transcript", transcript, "Transcript replayed by the recorded backend");
    app.add_option("--record-transcript", record_transcript, "Save every backend answer to this file");
    app.add_option("--model", model, "Remote model name")->capture_default_str();
    app.add_option("--base-url", base_url, "Remote chat-completions base URL")->capture_default_str();
    app.add_option("--api-key-env", api_key_env, "Environment variable holding the remote API key")
        ->capture_default_str();
    app.add_option("--temperature", temperature, "Remote sampling temperature")->capture_default_str();
    app.add_option("--p-agree", mock.p_agree, "Mock: like probability for same-party posts")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--p-cross", mock.p_cross, "Mock: like probability for other posts")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app.add_option("--q-conflict", mock.q_conflict, "Mock: chance of answering the most distant author")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
  }

  std::unique_ptr<gen::Backend> make() const {
    if (kind == "mock") return std::make_unique<gen::MockBackend>(mock);
    if (kind == "recorded") {
      if (transcript.empty()) throw ConfigError("--backend recorded needs --transcript");
      return std::make_unique<gen::RecordedBackend>(transcript);
    }
    gen::RemoteConfig rc;
    rc.model = model;
    rc.base_url = base_url;
    rc.api_key_env = api_key_env;
    rc.temperature = temperature;
    return std::make_unique<gen::RemoteBackend>(rc);
  }

  json describe() const {
    json j = {{"kind", kind}};
    if (kind == "mock") {
      j["p_agree"] = mock.p_agree;
      j["p_cross"] = mock.p_cross;
      j["q_conflict"] = mock.q_conflict;
      j["toxic_base"] = mock.toxic_base;
      j["toxic_slope"] = mock.toxic_slope;
    } else if (kind == "remote") {
      j["model"] = model;
      j["base_url"] = base_url;
      j["temperature"] = temperature;
    } else {
      j["transcript_sha256"] = sha256_file(transcript);
    }
    return j;
  }
};

/// Wraps a backend in a recorder when asked to and saves on destruction.
struct BackendHandle {
  std::unique_ptr<gen::Backend> inner;
  std::unique_ptr<gen::RecordingBackend> recorder;
  std::string record_path;

  explicit BackendHandle(const BackendOptions& o) : inner(o.make()), record_path(o.record_transcript) {
    if (!record_path.empty()) recorder = std::make_unique<gen::RecordingBackend>(*inner);
  }
  gen::Backend& get() { return recorder ? static_cast<gen::Backend&>(*recorder) : *inner; }
  void finish() {
    if (recorder) recorder->save(record_path);
  }
};

struct PersonaCmd {
  std::string survey, out;
  std::uint64_t seed = 0;
  bool no_enrich = false;
  std::size_t max_in_flight = 4;
  persona::PersonaOptions options;
  BackendOptions backend;
};

struct GraphCmd {
  std::string personas, out;
  double homophily = 0;
  std::size_t out_degree = 30;
  std::uint64_t seed = 0;
};

struct SimulateCmd {
  std::string personas, graph, stories, out_dir;
  std::string platform;
  engine::SimulationConfig config;
  BackendOptions backend;
};

struct AnalyzeCmd {
  std::string manifest, scorer = "lexicon", lexicon = std::string(FEEDSIM_DATA_DIR) + "/toxicity_lexicon.tsv";
  std::string out, cache, scorer_url = metrics::PerspectiveConfig{}.base_url;
  std::size_t max_in_flight = 4;
};

struct RenderCmd {
  std::string manifest, viewer, out;
  std::size_t top = 5;
};

int gen_personas(const PersonaCmd& c, std::ostream& err) {
  const auto rows = persona::load_survey(c.survey);
  std::vector<persona::Persona> personas;
  personas.reserve(rows.size());
  for (const auto& r : rows) personas.push_back(persona::render_persona(r, c.options));
  err << "rendered " << personas.size() << " personas from " << c.survey << "\n";
  if (!c.no_enrich) {
    BackendHandle backend(c.backend);
    auto outcomes = persona::enrich_all(personas, backend.get(), c.seed, c.max_in_flight);
    std::size_t enriched = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      if (outcomes[i].warning) err << "warning: " << *outcomes[i].warning << "\n";
      personas[i] = std::move(outcomes[i].persona);
      enriched += personas[i].enriched;
    }
    backend.finish();
    err << "enriched " << enriched << " of " << personas.size() << " personas\n";
  }
  std::ostringstream buf;
  persona::write_personas(buf, personas);
  write_file(c.out, buf.str());
  return kExitOk;
}

std::vector<double> partisanship_of(const std::vector<persona::Persona>& personas) {
  std::vector<double> p;
  for (const auto& x : personas) p.push_back(x.partisanship);
  return p;
}

std::vector<std::string> ids_of(const std::vector<persona::Persona>& personas) {
  std::vector<std::string> ids;
  for (const auto& x : personas) ids.push_back(x.id);
  return ids;
}

int gen_graph(const GraphCmd& c, std::ostream& err) {
  const auto personas = persona::load_personas(c.personas);
  const auto p = partisanship_of(personas);
  const auto g = graph::generate_follow_graph(p, c.homophily, c.out_degree, c.seed);
  std::vector<Party> parties;
  for (const auto& x : personas) parties.push_back(x.party);
  const auto stats = graph::graph_homophily_stats(g, p, parties);
  err << "generated " << g.edge_count() << " follows over " << g.size() << " agents; mean edge |dP| "
      << stats.mean_edge_dp << " vs " << stats.baseline_dp << " for random pairs\n";
  std::ostringstream buf;
  graph::write_edge_list(buf, g, ids_of(personas));
  write_file(c.out, buf.str());
  return kExitOk;
}

std::shared_ptr<const graph::FollowGraph> load_graph(const fs::path& path, const std::vector<std::string>& ids) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open graph file " + path.string());
  return std::make_shared<const graph::FollowGraph>(graph::read_edge_list(in, ids));
}

int simulate(SimulateCmd c, std::ostream& err) {
  c.config.platform = feed::parse_algorithm(c.platform);
  const auto personas = persona::load_personas(c.personas);
  const auto stories = gen::load_stories(c.stories);
  const auto ids = ids_of(personas);
  std::shared_ptr<const graph::FollowGraph> g;
  if (!c.graph.empty()) {
    g = load_graph(c.graph, ids);
  } else if (c.config.platform == feed::Algorithm::Follow) {
    throw ConfigError("--platform follow needs --graph");
  }

  const fs::path out_dir(c.out_dir);
  fs::create_directories(out_dir);
  RunManifest m;
  m.tool_version = FEEDSIM_VERSION;
  m.seed = c.config.seed;
  m.platform = std::string(feed::to_string(c.config.platform));
  m.backend = c.backend.kind;
  m.files["personas"] = make_file_ref(c.personas, out_dir);
  m.files["stories"] = make_file_ref(c.stories, out_dir);
  if (g) m.files["graph"] = make_file_ref(c.graph, out_dir);

  c.config.backend = c.backend.describe();
  engine::SimulationInputs inputs;
  inputs.personas = personas;
  inputs.graph = g;
  inputs.stories = stories;
  for (const auto& [k, ref] : m.files) inputs.provenance[k + "_sha256"] = ref.sha256;

  BackendHandle backend(c.backend);
  err << "simulating " << m.platform << " with " << personas.size() << " agents, seed " << m.seed << "\n";
  const auto result = engine::run_simulation(c.config, inputs, backend.get());
  backend.finish();

  const fs::path log_path = out_dir / "action_log.jsonl";
  std::ostringstream buf;
  result.log.write(buf, result.footer());
  write_file(log_path, buf.str());
  m.files["action_log"] = make_file_ref(log_path, out_dir);
  m.config = engine::to_json(c.config);
  write_manifest(out_dir / "manifest.json", m);

  for (const auto& w : result.warnings) err << "warning: " << w << "\n";
  err << to_string(result.status) << ": " << result.turns << " turns, " << result.log.records().size()
      << " actions, " << result.active_agents << " active agents, " << result.backend_calls << " backend calls\n";
  if (result.status == engine::RunStatus::Aborted) {
    err << "error: " << result.message << "\n";
    return kExitBackend;
  }
  if (result.status == engine::RunStatus::TurnLimit) err << "warning: " << result.message << "\n";
  return kExitOk;
}

engine::ReplayResult load_run(const fs::path& manifest_path, RunManifest& m) {
  m = read_manifest(manifest_path);
  const fs::path dir = manifest_path.parent_path();
  verify_manifest(m, dir);
  if (!m.files.count("action_log")) throw LoadError("manifest lists no action log");
  std::ifstream in(resolve(m.files.at("action_log"), dir));
  auto run = engine::replay(in);
  if (run.header.platform != m.platform) throw IntegrityError("log platform differs from the manifest");
  return run;
}

int analyze(const AnalyzeCmd& c, std::ostream& out, std::ostream& err) {
  RunManifest m;
  const fs::path manifest_path(c.manifest);
  const auto run = load_run(manifest_path, m);
  if (!run.footer) err << "warning: action log has no footer; analyzing the recorded prefix\n";

  std::unique_ptr<metrics::ToxicityScorer> scorer;
  metrics::PerspectiveScorer* remote = nullptr;
  if (c.scorer == "lexicon") {
    scorer = std::make_unique<metrics::LexiconScorer>(metrics::LexiconScorer::load(c.lexicon));
  } else {
    metrics::PerspectiveConfig pc;
    pc.base_url = c.scorer_url;
    pc.max_in_flight = c.max_in_flight;
    if (!c.cache.empty()) pc.cache_path = c.cache;
    auto p = std::make_unique<metrics::PerspectiveScorer>(pc);
    remote = p.get();
    scorer = std::move(p);
  }
  const auto report = metrics::build_report(run.state, *scorer, m.platform);
  if (remote) remote->save_cache();
  if (report.toxicity_coverage < 1.0) {
    err << "warning: toxicity scored for " << report.toxicity_coverage * 100 << "% of texts\n";
  }
  const fs::path out_path = c.out.empty() ? manifest_path.parent_path() / "report.json" : fs::path(c.out);
  write_file(out_path, metrics::to_json(report).dump(2) + "\n");
  out << "platform   toxicity  E-I comments  E-I likes\n" << metrics::format_table_row(report) << "\n";
  return kExitOk;
}

void render_thread(std::ostream& out, std::size_t rank, const feed::Post& p, const feed::PlatformState& s,
                   const std::vector<std::string>& ids) {
  out << "#" << rank << "  " << ids[p.author] << " (" << to_string(s.party_of(p.author)) << ")  story " << p.story_id
      << "  |  " << s.like_count(p.id) << " likes, " << s.comment_count(p.id) << " comments\n";
  out << "    " << p.text << "\n";
  for (std::size_t idx : s.comments_on(p.id)) {
    const auto& cm = s.comments()[idx];
    out << "      > " << ids[cm.author] << " (" << to_string(s.party_of(cm.author)) << "): " << cm.text << "\n";
  }
}

int render_timeline(const RenderCmd& c, std::ostream& out) {
  if (c.top == 0) throw ConfigError("--top must be at least 1");
  RunManifest m;
  const fs::path manifest_path(c.manifest);
  auto run = load_run(manifest_path, m);
  const auto algorithm = feed::parse_algorithm(m.platform);
  const auto& ids = run.header.agent_ids;
  std::vector<PostId> ranked;
  if (c.viewer.empty()) {
    ranked = feed::rank_all(algorithm, run.state, c.top);
  } else {
    const auto it = std::find(ids.begin(), ids.end(), c.viewer);
    if (it == ids.end()) throw ConfigError("unknown viewer '" + c.viewer + "'");
    if (m.files.count("graph")) {
      run.state.set_graph(load_graph(resolve(m.files.at("graph"), manifest_path.parent_path()), ids));
    }
    ranked = feed::rank_timeline(algorithm, static_cast<AgentId>(it - ids.begin()), run.state, c.top);
  }
  std::ostringstream buf;
  buf << m.platform << " timeline" << (c.viewer.empty() ? "" : " for " + c.viewer) << ", top " << ranked.size()
      << " of " << run.state.posts().size() << " posts\n\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (i) buf << "\n";
    render_thread(buf, i + 1, run.state.post(ranked[i]), run.state, ids);
  }
  if (c.out.empty()) {
    out << buf.str();
  } else {
    write_file(c.out, buf.str());
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Agent-based simulation of news-feed ranking algorithms", "feedsim"};
  app.set_version_flag("--version", FEEDSIM_VERSION);
  app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");
  app.require_subcommand(1);

  PersonaCmd pc;
  auto* gp = app.add_subcommand("gen-personas", "Render survey rows into personas (JSONL)");
  gp->add_option("--survey", pc.survey, "Survey file")->required();
  gp->add_option("--out", pc.out, "Personas output file")->required();
  gp->add_option("--seed", pc.seed, "Root seed")->capture_default_str();
  gp->add_flag("--no-enrich", pc.no_enrich, "Skip backend enrichment");
  gp->add_option("--threshold", pc.options.independence_threshold, "Independence band on |P|")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gp->add_option("--warm", pc.options.warm_cutoff, "Warm thermometer cutoff")->capture_default_str();
  gp->add_option("--cold", pc.options.cold_cutoff, "Cold thermometer cutoff")->capture_default_str();
  gp->add_option("--max-in-flight", pc.max_in_flight, "Concurrent enrichment calls")->capture_default_str();
  pc.backend.add_to(*gp);

  GraphCmd gc;
  auto* gg = app.add_subcommand("gen-graph", "Generate the homophilous follow graph");
  gg->add_option("--personas", gc.personas, "Personas file")->required();
  gg->add_option("--out", gc.out, "Edge-list output file")->required();
  gg->add_option("--homophily,-H", gc.homophily, "Homophily exponent H")->required()->check(CLI::NonNegativeNumber);
  gg->add_option("--out-degree", gc.out_degree, "Followees per agent")->capture_default_str();
  gg->add_option("--seed", gc.seed, "Root seed")->capture_default_str();

  SimulateCmd sc;
  auto* gs = app.add_subcommand("simulate", "Run one platform and write the action log and manifest");
  gs->add_option("--personas", sc.personas, "Personas file")->required();
  gs->add_option("--graph", sc.graph, "Edge-list file (required for the follow platform)");
  gs->add_option("--stories", sc.stories, "News stories file")->required();
  gs->add_option("--platform", sc.platform, "Timeline algorithm")
      ->required()
      ->check(CLI::IsMember({"follow", "global", "bridging"}, CLI::ignore_case));
  gs->add_option("--seed", sc.config.seed, "Root seed")->capture_default_str();
  gs->add_option("--out-dir", sc.out_dir, "Directory for action_log.jsonl and manifest.json")->required();
  gs->add_option("--timeline-k", sc.config.timeline_k, "Posts per timeline view")->capture_default_str();
  gs->add_option("--post-fraction", sc.config.post_fraction, "Share of agents posting first")
      ->capture_default_str();
  gs->add_option("--stop-fraction", sc.config.stop_fraction, "Share of active agents that ends the run")
      ->capture_default_str();
  gs->add_flag("--disjunctive-stop", sc.config.disjunctive_stop, "Count an agent after a like OR a comment");
  gs->add_option("--max-turns", sc.config.max_turns, "Engagement turn cap (0 = 200 per agent)")
      ->capture_default_str();
  gs->add_option("--max-skip-fraction", sc.config.max_skip_fraction, "Backend failure share that aborts the run")
      ->capture_default_str();
  sc.backend.add_to(*gs);

  AnalyzeCmd ac;
  auto* ga = app.add_subcommand("analyze", "Compute toxicity and E-I indices for a run");
  ga->add_option("--manifest", ac.manifest, "Run manifest")->required();
  ga->add_option("--scorer", ac.scorer, "Toxicity scorer")
      ->check(CLI::IsMember({"lexicon", "remote"}))
      ->capture_default_str();
  ga->add_option("--lexicon", ac.lexicon, "Word list for the lexicon scorer")->capture_default_str();
  ga->add_option("--scorer-url", ac.scorer_url, "Remote scorer base URL")->capture_default_str();
  ga->add_option("--cache", ac.cache, "Remote score cache file");
  ga->add_option("--max-in-flight", ac.max_in_flight, "Concurrent scoring calls")->capture_default_str();
  ga->add_option("--out", ac.out, "Report file (default: report.json next to the manifest)");

  RenderCmd rc;
  auto* gr = app.add_subcommand("render-timeline", "Print the top threads of a run");
  gr->add_option("--manifest", rc.manifest, "Run manifest")->required();
  gr->add_option("--top", rc.top, "Number of threads")->capture_default_str();
  gr->add_option("--viewer", rc.viewer, "Rank as this agent sees it");
  gr->add_option("--out", rc.out, "Write to a file instead of standard output");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gp->parsed()) return gen_personas(pc, err);
    if (gg->parsed()) return gen_graph(gc, err);
    if (gs->parsed()) return simulate(sc, err);
    if (ga->parsed()) return analyze(ac, out, err);
    if (gr->parsed()) return render_timeline(rc, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const LoadError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitIo;
  } catch (const BackendError& e) {
    err << "backend error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const IntegrityError& e) {
    err << "integrity error: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const fs::filesystem_error& e) {
    err << "input error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace feedsim::cli
