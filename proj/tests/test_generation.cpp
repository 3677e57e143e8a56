#include "doctest.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "gen_fixture.hpp"
#include "feedsim/backend.hpp"
#include "feedsim/errors.hpp"
#include "feedsim/hash.hpp"
#include "feedsim/length.hpp"
#include "feedsim/mock_backend.hpp"
#include "feedsim/remote_backend.hpp"
#include "feedsim/toxicity.hpp"

using namespace feedsim;
using namespace feedsim::gen;

namespace {

std::string golden(const std::string& name) {
  return read_file(std::string(FEEDSIM_FIXTURE_DIR) + "/golden/" + name);
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

/// Answers from a fixed list, one per call.
class ScriptedBackend final : public Backend {
 public:
  explicit ScriptedBackend(std::vector<std::string> answers) : answers_(std::move(answers)) {}
  RawReply generate(const GenerationRequest&, const std::string& user_message) override {
    messages.push_back(user_message);
    return {answers_.at(calls_++), 1.5};
  }
  std::string name() const override { return "scripted"; }
  std::vector<std::string> messages;

 private:
  std::vector<std::string> answers_;
  std::size_t calls_ = 0;
};

persona::Persona persona_with(double p, Party party, std::vector<std::string> sources = {}) {
  persona::Persona x;
  x.id = "v";
  x.persona_text = "You are a test persona.";
  x.partisanship = p;
  x.party = party;
  x.news_sources = std::move(sources);
  return x;
}

}  // namespace

TEST_CASE("length sampler matches the fitted log-normal") {
  Rng rng(2024);
  const LengthDistribution dist;
  const int n = 1000000;
  std::vector<double> raw(n);
  double sum = 0, sq = 0;
  for (auto& x : raw) {
    x = sample_message_length_raw(rng, dist);
    const double l = std::log(x - dist.location);
    sum += l;
    sq += l * l;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  CHECK(std::abs(mean - std::log(10.69)) < 0.02);
  CHECK(std::abs(sd - 0.8066) < 0.02);
  std::nth_element(raw.begin(), raw.begin() + n / 2, raw.end());
  CHECK(dist.median() == doctest::Approx(10.9078));
  CHECK(std::abs(raw[n / 2] - 10.9078) < 0.5);
  const auto over = std::count_if(raw.begin(), raw.end(), [](double x) { return x > 60.5; });
  CHECK(double(over) / n < 0.02);

  Rng r2(1);
  for (int i = 0; i < 100000; ++i) {
    const int w = sample_message_length(r2);
    CHECK(w >= kMinWords);
    CHECK(w <= kMaxWords);
  }
}

TEST_CASE("news fixture") {
  const auto s = fixture::stories();
  REQUIRE(s.size() == 15);
  std::vector<std::string> headlines;
  for (const auto& x : s) {
    CHECK(x.date == "2020-07-01");
    CHECK(is_known_outlet(x.source));
    headlines.push_back(x.headline);
  }
  auto has = [&](const std::string& part) {
    return std::any_of(headlines.begin(), headlines.end(), [&](const auto& h) { return contains(h, part); });
  };
  CHECK(has("Alabama students throwing 'COVID parties'"));
  CHECK(has("Trump calls Black Lives Matter a 'symbol of hate'"));
  CHECK(has("Minor League Baseball Season Is Canceled"));
}

TEST_CASE("story selection") {
  std::vector<NewsStory> pool;
  for (int i = 0; i < 20; ++i) pool.push_back({"a" + std::to_string(i), "npr", "h", "s", "2020-07-01"});
  for (int i = 0; i < 5; ++i) pool.push_back({"b" + std::to_string(i), "fox", "h", "s", "2020-07-01"});
  const std::vector<std::string> npr = {"npr"};
  const auto one = select_stories(npr, pool);
  CHECK(one.stories.size() == 15);
  CHECK(one.from_diet == 15);
  for (const auto& x : one.stories) CHECK(x.source == "npr");

  const std::vector<std::string> none = {"bbc"};
  const auto padded = select_stories(none, pool);
  CHECK(padded.stories.size() == 15);
  CHECK(padded.from_diet == 0);

  const std::vector<std::string> fox = {"fox"};
  const auto mixed = select_stories(fox, pool);
  CHECK(mixed.from_diet == 5);
  CHECK(mixed.stories[0].source == "fox");
  CHECK(mixed.stories[5].source == "npr");

  CHECK_THROWS_AS(select_stories(npr, std::span<const NewsStory>(pool.data(), 14)), ConfigError);
  CHECK_THROWS_AS(select_stories(npr, std::span<const NewsStory>()), ConfigError);
}

TEST_CASE("prompt templates carry the published wording") {
  // typed independently of the constants in prompts.hpp
  const std::string first_a = "Here follows a list of headlines from the newspaper:";
  const std::string first_b =
      "Choose exactly one of these headlines to share on your social media feed based on your persona, and write "
      "a comment of 10-50 words about that one headline in the style of your personality.";
  const std::string comment_a = "You are using a social media platform, and see the following message threads:";
  const std::string comment_b =
      "Choose exactly one of these posts / message threads that your persona is likely to react to emotionally, "
      "either because you strongly agree or because your strongly disagree. Engage in natural conversation by "
      "writing a response to this message in the style of your personality. You may use sarcasm or irony, swear, "
      "criticize, threat, lie, and engage in personal attacks. You can also bring up a related topic that the post "
      "made you think of.";
  const std::string like_a = "You are using a social media platform, and see the following messages:";
  const std::string like_b =
      "Based on your persona, decide if you want to react to each message. Your possible actions are 'press like' "
      "and 'no action'. Only like messages that you endorse, and that you feel positive about.";
  const std::string enrich =
      "You will get a description of a person. Your task is to add other plausible personality traits that fits "
      "the described person, such as hobbies, favorite sports teams, specific political opinions, or other "
      "personality attributes. Give the person a name and a surname. Respond with the new attributes. Use concise "
      "language and respond briefly. Only list the traits, without saying e.g. 'additional personality traits' or "
      "describing the task.";

  const auto p = fixture::first_persona();
  const auto sel = select_stories(p.news_sources, fixture::stories());
  const auto tl = fixture::timeline();
  const auto f = build_first_post_prompt(p, sel.stories, 0);
  const auto c = build_comment_prompt(p, tl, 12, 0);
  const auto l = build_like_prompt(p, tl, 0);
  const auto e = build_enrich_prompt(p, 0);

  CHECK(contains(f.rendered_prompt, first_a));
  CHECK(contains(f.rendered_prompt, first_b));
  CHECK_FALSE(contains(f.rendered_prompt, "Your message should be"));
  CHECK_FALSE(f.target_words);
  CHECK(contains(c.rendered_prompt, comment_a));
  CHECK(contains(c.rendered_prompt, comment_b));
  CHECK(contains(c.rendered_prompt, "Your message should be 12 words long."));
  CHECK(c.target_words == 12);
  CHECK(contains(l.rendered_prompt, like_a));
  CHECK(contains(l.rendered_prompt, like_b));
  CHECK(contains(e.rendered_prompt, enrich));
  CHECK(contains(e.rendered_prompt, p.persona_text));

  SUBCASE("golden files") {
    CHECK(p.persona_text + "\n" == golden("persona.txt"));
    CHECK(f.rendered_prompt + "\n" == golden("first_post.txt"));
    CHECK(c.rendered_prompt + "\n" == golden("comment.txt"));
    CHECK(l.rendered_prompt + "\n" == golden("like.txt"));
    CHECK(e.rendered_prompt + "\n" == golden("enrich.txt"));
  }
  SUBCASE("builders are pure") {
    CHECK(build_first_post_prompt(p, sel.stories, 0).rendered_prompt == f.rendered_prompt);
    CHECK(build_comment_prompt(p, tl, 12, 0).rendered_prompt == c.rendered_prompt);
  }
  SUBCASE("stories are numbered 1 to 15, messages 1 to n") {
    for (int i = 1; i <= 15; ++i) CHECK(contains(f.rendered_prompt, "\n" + std::to_string(i) + ". "));
    CHECK_FALSE(contains(f.rendered_prompt, "\n16. "));
    for (int i = 1; i <= 3; ++i) CHECK(contains(l.rendered_prompt, "Message " + std::to_string(i) + ": "));
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(build_comment_prompt(p, {}, 12, 0), ConfigError);
    CHECK_THROWS_AS(build_like_prompt(p, {}, 0), ConfigError);
    CHECK_THROWS_AS(build_first_post_prompt(p, std::span(sel.stories).first(14), 0), ConfigError);
  }
}

TEST_CASE("thread rendering shows the latest five replies") {
  ShownPost post{1, 0, Party::Democrat, 0.5, "root", {}};
  for (int i = 0; i < 8; ++i) post.comments.push_back({1, Party::Democrat, "reply" + std::to_string(i)});
  const std::vector<ShownPost> shown = {post};
  const auto text = render_threads(shown);
  CHECK_FALSE(contains(text, "reply2"));
  CHECK(contains(text, "reply3"));
  CHECK(contains(text, "reply7"));
}

TEST_CASE("answer parsing") {
  CHECK(parse_choice("CHOICE: 3\nTEXT: hello there", 5) == std::make_pair(3, std::string("hello there")));
  CHECK(parse_choice("Sure!\nchoice: 2\ntext: multi\nline", 5) == std::make_pair(2, std::string("multi\nline")));
  CHECK_FALSE(parse_choice("CHOICE: 6\nTEXT: x", 5));
  CHECK_FALSE(parse_choice("CHOICE: 0\nTEXT: x", 5));
  CHECK_FALSE(parse_choice("CHOICE: two\nTEXT: x", 5));
  CHECK_FALSE(parse_choice("CHOICE: 2\n", 5));
  CHECK_FALSE(parse_choice("TEXT: x\nCHOICE: 2", 5));
  const auto likes = parse_likes("LIKE 1: yes\nLIKE 3: NO\nLIKE 9: yes\nlike 2 : maybe", 3);
  CHECK(likes[0] == true);
  CHECK_FALSE(likes[1]);
  CHECK(likes[2] == false);
}

TEST_CASE("complete retries once with a format reminder") {
  const auto p = persona_with(0.5, Party::Democrat);
  const auto tl = fixture::timeline();
  SUBCASE("second answer parses") {
    ScriptedBackend b({"I pick the second one", "CHOICE: 2\nTEXT: fine"});
    const auto r = complete(b, build_comment_prompt(p, tl, 5, 1));
    CHECK(r.attempts == 2);
    const auto& c = std::get<CommentChoice>(r.parsed);
    CHECK(c.post_id == 12);
    CHECK(c.text == "fine");
    CHECK(contains(b.messages[1], std::string(kFormatReminder)));
    CHECK(r.latency_ms == 3.0);
  }
  SUBCASE("missing like decisions become no action") {
    ScriptedBackend b({"LIKE 1: yes", "LIKE 1: yes\nLIKE 3: yes"});
    const auto r = complete(b, build_like_prompt(p, tl, 1));
    const auto& d = std::get<LikeDecisions>(r.parsed);
    CHECK(d.liked == std::vector<bool>{true, false, true});
    CHECK(d.missing == 1);
  }
  SUBCASE("two malformed comment answers are a backend error") {
    ScriptedBackend b({"no", "still no"});
    CHECK_THROWS_AS(complete(b, build_comment_prompt(p, tl, 5, 1)), BackendError);
  }
}

TEST_CASE("mock policy") {
  const auto tl = fixture::timeline();
  SUBCASE("deterministic per request") {
    MockBackend m;
    const auto req = build_comment_prompt(persona_with(0.5, Party::Democrat), tl, 9, 77);
    const auto a = complete(m, req);
    const auto b = complete(m, req);
    CHECK(a.raw_text == b.raw_text);
    CHECK(std::get<CommentChoice>(a.parsed).text == std::get<CommentChoice>(b.parsed).text);
  }
  SUBCASE("first post follows the persona's outlets") {
    const auto stories = fixture::stories();
    MockBackend m;
    const auto req = build_first_post_prompt(persona_with(0.5, Party::Democrat, {"npr"}), stories, 3);
    const auto& c = std::get<PostChoice>(complete(m, req).parsed);
    CHECK(stories[c.headline_index - 1].source == "npr");
    const auto none = build_first_post_prompt(persona_with(0.5, Party::Democrat, {}), stories, 3);
    CHECK(std::get<PostChoice>(complete(m, none).parsed).headline_index == 1);
  }
  SUBCASE("like probabilities at the extremes") {
    MockPolicyParams params;
    params.p_agree = 1.0;
    params.p_cross = 0.0;
    MockBackend m(params);
    for (std::uint64_t s = 0; s < 200; ++s) {
      const auto d = std::get<LikeDecisions>(complete(m, build_like_prompt(persona_with(-0.6, Party::Republican), tl, s)).parsed);
      CHECK(d.liked == std::vector<bool>{false, true, false});
    }
  }
  SUBCASE("comment target by conflict preference") {
    MockPolicyParams always;
    always.q_conflict = 1.0;
    MockPolicyParams never;
    never.q_conflict = 0.0;
    const auto req = build_comment_prompt(persona_with(0.8, Party::Democrat), tl, 8, 5);
    CHECK(std::get<CommentChoice>(mock_policy(req, always)).post_id == 12);
    CHECK(std::get<CommentChoice>(mock_policy(req, never)).post_id == 11);
  }
  SUBCASE("comments honor the target length") {
    const auto req = build_comment_prompt(persona_with(0.8, Party::Democrat), tl, 17, 5);
    const auto text = std::get<CommentChoice>(mock_policy(req)).text;
    CHECK(std::count(text.begin(), text.end(), ' ') == 16);
  }
}

TEST_CASE("mock cross-party like share under balanced exposure") {
  // 10 posts, five from each bloc at +-0.8; viewers alternate blocs
  std::vector<ShownPost> shown;
  for (int i = 0; i < 10; ++i) {
    const bool dem = i % 2 == 0;
    shown.push_back({PostId(i + 1), AgentId(i), dem ? Party::Democrat : Party::Republican, dem ? 0.8 : -0.8,
                     "post", {}});
  }
  const MockPolicyParams params;
  const double expected = params.p_cross / (params.p_cross + params.p_agree);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::size_t cross = 0, total = 0;
    for (std::uint64_t v = 0; v < 400; ++v) {
      const bool dem = v % 2 == 0;
      const auto req = build_like_prompt(persona_with(dem ? 0.8 : -0.8, dem ? Party::Democrat : Party::Republican),
                                         shown, derive_seed(seed, "viewer", v));
      const auto d = std::get<LikeDecisions>(mock_policy(req, params));
      for (std::size_t i = 0; i < shown.size(); ++i) {
        if (!d.liked[i]) continue;
        ++total;
        cross += shown[i].author_party != req.viewer.party;
      }
    }
    CHECK(double(cross) / double(total) == doctest::Approx(expected).epsilon(0.2));
  }
}

TEST_CASE("mock hostility rises with partisan distance") {
  auto lex = metrics::LexiconScorer::load(std::string(FEEDSIM_DATA_DIR) + "/toxicity_lexicon.tsv");
  auto mean_score = [&](double target_p) {
    std::vector<ShownPost> shown = {{1, 1, Party::Democrat, target_p, "post", {}}};
    double sum = 0;
    for (std::uint64_t s = 0; s < 2000; ++s) {
      const auto req = build_comment_prompt(persona_with(0.8, Party::Democrat), shown, 15, s);
      sum += lex.score_one(std::get<CommentChoice>(mock_policy(req)).text);
    }
    return sum / 2000;
  };
  const double near = mean_score(0.8), mid = mean_score(0.0), far = mean_score(-0.8);
  CHECK(near < mid);
  CHECK(mid < far);
}

TEST_CASE("recorded transcript replays exactly") {
  RecordedBackend rec(std::string(FEEDSIM_FIXTURE_DIR) + "/transcript_live.jsonl");
  CHECK(rec.size() == 3);
  const auto p = fixture::first_persona();
  const auto sel = select_stories(p.news_sources, fixture::stories());
  const auto tl = fixture::timeline();

  const auto post = complete(rec, build_first_post_prompt(p, sel.stories, 0));
  const auto& pc = std::get<PostChoice>(post.parsed);
  CHECK(pc.headline_index == 1);
  CHECK(pc.text ==
        "This is happening right here in Tuscaloosa?? Y'all, COVID is not a party game. My little cousin goes to "
        "school there. Wear the mask and stay home, it's not that hard.");
  const auto comment = complete(rec, build_comment_prompt(p, tl, 12, 0));
  const auto& cc = std::get<CommentChoice>(comment.parsed);
  CHECK(cc.post_id == 13);
  CHECK(cc.text == "Masks are not tyranny, folks. Protect your grandma and stop whining about it.");
  const auto likes = complete(rec, build_like_prompt(p, tl, 0));
  CHECK(std::get<LikeDecisions>(likes.parsed).liked == std::vector<bool>{true, false, true});

  CHECK_THROWS_AS(complete(rec, build_like_prompt(p, std::span(tl).first(2), 0)), BackendError);  // unrecorded
}

TEST_CASE("recording backend writes a replayable transcript") {
  const auto path = std::filesystem::temp_directory_path() / "feedsim_test_transcript.jsonl";
  MockBackend mock;
  RecordingBackend rec(mock);
  const auto tl = fixture::timeline();
  const auto req = build_comment_prompt(persona_with(0.2, Party::Democrat), tl, 7, 4);
  const auto live = complete(rec, req);
  rec.save(path);
  RecordedBackend replayed(path);
  CHECK(complete(replayed, req).raw_text == live.raw_text);
  std::filesystem::remove(path);
}

namespace {

struct LocalServer {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  LocalServer() {
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~LocalServer() {
    server.stop();
    thread.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

}  // namespace

TEST_CASE("remote backend retries a rate limit") {
  LocalServer srv;
  std::atomic<int> hits{0};
  std::string seen_body, seen_auth;
  srv.server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    if (hits++ == 0) {
      res.status = 429;
      res.set_content("{\"error\":\"slow down\"}", "application/json");
      return;
    }
    seen_body = req.body;
    seen_auth = req.get_header_value("Authorization");
    res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"LIKE 1: yes\nLIKE 2: no\nLIKE 3: no"}}]})",
                    "application/json");
  });
  RemoteConfig rc;
  rc.base_url = srv.url() + "/v1";
  rc.model = "test-model";
  std::vector<std::chrono::milliseconds> sleeps;
  RemoteBackend remote(rc, "sk-test", std::make_shared<HttplibTransport>(rc.base_url, std::chrono::seconds(5)),
                       [&](std::chrono::milliseconds d) { sleeps.push_back(d); });
  const auto p = persona_with(0.3, Party::Democrat);
  const auto r = complete(remote, build_like_prompt(p, fixture::timeline(), 1));
  CHECK(hits == 2);
  REQUIRE(sleeps.size() == 1);
  CHECK(sleeps[0] == rc.retry.initial_backoff);
  CHECK(std::get<LikeDecisions>(r.parsed).liked == std::vector<bool>{true, false, false});
  CHECK(seen_auth == "Bearer sk-test");
  const auto body = nlohmann::json::parse(seen_body);
  CHECK(body["model"] == "test-model");
  CHECK(body["messages"][0]["role"] == "system");
  CHECK(body["messages"][0]["content"] == p.persona_text);
  CHECK(body["messages"][1]["role"] == "user");
}

TEST_CASE("remote backend gives up after five attempts") {
  int port = 0;
  {
    LocalServer probe;  // reserve then release a port so nothing listens on it
    port = probe.port;
  }
  RemoteConfig rc;
  rc.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
  int sleeps = 0;
  RemoteBackend remote(rc, "k", std::make_shared<HttplibTransport>(rc.base_url, std::chrono::seconds(2)),
                       [&](std::chrono::milliseconds) { ++sleeps; });
  CHECK_THROWS_AS(remote.generate(build_enrich_prompt(persona_with(0, Party::Independent), 1), "x"), BackendError);
  CHECK(sleeps == 4);
}

TEST_CASE("non-retryable statuses fail at once") {
  LocalServer srv;
  std::atomic<int> hits{0};
  srv.server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 401;
  });
  RemoteConfig rc;
  rc.base_url = srv.url() + "/v1";
  RemoteBackend remote(rc, "bad", std::make_shared<HttplibTransport>(rc.base_url, std::chrono::seconds(5)),
                       [](std::chrono::milliseconds) {});
  CHECK_THROWS_AS(remote.generate(build_enrich_prompt(persona_with(0, Party::Independent), 1), "x"), BackendError);
  CHECK(hits == 1);
}

TEST_CASE("enrichment requests carry no system message") {
  RemoteConfig rc;
  RemoteBackend remote(rc, "k", nullptr, [](std::chrono::milliseconds) {});
  const auto req = build_enrich_prompt(persona_with(0, Party::Independent), 1);
  const auto body = nlohmann::json::parse(remote.request_body(req, req.rendered_prompt));
  REQUIRE(body["messages"].size() == 1);
  CHECK(body["messages"][0]["role"] == "user");
}
