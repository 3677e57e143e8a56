#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "feedsim/backend.hpp"
#include "feedsim/errors.hpp"
#include "feedsim/mock_backend.hpp"
#include "feedsim/persona.hpp"
#include "feedsim/remote_backend.hpp"
#include "feedsim/rng.hpp"
#include "feedsim/survey.hpp"

using namespace feedsim;
using namespace feedsim::persona;

namespace {

const std::string kHeader =
    "id\tage\tgender\trace\teducation\tincome_class\treligion\tstate\ttherm_dem\ttherm_rep\ttherm_figures\t"
    "vote_2020\tdiscuss_politics\tsocial_media_freq\tnews_sources\tnonpolitical_interests\n";

std::vector<SurveyRespondent> parse(const std::string& body) {
  std::istringstream in(kHeader + body);
  return parse_survey(in, "test");
}

SurveyRespondent minimal() {
  SurveyRespondent r;
  r.id = "x1";
  r.social_media_freq = MediaFrequency::OnceADay;
  return r;
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("fixture survey loads with the documented marginals") {
  const auto rows = load_survey(std::string(FEEDSIM_DATA_DIR) + "/survey_fixture.tsv");
  REQUIRE(rows.size() == 500);
  std::size_t male = 0, aged = 0;
  double age_sum = 0;
  for (const auto& r : rows) {
    if (r.gender == "male") ++male;
    if (r.age) {
      age_sum += *r.age;
      ++aged;
    }
  }
  CHECK(male == 271);  // 54.2% of 500
  CHECK(age_sum / double(aged) == doctest::Approx(38.14).epsilon(1e-9));
}

TEST_CASE("empty survey file yields no respondents") {
  std::istringstream in("");
  CHECK(parse_survey(in, "empty").empty());
}

TEST_CASE("survey validation") {
  SUBCASE("thermometer above 100") {
    CHECK_THROWS_AS(parse("r1\t30\t\t\t\t\t\t\t140\t20\t\t\t\tonce a day\t\t\n"), ValidationError);
  }
  SUBCASE("malformed number names row and field") {
    try {
      parse("r1\tthirty\t\t\t\t\t\t\t40\t20\t\t\t\tonce a day\t\t\n");
      FAIL("expected LoadError");
    } catch (const LoadError& e) {
      CHECK(contains(e.what(), "line 2"));
      CHECK(contains(e.what(), "age"));
    }
  }
  SUBCASE("missing social media frequency") {
    CHECK_THROWS_AS(parse("r1\t30\t\t\t\t\t\t\t40\t20\t\t\t\t\t\t\n"), LoadError);
  }
  SUBCASE("absent fields stay absent") {
    const auto rows = parse("r1\t\t\t\t\t\t\t\t\t\t\t\t\tnever\t\t\n");
    REQUIRE(rows.size() == 1);
    CHECK_FALSE(rows[0].age);
    CHECK_FALSE(rows[0].therm_dem);
    CHECK(rows[0].news_sources.empty());
  }
}

TEST_CASE("survey write/parse round trip") {
  const auto rows = load_survey(std::string(FEEDSIM_DATA_DIR) + "/survey_fixture.tsv");
  std::ostringstream out;
  write_survey(out, rows);
  std::istringstream in(out.str());
  const auto again = parse_survey(in, "roundtrip");
  REQUIRE(again.size() == rows.size());
  std::ostringstream out2;
  write_survey(out2, again);
  CHECK(out.str() == out2.str());
}

TEST_CASE("partisanship score") {
  CHECK(partisanship_score(100, 0) == 1.0);
  CHECK(partisanship_score(50, 50) == 0.0);
  CHECK(partisanship_score(70, 30) == doctest::Approx(0.4));
  for (int a = 0; a <= 100; a += 5) {
    for (int b = 0; b <= 100; b += 5) {
      const double p = partisanship_score(a, b);
      CHECK(p >= -1.0);
      CHECK(p <= 1.0);
      CHECK(p == -partisanship_score(b, a));
      if (a < 100) CHECK(partisanship_score(a + 5, b) > p);
    }
  }
}

TEST_CASE("party label depends only on threshold comparisons") {
  CHECK(party_label(0.4, 0.1) == Party::Democrat);
  CHECK(party_label(0.0, 0.3) == Party::Independent);
  CHECK(party_label(-0.05, 0.1) == Party::Independent);
  CHECK(party_label(-0.5, 0.1) == Party::Republican);
  // cubing preserves sign and order, so it preserves labels at a cubed threshold
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double p = rng.uniform() * 2 - 1;
    CHECK(party_label(p, 0.1) == party_label(p * p * p, 0.001));
  }
}

TEST_CASE("activity ladder") {
  CHECK(activity_rate("many times a day") == 16.0);
  CHECK(activity_rate("once a week") == 2.0);
  CHECK(activity_rate("never") == 1.0);
  CHECK(activity_rate("rarely") == 1.0);
  const MediaFrequency ladder[] = {MediaFrequency::Never, MediaFrequency::OnceAWeek, MediaFrequency::FewTimesAWeek,
                                   MediaFrequency::OnceADay, MediaFrequency::ManyTimesADay};
  for (int i = 1; i < 5; ++i) CHECK(activity_rate(ladder[i]) > activity_rate(ladder[i - 1]));
  CHECK_THROWS_AS(activity_rate("hourly"), ConfigError);
}

TEST_CASE("persona rendering") {
  SUBCASE("apolitical respondent emphasizes hobbies") {
    auto r = minimal();
    r.discuss_politics = DiscussFrequency::Never;
    r.therm_dem = 90;
    r.therm_rep = 10;
    r.vote_2020 = "Joe Biden";
    r.therm_figures = {{"Donald Trump", 5}};
    r.nonpolitical_interests = {"fishing"};
    const auto p = render_persona(r);
    CHECK(contains(p.persona_text, "fishing"));
    CHECK_FALSE(contains(p.persona_text, "Democrat"));
    CHECK_FALSE(contains(p.persona_text, "Trump"));
    CHECK_FALSE(contains(p.persona_text, "voted"));
    CHECK(p.party == Party::Democrat);  // label still follows P
  }
  SUBCASE("balanced thermometers") {
    auto r = minimal();
    r.therm_dem = 50;
    r.therm_rep = 50;
    CHECK(contains(render_persona(r).persona_text, "You prefer neither party."));
  }
  SUBCASE("strong partisan and argumentative") {
    auto r = minimal();
    r.therm_dem = 5;
    r.therm_rep = 95;
    r.discuss_politics = DiscussFrequency::VeryOften;
    r.therm_figures = {{"Joe Biden", 10}, {"Nancy Pelosi", 50}, {"Donald Trump", 85}};
    const auto p = render_persona(r);
    CHECK(contains(p.persona_text, "You are a strong Republican."));
    CHECK(contains(p.persona_text, "You like to argue about politics"));
    CHECK(contains(p.persona_text, "strong negative feelings toward Joe Biden"));
    CHECK(contains(p.persona_text, "strong positive feelings toward Donald Trump"));
    CHECK_FALSE(contains(p.persona_text, "Pelosi"));
  }
  SUBCASE("all optional fields absent") {
    const auto p = render_persona(minimal());
    CHECK(p.persona_text ==
          "You are a social media user in the United States. You use social media about once a day.");
    CHECK(p.partisanship_imputed);
    CHECK(p.party == Party::Independent);
  }
}

TEST_CASE("rendering never mentions absent fields (fuzzed)") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    SurveyRespondent r = minimal();
    r.id = "f" + std::to_string(i);
    auto maybe = [&] { return rng.bernoulli(0.5); };
    if (maybe()) r.age = 18 + static_cast<int>(rng.below(70));
    if (maybe()) r.gender = "female";
    if (maybe()) r.race = "Hispanic";
    if (maybe()) r.education = "bachelor's degree";
    if (maybe()) r.income_class = "lower income";
    if (maybe()) r.religion = "Catholic";
    if (maybe()) r.state = "Ohio";
    if (maybe()) r.therm_dem = double(rng.below(101));
    if (maybe()) r.therm_rep = double(rng.below(101));
    if (maybe()) r.vote_2020 = "Donald Trump";
    if (maybe()) r.discuss_politics = static_cast<DiscussFrequency>(rng.below(5));
    if (maybe()) r.news_sources = {"nyt"};
    if (maybe()) r.nonpolitical_interests = {"gardening"};
    const auto t = render_persona(r).persona_text;
    CHECK(contains(t, "years old") == r.age.has_value());
    CHECK(contains(t, "gender") == r.gender.has_value());
    CHECK(contains(t, "race or ethnicity") == r.race.has_value());
    CHECK(contains(t, "education") == r.education.has_value());
    CHECK(contains(t, "income class") == r.income_class.has_value());
    CHECK(contains(t, "religion") == r.religion.has_value());
    CHECK(contains(t, "You live in") == r.state.has_value());
    CHECK(contains(t, "news from") == !r.news_sources.empty());
    CHECK(contains(t, "gardening") == !r.nonpolitical_interests.empty());
    if (!r.vote_2020) CHECK_FALSE(contains(t, "voted"));
    if (!r.therm_dem || !r.therm_rep) {
      CHECK_FALSE(contains(t, "party"));
      CHECK_FALSE(contains(t, "Democrat"));
    }
  }
}

TEST_CASE("enrichment with the mock backend is deterministic") {
  auto p = render_persona(minimal());
  gen::MockBackend mock;
  const auto a = enrich_persona(p, mock, 5);
  const auto b = enrich_persona(p, mock, 5);
  CHECK(a.persona.enriched);
  CHECK(a.persona.persona_text == b.persona.persona_text);
  CHECK(a.persona.persona_text.rfind(p.persona_text + "\n", 0) == 0);
  CHECK_FALSE(a.warning);
}

namespace {
class FixedBackend final : public gen::Backend {
 public:
  explicit FixedBackend(std::string text, bool fail = false) : text_(std::move(text)), fail_(fail) {}
  gen::RawReply generate(const gen::GenerationRequest&, const std::string&) override {
    if (fail_) throw BackendError("offline");
    return {text_, 0};
  }
  std::string name() const override { return "fixed"; }

 private:
  std::string text_;
  bool fail_;
};
}  // namespace

TEST_CASE("enrichment failures leave the persona unchanged") {
  const auto p = render_persona(minimal());
  FixedBackend empty("   ");
  const auto a = enrich_persona(p, empty, 1);
  CHECK(a.persona.persona_text == p.persona_text);
  CHECK_FALSE(a.persona.enriched);
  CHECK(a.warning);
  FixedBackend broken("", true);
  const auto b = enrich_persona(p, broken, 1);
  CHECK_FALSE(b.persona.enriched);
  CHECK(b.warning);
}

TEST_CASE("enrichment replays a recorded transcript verbatim") {
  const auto rows = load_survey(std::string(FEEDSIM_DATA_DIR) + "/survey_fixture.tsv");
  const auto p = render_persona(rows[0]);
  gen::RecordedBackend recorded(std::string(FEEDSIM_FIXTURE_DIR) + "/transcript_enrich.jsonl");
  const auto out = enrich_persona(p, recorded, 0);
  REQUIRE(out.persona.enriched);
  CHECK(out.persona.persona_text ==
        p.persona_text + "\nName: Megan Holt. Works as a dental hygienist in Tuscaloosa; hikes the Sipsey "
                         "Wilderness most weekends; cheers for the Crimson Tide; wary of big-city politicians "
                         "but supports local mask rules; practices yoga before work.");
}

TEST_CASE("enrich_all keeps input order under concurrency") {
  const auto rows = load_survey(std::string(FEEDSIM_DATA_DIR) + "/survey_fixture.tsv");
  std::vector<Persona> ps;
  for (std::size_t i = 0; i < 40; ++i) ps.push_back(render_persona(rows[i]));
  gen::MockBackend mock;
  const auto par = enrich_all(ps, mock, 9, 8);
  const auto seq = enrich_all(ps, mock, 9, 1);
  REQUIRE(par.size() == ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    CHECK(par[i].persona.id == ps[i].id);
    CHECK(par[i].persona.persona_text == seq[i].persona.persona_text);
  }
}

TEST_CASE("personas file round trip is byte stable") {
  const auto rows = load_survey(std::string(FEEDSIM_DATA_DIR) + "/survey_fixture.tsv");
  std::vector<Persona> ps;
  for (const auto& r : rows) ps.push_back(render_persona(r));
  std::ostringstream a;
  write_personas(a, ps);
  std::istringstream in(a.str());
  const auto back = read_personas(in);
  REQUIRE(back.size() == ps.size());
  std::ostringstream b;
  write_personas(b, back);
  CHECK(a.str() == b.str());
}
