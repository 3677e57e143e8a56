#pragma once

// Fixed inputs for prompt golden files and the recorded transcript.

#include <string>
#include <vector>

#include "feedsim/news.hpp"
#include "feedsim/persona.hpp"
#include "feedsim/prompts.hpp"
#include "feedsim/survey.hpp"

namespace fixture {

using namespace feedsim;

inline persona::Persona first_persona() {
  const auto rows = persona::load_survey(std::string(FEEDSIM_DATA_DIR) + "/survey_fixture.tsv");
  return persona::render_persona(rows.at(0));
}

inline std::vector<gen::NewsStory> stories() {
  return gen::load_stories(std::string(FEEDSIM_DATA_DIR) + "/news_2020-07-01.jsonl");
}

inline std::vector<gen::ShownPost> timeline() {
  return {
      {11, 4, Party::Democrat, 0.6, "Kids partying to catch COVID on purpose. This is what happens when leaders "
                                    "treat a pandemic like a hoax.",
       {{7, Party::Republican, "Nobody treated it like a hoax. Stop blaming everything on one man."},
        {9, Party::Democrat, "He literally said it would disappear."}}},
      {12, 8, Party::Republican, -0.7, "Minor league ball canceled. Small towns lose their summer and nobody in "
                                       "Washington cares.",
       {}},
      {13, 2, Party::Independent, 0.0, "Reading about the mask ordinance in Tuscaloosa. Seems reasonable to me.",
       {{1, Party::Democrat, "Agreed."}}},
  };
}

}  // namespace fixture
