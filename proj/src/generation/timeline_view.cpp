#include "feedsim/timeline_view.hpp"

namespace feedsim::gen {

std::vector<ShownPost> build_timeline_view(const feed::PlatformState& state, std::span<const PostId> ranked,
                                           std::span<const double> partisanship) {
  std::vector<ShownPost> out;
  out.reserve(ranked.size());
  for (PostId id : ranked) {
    const feed::Post& p = state.post(id);
    ShownPost sp{p.id, p.author, state.party_of(p.author), partisanship[p.author], p.text, {}};
    for (std::size_t idx : state.comments_on(id)) {
      const feed::Comment& c = state.comments()[idx];
      sp.comments.push_back({c.author, state.party_of(c.author), c.text});
    }
    out.push_back(std::move(sp));
  }
  return out;
}

}  // namespace feedsim::gen
