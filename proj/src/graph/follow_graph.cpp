#include "feedsim/follow_graph.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "feedsim/errors.hpp"
#include "feedsim/rng.hpp"

namespace feedsim::graph {

FollowGraph::FollowGraph(std::vector<std::vector<AgentId>> out_edges, std::size_t out_degree,
                         double homophily, std::uint64_t seed)
    : out_edges_(std::move(out_edges)), out_degree_(out_degree), homophily_(homophily), seed_(seed) {
  sorted_ = out_edges_;
  const auto n = out_edges_.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto& s = sorted_[i];
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw ValidationError("agent " + std::to_string(i) + " follows someone twice");
    }
    for (AgentId j : s) {
      if (j >= n) throw ValidationError("followee id " + std::to_string(j) + " out of range");
      if (j == i) throw ValidationError("agent " + std::to_string(i) + " follows itself");
    }
  }
}

std::size_t FollowGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& e : out_edges_) total += e.size();
  return total;
}

bool FollowGraph::follows(AgentId follower, AgentId followee) const {
  const auto& s = sorted_.at(follower);
  return std::binary_search(s.begin(), s.end(), followee);
}

FollowGraph FollowGraph::complete(std::size_t n) {
  std::vector<std::vector<AgentId>> edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) edges[i].push_back(static_cast<AgentId>(j));
    }
  }
  return FollowGraph(std::move(edges), n > 0 ? n - 1 : 0, 0, 0);
}

double connection_weight(double p_i, double p_j, double homophily) {
  const double d = std::abs(p_i - p_j) / 2.0;
  return std::clamp(1.0 - std::pow(d, homophily), 0.0, 1.0);
}

FollowGraph generate_follow_graph(std::span<const double> partisanship, double homophily,
                                  std::size_t out_degree, std::uint64_t seed) {
  const std::size_t n = partisanship.size();
  if (n <= out_degree) {
    throw ConfigError("follow graph needs more agents (" + std::to_string(n) + ") than out_degree (" +
                      std::to_string(out_degree) + ")");
  }
  if (homophily < 0 || !std::isfinite(homophily)) throw ConfigError("homophily must be a nonnegative number");

  Rng rng(derive_seed(seed, "graph"));
  std::vector<std::vector<AgentId>> edges(n);
  struct Candidate {
    AgentId id;
    double weight;
  };
  std::vector<Candidate> positive;
  std::vector<AgentId> zero;

  for (std::size_t i = 0; i < n; ++i) {
    positive.clear();
    zero.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double w = connection_weight(partisanship[i], partisanship[j], homophily);
      if (w > 0) {
        positive.push_back({static_cast<AgentId>(j), w});
      } else {
        zero.push_back(static_cast<AgentId>(j));
      }
    }
    auto& out = edges[i];
    while (out.size() < out_degree && !positive.empty()) {
      double total = 0;
      for (const auto& c : positive) total += c.weight;
      const double u = rng.uniform() * total;
      double acc = 0;
      std::size_t pick = positive.size() - 1;
      for (std::size_t k = 0; k < positive.size(); ++k) {
        acc += positive[k].weight;
        if (u < acc) {
          pick = k;
          break;
        }
      }
      out.push_back(positive[pick].id);
      positive.erase(positive.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    while (out.size() < out_degree) {
      const auto pick = static_cast<std::size_t>(rng.below(zero.size()));
      out.push_back(zero[pick]);
      zero.erase(zero.begin() + static_cast<std::ptrdiff_t>(pick));
    }
  }
  return FollowGraph(std::move(edges), out_degree, homophily, seed);
}

HomophilyStats graph_homophily_stats(const FollowGraph& g, std::span<const double> partisanship,
                                     std::span<const Party> parties) {
  HomophilyStats stats;
  const std::size_t n = g.size();
  if (partisanship.size() != n || parties.size() != n) {
    throw ConfigError("graph and population sizes differ");
  }
  double edge_sum = 0;
  std::size_t edges = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (AgentId j : g.followees(static_cast<AgentId>(i))) {
      edge_sum += std::abs(partisanship[i] - partisanship[j]);
      ++edges;
      if (is_major(parties[i]) && is_major(parties[j])) {
        if (parties[i] == parties[j]) {
          ++stats.same_edges;
        } else {
          ++stats.cross_edges;
        }
      }
    }
  }
  stats.mean_edge_dp = edges ? edge_sum / static_cast<double>(edges) : 0;

  double pair_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) pair_sum += std::abs(partisanship[i] - partisanship[j]);
    }
  }
  stats.baseline_dp = n > 1 ? pair_sum / static_cast<double>(n * (n - 1)) : 0;

  const std::size_t total = stats.cross_edges + stats.same_edges;
  if (total > 0) {
    stats.ei_edges = (static_cast<double>(stats.cross_edges) - static_cast<double>(stats.same_edges)) /
                     static_cast<double>(total);
  }
  return stats;
}

void write_edge_list(std::ostream& out, const FollowGraph& g, std::span<const std::string> ids) {
  if (ids.size() != g.size()) throw ConfigError("id list does not match graph size");
  std::ostringstream h;
  h.precision(17);
  h << "# feedsim edges v1 n=" << g.size() << " out_degree=" << g.out_degree() << " H=" << g.homophily()
    << " seed=" << g.seed();
  out << h.str() << '\n';
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (AgentId j : g.followees(static_cast<AgentId>(i))) out << ids[i] << ' ' << ids[j] << '\n';
  }
}

FollowGraph read_edge_list(std::istream& in, std::span<const std::string> ids) {
  std::unordered_map<std::string, AgentId> index;
  for (std::size_t i = 0; i < ids.size(); ++i) index.emplace(ids[i], static_cast<AgentId>(i));

  std::vector<std::vector<AgentId>> edges(ids.size());
  std::size_t out_degree = 0;
  double homophily = 0;
  std::uint64_t seed = 0;
  bool header = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream hs(line.substr(1));
      std::string token;
      while (hs >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq), value = token.substr(eq + 1);
        try {
          if (key == "out_degree") out_degree = std::stoull(value);
          if (key == "H") homophily = std::stod(value);
          if (key == "seed") seed = std::stoull(value);
          if (key == "n" && std::stoull(value) != ids.size()) {
            throw LoadError("edge list is for " + value + " agents, population has " +
                            std::to_string(ids.size()));
          }
        } catch (const std::logic_error&) {
          throw LoadError("edge list line " + std::to_string(line_no) + ": bad header value '" + token + "'");
        }
      }
      header = true;
      continue;
    }
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a >> b) || (ls >> extra)) {
      throw LoadError("edge list line " + std::to_string(line_no) + ": expected 'follower followee'");
    }
    const auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end()) {
      throw LoadError("edge list line " + std::to_string(line_no) + ": unknown agent id");
    }
    edges[ia->second].push_back(ib->second);
  }
  if (!header) throw LoadError("edge list has no header comment");
  return FollowGraph(std::move(edges), out_degree, homophily, seed);
}

}  // namespace feedsim::graph
