#pragma once

#include "feedsim/backend.hpp"

namespace feedsim::gen {

struct MockPolicyParams {
  double p_agree = 0.5;     ///< like probability for a same-party author
  double p_cross = 0.1;     ///< like probability otherwise
  double q_conflict = 0.7;  ///< chance a comment targets the most distant author
  /// Per-word chance of a hostile word: toxic_base + toxic_slope * |dP| / 2.
  double toxic_base = 0.02;
  double toxic_slope = 0.3;
};

/// Deterministic decision for a request, a function of the request and its
/// seed alone.
///
/// FirstPost picks the first story from the viewer's outlets (story 1 when
/// none match). Comment targets the shown post whose author is furthest in
/// partisanship with probability q_conflict, else the closest; ties go to the
/// earlier post. LikeBatch likes each post independently.
ParsedResponse mock_policy(const GenerationRequest& request, const MockPolicyParams& params = {});

/// Renders a decision in the answer layout the parsers expect.
std::string format_response(const ParsedResponse& parsed);

class MockBackend final : public Backend {
 public:
  explicit MockBackend(MockPolicyParams params = {}) : params_(params) {}
  RawReply generate(const GenerationRequest& request, const std::string& user_message) override;
  std::string name() const override { return "mock"; }
  const MockPolicyParams& params() const { return params_; }

 private:
  MockPolicyParams params_;
};

}  // namespace feedsim::gen
