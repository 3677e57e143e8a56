#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "feedsim/platform.hpp"
#include "feedsim/types.hpp"

namespace feedsim::engine {

enum class ActionKind { Post, Comment, Like, Skip };

std::string_view to_string(ActionKind kind);
ActionKind parse_action_kind(std::string_view text);

struct ActionRecord {
  std::int64_t step = 0;  ///< 0, 1, 2, ... in log order
  std::int64_t turn = 0;  ///< agent selection the action belongs to
  AgentId agent = 0;
  ActionKind kind = ActionKind::Skip;
  PostId post_id = 0;        ///< Post: new id; Comment/Like: target
  CommentId comment_id = 0;  ///< Comment only
  std::string story_id;      ///< Post only
  std::string text;          ///< Post/Comment only
  std::optional<int> target_words;
  std::string reason;  ///< Skip only
  std::string prompt_hash;
  double latency_ms = 0;
  std::string chain;  ///< SHA-256 over the previous chain value and this record
};

struct LogHeader {
  std::string format = "feedsim-log/1";
  std::string tool_version;
  std::uint64_t seed = 0;
  std::string platform;
  std::vector<std::string> agent_ids;
  std::vector<Party> parties;
  nlohmann::json config = nlohmann::json::object();
  std::string config_hash;
  nlohmann::json inputs = nlohmann::json::object();
};

struct LogFooter {
  std::int64_t steps = 0;
  std::int64_t turns = 0;
  std::string status;
  std::string state_hash;
  std::uint64_t backend_calls = 0;
  std::int64_t skipped_turns = 0;
};

nlohmann::json to_json(const LogHeader& header);
LogHeader header_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ActionRecord& record);
ActionRecord record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LogFooter& footer);
LogFooter footer_from_json(const nlohmann::json& j);

/// Applies one record to the state. Throws IntegrityError naming the step when
/// the record contradicts the state.
void apply_record(feed::PlatformState& state, const ActionRecord& record);

/// Append-only log with a hash chain rooted in the header line.
class ActionLog {
 public:
  explicit ActionLog(LogHeader header);

  /// Assigns step and chain, then stores the record.
  const ActionRecord& append(ActionRecord record);

  const LogHeader& header() const { return header_; }
  const std::vector<ActionRecord>& records() const { return records_; }
  std::int64_t next_step() const { return static_cast<std::int64_t>(records_.size()); }

  /// Header line, one line per record, then the footer line if given.
  void write(std::ostream& out, const std::optional<LogFooter>& footer) const;

  static std::string header_line(const LogHeader& header);
  static std::string chain_of(const std::string& previous, const ActionRecord& record);

 private:
  LogHeader header_;
  std::string tip_;
  std::vector<ActionRecord> records_;
};

struct ReplayResult {
  LogHeader header;
  feed::PlatformState state;
  std::vector<ActionRecord> records;
  std::optional<LogFooter> footer;  ///< absent for a truncated log
};

/// Rebuilds the platform state from a log. Verifies step order, the hash
/// chain, references and, when a footer is present, the final state hash.
/// A log cut after any record replays to that prefix. Throws IntegrityError
/// naming the offending step.
ReplayResult replay(std::istream& in);

}  // namespace feedsim::engine
