#include "feedsim/action_log.hpp"

#include <istream>
#include <ostream>

#include "feedsim/errors.hpp"
#include "feedsim/hash.hpp"

namespace feedsim::engine {

using nlohmann::json;

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::Post: return "post";
    case ActionKind::Comment: return "comment";
    case ActionKind::Like: return "like";
    case ActionKind::Skip: return "skip";
  }
  return "skip";
}

ActionKind parse_action_kind(std::string_view text) {
  if (text == "post") return ActionKind::Post;
  if (text == "comment") return ActionKind::Comment;
  if (text == "like") return ActionKind::Like;
  if (text == "skip") return ActionKind::Skip;
  throw IntegrityError("unknown action kind '" + std::string(text) + "'");
}

json to_json(const LogHeader& h) {
  json parties = json::array();
  for (Party p : h.parties) parties.push_back(std::string(1, to_string(p)[0]));
  return {{"type", "header"},     {"format", h.format}, {"tool_version", h.tool_version},
          {"seed", h.seed},       {"platform", h.platform}, {"agent_ids", h.agent_ids},
          {"parties", parties},   {"config", h.config}, {"config_hash", h.config_hash},
          {"inputs", h.inputs}};
}

LogHeader header_from_json(const json& j) {
  if (j.value("type", "") != "header") throw IntegrityError("action log does not start with a header");
  LogHeader h;
  h.format = j.at("format").get<std::string>();
  if (h.format != "feedsim-log/1") throw IntegrityError("unsupported log format '" + h.format + "'");
  h.tool_version = j.at("tool_version").get<std::string>();
  h.seed = j.at("seed").get<std::uint64_t>();
  h.platform = j.at("platform").get<std::string>();
  h.agent_ids = j.at("agent_ids").get<std::vector<std::string>>();
  for (const auto& p : j.at("parties")) h.parties.push_back(party_from_string(p.get<std::string>()));
  if (h.parties.size() != h.agent_ids.size()) throw IntegrityError("header agent and party lists differ in length");
  h.config = j.at("config");
  h.config_hash = j.at("config_hash").get<std::string>();
  h.inputs = j.at("inputs");
  return h;
}

json to_json(const ActionRecord& r) {
  json j = {{"step", r.step},
            {"turn", r.turn},
            {"agent", r.agent},
            {"kind", to_string(r.kind)},
            {"prompt_hash", r.prompt_hash},
            {"latency_ms", r.latency_ms}};
  if (r.post_id) j["post_id"] = r.post_id;
  if (r.comment_id) j["comment_id"] = r.comment_id;
  if (!r.story_id.empty()) j["story_id"] = r.story_id;
  if (r.kind == ActionKind::Post || r.kind == ActionKind::Comment) j["text"] = r.text;
  if (r.target_words) j["target_words"] = *r.target_words;
  if (!r.reason.empty()) j["reason"] = r.reason;
  if (!r.chain.empty()) j["chain"] = r.chain;
  return j;
}

ActionRecord record_from_json(const json& j) {
  ActionRecord r;
  r.step = j.at("step").get<std::int64_t>();
  r.turn = j.at("turn").get<std::int64_t>();
  r.agent = j.at("agent").get<AgentId>();
  r.kind = parse_action_kind(j.at("kind").get<std::string>());
  r.prompt_hash = j.at("prompt_hash").get<std::string>();
  r.latency_ms = j.at("latency_ms").get<double>();
  r.post_id = j.value("post_id", PostId{0});
  r.comment_id = j.value("comment_id", CommentId{0});
  r.story_id = j.value("story_id", "");
  r.text = j.value("text", "");
  if (j.contains("target_words")) r.target_words = j["target_words"].get<int>();
  r.reason = j.value("reason", "");
  r.chain = j.value("chain", "");
  return r;
}

json to_json(const LogFooter& f) {
  return {{"type", "footer"},          {"steps", f.steps},          {"turns", f.turns},
          {"status", f.status},        {"state_hash", f.state_hash}, {"backend_calls", f.backend_calls},
          {"skipped_turns", f.skipped_turns}};
}

LogFooter footer_from_json(const json& j) {
  LogFooter f;
  f.steps = j.at("steps").get<std::int64_t>();
  f.turns = j.at("turns").get<std::int64_t>();
  f.status = j.at("status").get<std::string>();
  f.state_hash = j.at("state_hash").get<std::string>();
  f.backend_calls = j.at("backend_calls").get<std::uint64_t>();
  f.skipped_turns = j.at("skipped_turns").get<std::int64_t>();
  return f;
}

void apply_record(feed::PlatformState& state, const ActionRecord& r) {
  switch (r.kind) {
    case ActionKind::Post: {
      const auto& p = state.add_post(r.agent, r.story_id, r.text, r.step);
      if (p.id != r.post_id) {
        throw IntegrityError("post id " + std::to_string(r.post_id) + " does not match replayed id " +
                                 std::to_string(p.id),
                             r.step);
      }
      break;
    }
    case ActionKind::Comment: {
      const auto& c = state.add_comment(r.post_id, r.agent, r.text, r.step);
      if (c.id != r.comment_id) {
        throw IntegrityError("comment id " + std::to_string(r.comment_id) + " does not match replayed id " +
                                 std::to_string(c.id),
                             r.step);
      }
      break;
    }
    case ActionKind::Like:
      state.add_like(r.post_id, r.agent, r.step);
      break;
    case ActionKind::Skip:
      if (r.agent >= state.agent_count()) throw IntegrityError("unknown agent index", r.step);
      break;
  }
}

ActionLog::ActionLog(LogHeader header) : header_(std::move(header)), tip_(sha256_hex(header_line(header_))) {}

std::string ActionLog::header_line(const LogHeader& header) { return to_json(header).dump(); }

std::string ActionLog::chain_of(const std::string& previous, const ActionRecord& record) {
  ActionRecord bare = record;
  bare.chain.clear();
  return sha256_hex(previous + "\n" + to_json(bare).dump());
}

const ActionRecord& ActionLog::append(ActionRecord record) {
  record.step = next_step();
  record.chain = chain_of(tip_, record);
  tip_ = record.chain;
  records_.push_back(std::move(record));
  return records_.back();
}

void ActionLog::write(std::ostream& out, const std::optional<LogFooter>& footer) const {
  out << header_line(header_) << '\n';
  for (const auto& r : records_) out << to_json(r).dump() << '\n';
  if (footer) out << to_json(*footer).dump() << '\n';
}

ReplayResult replay(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto parse_line = [&](std::optional<std::int64_t> step) {
    try {
      return json::parse(line);
    } catch (const json::parse_error&) {
      throw IntegrityError("line " + std::to_string(line_no) + " is not valid JSON", step);
    }
  };

  while (line.empty() && std::getline(in, line)) ++line_no;
  if (line.empty()) throw IntegrityError("action log is empty");
  ReplayResult result;
  try {
    result.header = header_from_json(parse_line(std::nullopt));
  } catch (const json::exception& e) {
    throw IntegrityError(std::string("malformed log header: ") + e.what());
  }
  std::string tip = sha256_hex(line);
  result.state = feed::PlatformState(result.header.parties);

  std::int64_t expected = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (result.footer) throw IntegrityError("content after the log footer", expected);
    const json j = parse_line(expected);
    if (j.value("type", "") == "footer") {
      try {
        result.footer = footer_from_json(j);
      } catch (const json::exception& e) {
        throw IntegrityError(std::string("malformed footer: ") + e.what(), expected);
      }
      continue;
    }
    ActionRecord r;
    try {
      r = record_from_json(j);
    } catch (const json::exception& e) {
      throw IntegrityError(std::string("malformed record: ") + e.what(), expected);
    }
    if (r.step != expected) {
      throw IntegrityError("expected step " + std::to_string(expected) + ", found " + std::to_string(r.step), r.step);
    }
    if (r.chain != ActionLog::chain_of(tip, r)) throw IntegrityError("hash chain mismatch", r.step);
    tip = r.chain;
    apply_record(result.state, r);
    result.records.push_back(std::move(r));
    ++expected;
  }

  if (result.footer) {
    if (result.footer->steps != expected) {
      throw IntegrityError("footer reports " + std::to_string(result.footer->steps) + " steps, log has " +
                               std::to_string(expected),
                           expected);
    }
    if (result.footer->state_hash != result.state.content_hash()) {
      throw IntegrityError("replayed state hash differs from the recorded one", expected - 1);
    }
  }
  return result;
}

}  // namespace feedsim::engine
