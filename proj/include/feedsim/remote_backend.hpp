#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "feedsim/backend.hpp"
#include "feedsim/http.hpp"

namespace feedsim::gen {

struct RemoteConfig {
  std::string base_url = "https://api.openai.com/v1";
  std::string model = "gpt-3.5-turbo";
  std::string api_key_env = "OPENAI_API_KEY";
  double temperature = 1.0;
  std::chrono::milliseconds timeout{60000};
  RetryPolicy retry;
};

/// OpenAI-compatible chat completions. The persona is the system message and
/// the prompt the user message; enrichment requests send only the user
/// message, since there the persona is the subject rather than the speaker.
class RemoteBackend final : public Backend {
 public:
  /// Reads the API key from config.api_key_env; throws ConfigError if unset.
  explicit RemoteBackend(RemoteConfig config);
  RemoteBackend(RemoteConfig config, std::string api_key, std::shared_ptr<HttpTransport> transport,
                Sleeper sleeper);

  RawReply generate(const GenerationRequest& request, const std::string& user_message) override;
  std::string name() const override { return "remote"; }

  /// JSON request body for a call (exposed for tests).
  std::string request_body(const GenerationRequest& request, const std::string& user_message) const;

 private:
  RemoteConfig config_;
  std::string api_key_;
  std::shared_ptr<HttpTransport> transport_;
  Sleeper sleeper_;
};

/// Key identifying a backend call in a transcript: SHA-256 of
/// kind, system text and user message.
std::string transcript_key(const GenerationRequest& request, const std::string& user_message);

/// Replays answers from a transcript (JSONL with "key", "kind", "response").
/// A call missing from the transcript throws BackendError.
class RecordedBackend final : public Backend {
 public:
  explicit RecordedBackend(const std::filesystem::path& transcript);
  RawReply generate(const GenerationRequest& request, const std::string& user_message) override;
  std::string name() const override { return "recorded"; }
  std::size_t size() const { return answers_.size(); }

 private:
  std::map<std::string, std::string> answers_;
};

/// Forwards to another backend and keeps every answer for saving as a
/// transcript.
class RecordingBackend final : public Backend {
 public:
  explicit RecordingBackend(Backend& inner) : inner_(inner) {}
  RawReply generate(const GenerationRequest& request, const std::string& user_message) override;
  std::string name() const override { return inner_.name(); }
  /// Entries sorted by key.
  void save(const std::filesystem::path& path) const;

 private:
  Backend& inner_;
  mutable std::mutex mu_;
  std::map<std::string, std::pair<std::string, std::string>> entries_;  // key -> (kind, response)
};

}  // namespace feedsim::gen
