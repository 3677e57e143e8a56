#include "feedsim/remote_backend.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "feedsim/errors.hpp"
#include "feedsim/hash.hpp"

namespace feedsim::gen {

using nlohmann::json;

RemoteBackend::RemoteBackend(RemoteConfig config) : config_(std::move(config)), sleeper_(real_sleeper()) {
  const char* key = std::getenv(config_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw ConfigError("remote backend needs an API key in $" + config_.api_key_env);
  }
  api_key_ = key;
  transport_ = std::make_shared<HttplibTransport>(config_.base_url, config_.timeout);
}

RemoteBackend::RemoteBackend(RemoteConfig config, std::string api_key, std::shared_ptr<HttpTransport> transport,
                             Sleeper sleeper)
    : config_(std::move(config)),
      api_key_(std::move(api_key)),
      transport_(std::move(transport)),
      sleeper_(std::move(sleeper)) {}

std::string RemoteBackend::request_body(const GenerationRequest& request, const std::string& user_message) const {
  json messages = json::array();
  if (request.kind != PromptKind::Enrich) {
    messages.push_back({{"role", "system"}, {"content", request.persona_text}});
  }
  messages.push_back({{"role", "user"}, {"content", user_message}});
  return json{{"model", config_.model},
              {"messages", messages},
              {"temperature", config_.temperature},
              {"seed", request.seed & 0x7fffffffffffffffULL}}
      .dump();
}

RawReply RemoteBackend::generate(const GenerationRequest& request, const std::string& user_message) {
  const auto start = std::chrono::steady_clock::now();
  const HttpHeaders headers = {{"Authorization", "Bearer " + api_key_}};
  const HttpResponse r = post_with_retry(*transport_, "/chat/completions", request_body(request, user_message),
                                         headers, config_.retry, sleeper_);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  try {
    const json j = json::parse(r.body);
    return {j.at("choices").at(0).at("message").at("content").get<std::string>(), ms};
  } catch (const json::exception& e) {
    throw BackendError(std::string("malformed chat completion response: ") + e.what());
  }
}

std::string transcript_key(const GenerationRequest& request, const std::string& user_message) {
  std::string material(to_string(request.kind));
  material += '\x1f';
  material += request.persona_text;
  material += '\x1f';
  material += user_message;
  return sha256_hex(material);
}

RecordedBackend::RecordedBackend(const std::filesystem::path& transcript) {
  std::ifstream in(transcript);
  if (!in) throw LoadError("cannot open transcript " + transcript.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      answers_[j.at("key").get<std::string>()] = j.at("response").get<std::string>();
    } catch (const json::exception& e) {
      throw LoadError(transcript.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

RawReply RecordedBackend::generate(const GenerationRequest& request, const std::string& user_message) {
  const auto it = answers_.find(transcript_key(request, user_message));
  if (it == answers_.end()) {
    throw BackendError(std::string("no recorded answer for this ") + std::string(to_string(request.kind)) + " request");
  }
  return {it->second, 0.0};
}

RawReply RecordingBackend::generate(const GenerationRequest& request, const std::string& user_message) {
  RawReply reply = inner_.generate(request, user_message);
  std::lock_guard lock(mu_);
  entries_[transcript_key(request, user_message)] = {std::string(to_string(request.kind)), reply.text};
  return reply;
}

void RecordingBackend::save(const std::filesystem::path& path) const {
  std::ostringstream out;
  std::lock_guard lock(mu_);
  for (const auto& [key, entry] : entries_) {
    out << json{{"key", key}, {"kind", entry.first}, {"response", entry.second}}.dump() << '\n';
  }
  write_file(path, out.str());
}

}  // namespace feedsim::gen
