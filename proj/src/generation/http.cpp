#include "feedsim/http.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "httplib.h"

#include "feedsim/errors.hpp"

namespace feedsim::gen {

HttplibTransport::HttplibTransport(std::string base_url, std::chrono::milliseconds timeout) : timeout_(timeout) {
  const auto scheme = base_url.find("://");
  if (scheme == std::string::npos) throw ConfigError("base URL needs a scheme: " + base_url);
  const auto slash = base_url.find('/', scheme + 3);
  origin_ = base_url.substr(0, slash);
  if (slash != std::string::npos) prefix_ = base_url.substr(slash);
  while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
}

HttpResponse HttplibTransport::post(const std::string& path, const std::string& body, const HttpHeaders& headers) {
  httplib::Client client(origin_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  httplib::Headers h;
  for (const auto& [k, v] : headers) h.emplace(k, v);
  auto res = client.Post(prefix_ + path, h, body, "application/json");
  if (!res) return {0, {}, httplib::to_string(res.error())};
  return {res->status, res->body, {}};
}

Sleeper real_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

bool is_retryable(int status) { return status == 0 || status == 408 || status == 429 || status >= 500; }

HttpResponse post_with_retry(HttpTransport& transport, const std::string& path, const std::string& body,
                             const HttpHeaders& headers, const RetryPolicy& policy, const Sleeper& sleep) {
  std::string last;
  for (int attempt = 0; attempt < policy.max_attempts; ++attempt) {
    if (attempt > 0) {
      const double ms = static_cast<double>(policy.initial_backoff.count()) * std::pow(policy.multiplier, attempt - 1);
      sleep(std::min(policy.max_backoff, std::chrono::milliseconds(static_cast<long long>(ms))));
    }
    HttpResponse r = transport.post(path, body, headers);
    if (r.status >= 200 && r.status < 300) return r;
    last = r.status == 0 ? "transport error: " + r.error
                         : "HTTP " + std::to_string(r.status) + ": " + r.body.substr(0, 200);
    if (!is_retryable(r.status)) throw BackendError(path + " failed with " + last);
  }
  throw BackendError(path + " failed after " + std::to_string(policy.max_attempts) + " attempts, last " + last);
}

}  // namespace feedsim::gen
