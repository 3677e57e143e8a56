#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <string>

namespace feedsim::gen {

struct HttpResponse {
  int status = 0;  ///< 0 when the request never completed
  std::string body;
  std::string error;
};

using HttpHeaders = std::map<std::string, std::string>;

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const std::string& path, const std::string& body, const HttpHeaders& headers) = 0;
};

/// HTTP(S) client for one base URL ("https://host[:port][/prefix]").
class HttplibTransport final : public HttpTransport {
 public:
  HttplibTransport(std::string base_url, std::chrono::milliseconds timeout);
  HttpResponse post(const std::string& path, const std::string& body, const HttpHeaders& headers) override;

 private:
  std::string origin_;
  std::string prefix_;
  std::chrono::milliseconds timeout_;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{30000};
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;
Sleeper real_sleeper();

/// 408, 429, 5xx and transport failures.
bool is_retryable(int status);

/// Posts until a 2xx answer, sleeping initial_backoff * multiplier^k between
/// attempts. Throws BackendError on a non-retryable status or when attempts
/// run out.
HttpResponse post_with_retry(HttpTransport& transport, const std::string& path, const std::string& body,
                             const HttpHeaders& headers, const RetryPolicy& policy, const Sleeper& sleep);

}  // namespace feedsim::gen
