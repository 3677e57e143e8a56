#include "feedsim/backend.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "feedsim/errors.hpp"

namespace feedsim::gen {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(prefix[i]))) {
      return false;
    }
  }
  return true;
}

std::optional<long> parse_int(std::string_view s) {
  s = trim(s);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

std::optional<std::pair<int, std::string>> parse_choice(std::string_view raw, std::size_t options) {
  std::optional<long> choice;
  std::optional<std::string> text;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    const std::size_t end = std::min(raw.find('\n', pos), raw.size());
    const std::string_view line = trim(raw.substr(pos, end - pos));
    if (!choice && starts_with_ci(line, "CHOICE:")) {
      choice = parse_int(line.substr(7));
      if (!choice) return std::nullopt;
    } else if (choice && starts_with_ci(line, "TEXT:")) {
      const std::size_t start = raw.find(':', pos) + 1;
      text = std::string(trim(raw.substr(start)));
      break;
    }
    pos = end + 1;
  }
  if (!choice || !text || text->empty()) return std::nullopt;
  if (*choice < 1 || static_cast<std::size_t>(*choice) > options) return std::nullopt;
  return std::make_pair(static_cast<int>(*choice), std::move(*text));
}

std::vector<std::optional<bool>> parse_likes(std::string_view raw, std::size_t count) {
  std::vector<std::optional<bool>> out(count);
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    const std::size_t end = std::min(raw.find('\n', pos), raw.size());
    const std::string_view line = trim(raw.substr(pos, end - pos));
    pos = end + 1;
    if (!starts_with_ci(line, "LIKE")) continue;
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    const auto index = parse_int(line.substr(4, colon - 4));
    if (!index || *index < 1 || static_cast<std::size_t>(*index) > count) continue;
    const std::string answer = lower(trim(line.substr(colon + 1)));
    if (answer == "yes") {
      out[*index - 1] = true;
    } else if (answer == "no") {
      out[*index - 1] = false;
    }
  }
  return out;
}

std::optional<ParsedResponse> parse_response(const GenerationRequest& request, std::string_view raw) {
  switch (request.kind) {
    case PromptKind::FirstPost: {
      auto c = parse_choice(raw, request.stories.size());
      if (!c) return std::nullopt;
      return PostChoice{c->first, std::move(c->second)};
    }
    case PromptKind::Comment: {
      auto c = parse_choice(raw, request.shown.size());
      if (!c) return std::nullopt;
      return CommentChoice{request.shown[c->first - 1].id, c->first, std::move(c->second)};
    }
    case PromptKind::LikeBatch: {
      const auto d = parse_likes(raw, request.shown.size());
      LikeDecisions out;
      for (const auto& v : d) {
        if (!v) return std::nullopt;
        out.liked.push_back(*v);
      }
      return out;
    }
    case PromptKind::Enrich:
      return EnrichText{std::string(trim(raw))};
  }
  return std::nullopt;
}

BackendResponse complete(Backend& backend, const GenerationRequest& request) {
  BackendResponse response;
  RawReply reply = backend.generate(request, request.rendered_prompt);
  response.latency_ms = reply.latency_ms;
  if (auto parsed = parse_response(request, reply.text)) {
    response.raw_text = std::move(reply.text);
    response.parsed = std::move(*parsed);
    return response;
  }

  const std::string strict = request.rendered_prompt + "\n\n" + std::string(kFormatReminder);
  reply = backend.generate(request, strict);
  response.attempts = 2;
  response.latency_ms += reply.latency_ms;
  response.raw_text = reply.text;
  if (auto parsed = parse_response(request, reply.text)) {
    response.parsed = std::move(*parsed);
    return response;
  }
  if (request.kind == PromptKind::LikeBatch) {
    LikeDecisions out;
    for (const auto& v : parse_likes(reply.text, request.shown.size())) {
      out.liked.push_back(v.value_or(false));
      if (!v) ++out.missing;
    }
    response.parsed = std::move(out);
    return response;
  }
  throw BackendError(std::string("unparseable ") + std::string(to_string(request.kind)) +
                     " answer after retry: " + std::string(trim(reply.text)).substr(0, 200));
}

}  // namespace feedsim::gen
