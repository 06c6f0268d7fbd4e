#pragma once

#include "evocad/lm/backend.hpp"
#include "evocad/render/png.hpp"

#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <string>
#include <thread>

namespace evocad::lm {

inline std::string base64_encode(std::span<const std::uint8_t> bytes) {
  static constexpr char table[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += table[v >> 18];
    out += table[(v >> 12) & 63];
    out += table[(v >> 6) & 63];
    out += table[v & 63];
  }
  if (const auto rest = bytes.size() - i; rest > 0) {
    std::uint32_t v = bytes[i] << 16;
    if (rest == 2)
      v |= bytes[i + 1] << 8;
    out += table[v >> 18];
    out += table[(v >> 12) & 63];
    out += rest == 2 ? table[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

/// How an image part is spelled inside a message's content list.
enum class ImagePart {
  Inline,  ///< {"type":"image","media_type":"image/png","data":<base64>}
  DataUrl, ///< {"type":"image_url","image_url":{"url":"data:image/png;base64,..."}}
};

struct WireConfig {
  std::string base_url = "http://127.0.0.1:8080/v1";
  std::string api_key_env = "EVOCAD_API_KEY";
  std::chrono::milliseconds backoff_base{500};
  ImagePart image_part = ImagePart::Inline;
};

/// Chat-completion client. Retries transport failures, 429 and 5xx with
/// exponential backoff; everything else is reported at once.
class WireBackend final : public Backend {
public:
  explicit WireBackend(WireConfig cfg) : cfg_(std::move(cfg)) {
    const auto scheme_end = cfg_.base_url.find("://");
    const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    const auto path_start = cfg_.base_url.find('/', host_start);
    origin_ = cfg_.base_url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "" : cfg_.base_url.substr(path_start);
    while (!path_.empty() && path_.back() == '/')
      path_.pop_back();
    path_ += "/chat/completions";
  }

  std::string identity() const override { return "wire:" + cfg_.base_url; }

  static nlohmann::json request_body(std::span<const ChatMessage> messages,
                                     const ModelRoleConfig &rc,
                                     ImagePart style = ImagePart::Inline) {
    nlohmann::json msgs = nlohmann::json::array();
    for (const auto &m : messages) {
      nlohmann::json content = nlohmann::json::array();
      if (!m.text.empty())
        content.push_back({{"type", "text"}, {"text", m.text}});
      for (const auto &img : m.images) {
        const auto png = encode_png(img);
        const auto b64 = base64_encode(png);
        if (style == ImagePart::Inline)
          content.push_back({{"type", "image"}, {"media_type", "image/png"}, {"data", b64}});
        else
          content.push_back({{"type", "image_url"},
                             {"image_url", {{"url", "data:image/png;base64," + b64}}}});
      }
      msgs.push_back({{"role", to_string(m.role)}, {"content", std::move(content)}});
    }
    return {{"model", rc.model_name}, {"temperature", rc.temperature}, {"messages", msgs}};
  }

  /// Text of choices[0].message.content. Throws BackendError on any other shape.
  static std::string response_text(std::string_view body) {
    const auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded())
      throw BackendError("response is not JSON");
    const auto *content = [&]() -> const nlohmann::json * {
      if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty())
        return nullptr;
      const auto &c = j["choices"][0];
      if (!c.contains("message") || !c["message"].contains("content"))
        return nullptr;
      return &c["message"]["content"];
    }();
    if (!content)
      throw BackendError("response lacks choices[0].message.content");
    if (content->is_string())
      return content->get<std::string>();
    if (content->is_array()) {
      std::string text;
      for (const auto &part : *content)
        if (part.value("type", "") == "text")
          text += part.value("text", "");
      return text;
    }
    throw BackendError("message content has an unexpected type");
  }

  std::string complete(std::span<const ChatMessage> messages,
                       const ModelRoleConfig &rc) override {
    const std::string body = request_body(messages, rc, cfg_.image_part).dump();
    httplib::Headers headers;
    if (const char *key = std::getenv(cfg_.api_key_env.c_str()); key && *key)
      headers.emplace("Authorization", std::string("Bearer ") + key);

    std::string last_error;
    for (int attempt = 0; attempt <= rc.max_retries; ++attempt) {
      if (attempt > 0)
        std::this_thread::sleep_for(cfg_.backoff_base * (1 << (attempt - 1)));
      httplib::Client client(origin_);
      const auto secs = std::chrono::duration_cast<std::chrono::seconds>(rc.timeout);
      const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(rc.timeout - secs);
      client.set_connection_timeout(secs.count(), usecs.count());
      client.set_read_timeout(secs.count(), usecs.count());
      client.set_write_timeout(secs.count(), usecs.count());
      auto res = client.Post(path_, headers, body, "application/json");
      if (!res) {
        last_error = "transport: " + httplib::to_string(res.error());
        continue;
      }
      if (res->status == 429 || res->status >= 500) {
        last_error = "HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status != 200)
        throw BackendError("HTTP " + std::to_string(res->status) + ": " + res->body);
      return response_text(res->body);
    }
    throw BackendError("gave up after " + std::to_string(rc.max_retries + 1) +
                       " attempts, last error " + last_error);
  }

private:
  WireConfig cfg_;
  std::string origin_;
  std::string path_;
};

} // namespace evocad::lm
