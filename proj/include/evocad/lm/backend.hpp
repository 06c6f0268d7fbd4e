#pragma once

#include "evocad/lm/message.hpp"

#include <atomic>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <span>
#include <string>

namespace evocad::lm {

/// A chat-completion service. Implementations must accept concurrent calls.
/// Transport failures surface as BackendError.
class Backend {
public:
  virtual ~Backend() = default;
  virtual std::string complete(std::span<const ChatMessage> messages,
                               const ModelRoleConfig &cfg) = 0;
  virtual std::string identity() const = 0;
};

inline constexpr int kDefaultInFlightCap = 4;

/// Caps concurrent calls into a backend and counts them.
class Gateway final : public Backend {
public:
  explicit Gateway(std::shared_ptr<Backend> inner, int max_in_flight = kDefaultInFlightCap)
      : inner_(std::move(inner)), cap_(max_in_flight < 1 ? 1 : max_in_flight) {}

  std::string complete(std::span<const ChatMessage> messages,
                       const ModelRoleConfig &cfg) override {
    {
      std::unique_lock lock(mutex_);
      slots_.wait(lock, [&] { return in_flight_ < cap_; });
      ++in_flight_;
      peak_ = std::max(peak_, in_flight_);
    }
    ++calls_;
    struct Release {
      Gateway *g;
      ~Release() {
        {
          std::lock_guard lock(g->mutex_);
          --g->in_flight_;
        }
        g->slots_.notify_one();
      }
    } release{this};
    return inner_->complete(messages, cfg);
  }

  std::string identity() const override { return inner_->identity(); }

  long calls() const noexcept { return calls_.load(); }
  int peak_in_flight() const {
    std::lock_guard lock(mutex_);
    return peak_;
  }

private:
  std::shared_ptr<Backend> inner_;
  int cap_;
  mutable std::mutex mutex_;
  std::condition_variable slots_;
  int in_flight_ = 0;
  int peak_ = 0;
  std::atomic<long> calls_{0};
};

/// Backend plus call settings for one model role.
struct RoleBinding {
  std::shared_ptr<Backend> backend;
  ModelRoleConfig config;

  std::string complete(std::span<const ChatMessage> messages) const {
    return backend->complete(messages, config);
  }
};

struct Backends {
  RoleBinding generator;
  RoleBinding describer;
  RoleBinding ranker;
};

} // namespace evocad::lm
