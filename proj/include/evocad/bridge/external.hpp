#pragma once

// Subprocess bridge to an out-of-process CAD script runner speaking NDJSON:
//   request  {"id": int, "code": str, "timeout_s": float, "out_dir": str}
//   response {"id": int, "ok": bool, "stl_path": str?, "error": str?}

#include "evocad/bridge/engine.hpp"
#include "evocad/geometry/stl.hpp"

#include <json.hpp>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <csignal>
#include <cstring>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <poll.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

namespace evocad::bridge {

inline constexpr std::chrono::milliseconds kDefaultScriptTimeout{30'000};
inline constexpr int kDefaultRunnerCount = 2;

struct ExternalConfig {
  std::vector<std::string> command; ///< argv of the runner, argv[0] looked up in PATH
  std::filesystem::path out_dir;
  int runners = kDefaultRunnerCount;
  std::chrono::milliseconds timeout = kDefaultScriptTimeout;
  lm::CadLanguage language = lm::cadquery_language();
};

namespace detail {

/// One live runner process. stdin and stdout are the same socket.
class RunnerProcess {
public:
  explicit RunnerProcess(const std::vector<std::string> &argv) {
    if (argv.empty())
      throw ConfigError("runner command is empty");
    int sv[2];
    if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0)
      throw IoError(std::string("socketpair: ") + std::strerror(errno));
    std::vector<char *> args;
    for (const auto &a : argv)
      args.push_back(const_cast<char *>(a.c_str()));
    args.push_back(nullptr);
    pid_ = ::fork();
    if (pid_ < 0) {
      ::close(sv[0]);
      ::close(sv[1]);
      throw IoError(std::string("fork: ") + std::strerror(errno));
    }
    if (pid_ == 0) {
      ::dup2(sv[1], 0);
      ::dup2(sv[1], 1);
      ::execvp(args[0], args.data());
      ::_exit(127);
    }
    ::close(sv[1]);
    fd_ = sv[0];
  }

  RunnerProcess(const RunnerProcess &) = delete;
  RunnerProcess &operator=(const RunnerProcess &) = delete;

  ~RunnerProcess() { kill(); }

  void kill() noexcept {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
    if (pid_ > 0) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, nullptr, 0);
      pid_ = -1;
    }
  }

  enum class Status { Line, Timeout, Closed };

  bool send_line(const std::string &line) {
    std::size_t done = 0;
    while (done < line.size()) {
      const auto n = ::send(fd_, line.data() + done, line.size() - done, MSG_NOSIGNAL);
      if (n < 0 && errno == EINTR)
        continue;
      if (n <= 0)
        return false;
      done += static_cast<std::size_t>(n);
    }
    return true;
  }

  Status read_line(std::string &line, std::chrono::steady_clock::time_point deadline) {
    for (;;) {
      if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
        line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return Status::Line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0)
        return Status::Timeout;
      pollfd p{fd_, POLLIN, 0};
      const int r = ::poll(&p, 1, static_cast<int>(left.count()));
      if (r < 0 && errno == EINTR)
        continue;
      if (r == 0)
        return Status::Timeout;
      char chunk[4096];
      const auto n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n < 0 && errno == EINTR)
        continue;
      if (n <= 0)
        return Status::Closed;
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

private:
  pid_t pid_ = -1;
  int fd_ = -1;
  std::string buffer_;
};

} // namespace detail

/// Pool of runner processes, one request at a time per process.
class ExternalEngine final : public Engine {
public:
  explicit ExternalEngine(ExternalConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.runners < 1)
      throw ConfigError("need at least one runner process");
    if (cfg_.command.empty())
      throw ConfigError("runner command is empty");
    std::filesystem::create_directories(cfg_.out_dir);
    slots_.resize(static_cast<std::size_t>(cfg_.runners));
    spawned_.assign(slots_.size(), 0);
    for (std::size_t i = 0; i < slots_.size(); ++i)
      free_.push_back(i);
  }

  lm::CadLanguage language() const override { return cfg_.language; }

  RenderResult render(std::string_view code) override {
    std::size_t slot;
    long id;
    {
      std::unique_lock lock(mutex_);
      available_.wait(lock, [&] { return !free_.empty(); });
      slot = free_.back();
      free_.pop_back();
      id = next_id_++;
    }
    RenderResult out = RenderResult::failure("runner not started");
    try {
      out = render_on(slot, id, code);
    } catch (const std::exception &e) {
      slots_[slot].reset();
      out = RenderResult::failure(std::string("runner: ") + e.what());
    }
    {
      std::lock_guard lock(mutex_);
      free_.push_back(slot);
    }
    available_.notify_one();
    return out;
  }

  long restarts() const noexcept { return restarts_.load(); }

private:
  RenderResult render_on(std::size_t slot, long id, std::string_view code) {
    const nlohmann::json req{{"id", id},
                             {"code", code},
                             {"timeout_s", std::chrono::duration<double>(cfg_.timeout).count()},
                             {"out_dir", cfg_.out_dir.string()}};
    const std::string line = req.dump() + "\n";
    const auto deadline = std::chrono::steady_clock::now() + cfg_.timeout;

    for (int attempt = 0; attempt < 2; ++attempt) {
      auto &runner = slots_[slot];
      if (!runner) {
        if (spawned_[slot])
          ++restarts_;
        runner = std::make_unique<detail::RunnerProcess>(cfg_.command);
        spawned_[slot] = 1;
      }
      std::string reply;
      auto status = runner->send_line(line) ? runner->read_line(reply, deadline)
                                            : detail::RunnerProcess::Status::Closed;
      if (status == detail::RunnerProcess::Status::Timeout) {
        runner.reset();
        return RenderResult::failure("timeout");
      }
      if (status == detail::RunnerProcess::Status::Closed) {
        runner.reset();
        continue;
      }
      return interpret(slot, id, reply);
    }
    return RenderResult::failure("runner crashed twice while running the script");
  }

  RenderResult interpret(std::size_t slot, long id, const std::string &reply) {
    const auto j = nlohmann::json::parse(reply, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j.contains("ok") ||
        !j["ok"].is_boolean()) {
      slots_[slot].reset();
      return RenderResult::failure("protocol: malformed runner response");
    }
    if (!j["id"].is_number_integer() || j["id"].get<long>() != id) {
      slots_[slot].reset();
      return RenderResult::failure("protocol: response id does not match request " +
                                   std::to_string(id));
    }
    if (!j["ok"].get<bool>()) {
      const std::string err = j.contains("error") && j["error"].is_string() ? j["error"].get<std::string>() : "";
      return RenderResult::failure(err.empty() ? "runner reported failure without a message" : err);
    }
    if (!j.contains("stl_path") || !j["stl_path"].is_string())
      return RenderResult::failure("protocol: ok response without stl_path");
    const std::string path = j["stl_path"].get<std::string>();
    try {
      return RenderResult::success(load_stl_file(path), path);
    } catch (const std::exception &e) {
      return RenderResult::failure(std::string("export: ") + e.what());
    }
  }

  ExternalConfig cfg_;
  std::vector<std::unique_ptr<detail::RunnerProcess>> slots_;
  std::vector<char> spawned_;
  std::vector<std::size_t> free_;
  std::mutex mutex_;
  std::condition_variable available_;
  long next_id_ = 1;
  std::atomic<long> restarts_{0};
};

} // namespace evocad::bridge
