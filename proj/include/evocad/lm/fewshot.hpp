#pragma once

#include "evocad/geometry/stl.hpp"
#include "evocad/lm/prompts.hpp"
#include "evocad/random.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <vector>

namespace evocad::lm {

/// Directory of example programs, one per file, kept in file-name order.
class FewShotStore {
public:
  FewShotStore() = default;
  explicit FewShotStore(std::vector<FewShot> shots) : shots_(std::move(shots)) {}

  static FewShotStore load_dir(const std::filesystem::path &dir) {
    if (!std::filesystem::is_directory(dir))
      throw IoError("few-shot directory not found: " + dir.string());
    std::vector<FewShot> shots;
    for (const auto &e : std::filesystem::directory_iterator(dir)) {
      if (!e.is_regular_file() || e.path().filename().string().starts_with("."))
        continue;
      shots.push_back({e.path().filename().string(), read_file_bytes(e.path())});
    }
    std::sort(shots.begin(), shots.end(),
              [](const FewShot &a, const FewShot &b) { return a.name < b.name; });
    return FewShotStore(std::move(shots));
  }

  std::size_t size() const noexcept { return shots_.size(); }
  const std::vector<FewShot> &shots() const noexcept { return shots_; }

  /// k distinct shots in draw order.
  std::vector<FewShot> sample(std::size_t k, Rng &rng) const {
    if (k > shots_.size())
      throw ConstraintError("asked for " + std::to_string(k) + " few-shot samples, corpus has " +
                            std::to_string(shots_.size()));
    std::vector<std::size_t> idx(shots_.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<FewShot> out;
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
      out.push_back(shots_[idx[i]]);
    }
    return out;
  }

private:
  std::vector<FewShot> shots_;
};

} // namespace evocad::lm
