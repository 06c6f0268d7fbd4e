#pragma once

#include "evocad/geometry/stl.hpp"

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

namespace evocad::harness {

/// One benchmark entry: <root>/<id>/prompt.txt and <root>/<id>/ground_truth.stl.
struct Sample {
  std::string id;
  std::string prompt;
  TriMesh ground_truth;
  std::filesystem::path source;
};

inline constexpr const char *kPromptFile = "prompt.txt";
inline constexpr const char *kGroundTruthFile = "ground_truth.stl";

/// Samples sorted by id. Directories that do not form a sample are skipped and
/// described in `warnings`.
inline std::vector<Sample> load_dataset(const std::filesystem::path &root,
                                        std::vector<std::string> *warnings = nullptr) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root))
    throw IoError("dataset root is not a directory: " + root.string());
  const auto warn = [&](std::string w) {
    if (warnings)
      warnings->push_back(std::move(w));
  };
  std::vector<fs::path> dirs;
  for (const auto &e : fs::directory_iterator(root))
    if (e.is_directory())
      dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());

  std::vector<Sample> out;
  for (const auto &dir : dirs) {
    const auto id = dir.filename().string();
    if (!fs::is_regular_file(dir / kPromptFile) || !fs::is_regular_file(dir / kGroundTruthFile)) {
      warn(id + ": missing " + (fs::is_regular_file(dir / kPromptFile) ? kGroundTruthFile : kPromptFile));
      continue;
    }
    std::string prompt = read_file_bytes(dir / kPromptFile);
    while (!prompt.empty() && (prompt.back() == '\n' || prompt.back() == '\r' || prompt.back() == ' '))
      prompt.pop_back();
    if (prompt.empty()) {
      warn(id + ": empty prompt");
      continue;
    }
    try {
      out.push_back({id, std::move(prompt), load_stl_file(dir / kGroundTruthFile), dir});
    } catch (const Error &e) {
      warn(id + ": " + e.what());
    }
  }
  if (out.empty())
    throw EmptyDataset("no samples under " + root.string());
  return out;
}

/// Writes one sample in the dataset layout; any (prompt, mesh) source can be imported this way.
inline void write_sample(const std::filesystem::path &root, const std::string &id,
                         const std::string &prompt, const TriMesh &ground_truth) {
  const auto dir = root / id;
  std::filesystem::create_directories(dir);
  std::ofstream(dir / kPromptFile, std::ios::binary) << prompt << "\n";
  write_stl_file(ground_truth, dir / kGroundTruthFile);
}

} // namespace evocad::harness
