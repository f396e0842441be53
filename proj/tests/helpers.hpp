#pragma once

#include "defectbench/dataset.hpp"
#include "rng.hpp"

#include <filesystem>
#include <fstream>
#include <string>

namespace testutil {

inline std::filesystem::path source_dir() { return DEFECTBENCH_SOURCE_DIR; }
inline std::filesystem::path fixture(const std::string& name) { return source_dir() / "data" / "fixtures" / name; }

// Two Gaussian blobs; positives are shifted by `shift` along every axis.
inline defectbench::data::Dataset blobs(std::size_t n_pos, std::size_t n_neg, std::size_t p, double shift,
                                        std::uint64_t seed) {
  defectbench::detail::Rng rng(seed);
  defectbench::data::Dataset d;
  d.name = "blobs";
  const auto n = n_pos + n_neg;
  d.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < n; ++i) {
    const bool pos = i < n_pos;
    for (std::size_t j = 0; j < p; ++j)
      d.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rng.normal() + (pos ? shift : 0.0);
    d.labels.push_back(pos ? 1 : -1);
  }
  for (std::size_t j = 0; j < p; ++j) d.feature_names.push_back("f" + std::to_string(j));
  d.synthetic.assign(n, 0);
  return d;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("defectbench_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace testutil
