#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "feketelab/fekete.hpp"
#include "feketelab/types.hpp"

namespace feketelab {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

// Cache key for converged solves; reruns with the same key load the
// stored configuration byte-for-byte.
struct FeketeCacheKey {
  std::string potential;
  int n = 0;
  std::uint64_t seed = 0;
  double grad_tol = 0.0;
};

std::filesystem::path fekete_cache_path(const std::filesystem::path& dir,
                                        const FeketeCacheKey& key);
std::optional<FeketeResult> load_fekete_cache(const std::filesystem::path& dir,
                                              const FeketeCacheKey& key);
void store_fekete_cache(const std::filesystem::path& dir,
                        const FeketeCacheKey& key, const FeketeResult& result);

// Cache directory resolution: explicit flag, else FEKETE_LAB_CACHE, else
// ".fekete-cache" under the current directory.
std::filesystem::path resolve_cache_dir(const std::string& flag_value);

// Solve with cache: loads when the key exists, otherwise solves and
// stores the converged result.
FeketeResult solve_fekete_cached(int n, const PotentialModel& model,
                                 const OptimizerSettings& settings,
                                 const std::filesystem::path& cache_dir);

// Minimal CSV writer; every file gets a header row plus a manifest
// comment line so outputs are traceable.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& header,
            const std::string& manifest_ref);
  ~CsvWriter();
  void row(const std::vector<double>& values);

 private:
  struct Impl;
  Impl* impl_;
};

// Polyline plot with axes written as a standalone SVG.
struct SvgSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f6feb";
};
void write_svg_plot(const std::filesystem::path& path,
                    const std::vector<SvgSeries>& series,
                    const std::string& title, const std::string& x_label,
                    const std::string& y_label);

// Writes the run manifest (parameters + tool version) next to outputs.
void write_manifest(const std::filesystem::path& path,
                    const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>&
                        params);

}  // namespace feketelab
