#pragma once

// Output plumbing shared by the CLI and tests: CSV with an embedded
// version/config-hash comment line, JSON summaries, config hashing, and
// small self-contained SVG plots.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace bbr {

inline constexpr const char* kVersion = "0.1.0";

// FNV-1a over the canonical (sorted-key) JSON dump.
std::string config_hash(const nlohmann::json& config);

// Floats with 12 significant digits; "inf" for infinities.
std::string format_float(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// First line is "# bbrlab=<version> config=<hash>", then the header row.
void write_csv(const CsvTable& table, const std::string& path, const std::string& hash);

void write_json(const nlohmann::json& j, const std::string& path, const std::string& hash);

// Log-log scatter plot with a fitted line.
void write_svg_scatter(std::span<const std::array<double, 2>> log2_points, double slope,
                       double intercept, const std::string& title, const std::string& path,
                       const std::string& hash);

// Region map over the unit square of (u, v) plus a diagonal-curve panel.
struct RegionCell {
  double u, v;
  int region;  // 1..3
  double alpha;
};
void write_svg_region_map(std::span<const RegionCell> cells,
                          std::span<const std::array<double, 2>> curve_thm,
                          std::span<const std::array<double, 2>> curve_prior,
                          const std::string& title, const std::string& path,
                          const std::string& hash);

}  // namespace bbr
