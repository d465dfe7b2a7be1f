#include "bbr/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace bbr {

std::string config_hash(const nlohmann::json& config) {
  const std::string s = config.dump();  // nlohmann objects iterate sorted by key
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_float(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

namespace {
std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}
std::string stamp(const std::string& hash) {
  return std::string("bbrlab=") + kVersion + " config=" + hash;
}
}  // namespace

void write_csv(const CsvTable& table, const std::string& path, const std::string& hash) {
  auto out = open_or_throw(path);
  out << "# " << stamp(hash) << "\n";
  for (std::size_t i = 0; i < table.header.size(); ++i)
    out << table.header[i] << (i + 1 < table.header.size() ? "," : "");
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
}

void write_json(const nlohmann::json& j, const std::string& path, const std::string& hash) {
  nlohmann::json full = j;
  full["bbrlab_version"] = kVersion;
  full["config_hash"] = hash;
  auto out = open_or_throw(path);
  out << full.dump(2) << "\n";
}

namespace {

struct Box {
  double x0, y0, x1, y1;
};

double map_x(double v, double lo, double hi, const Box& b) {
  return b.x0 + (v - lo) / (hi - lo) * (b.x1 - b.x0);
}
double map_y(double v, double lo, double hi, const Box& b) {
  return b.y1 - (v - lo) / (hi - lo) * (b.y1 - b.y0);
}

}  // namespace

void write_svg_scatter(std::span<const std::array<double, 2>> pts, double slope,
                       double intercept, const std::string& title, const std::string& path,
                       const std::string& hash) {
  auto out = open_or_throw(path);
  double xlo = std::numeric_limits<double>::max(), xhi = -xlo;
  double ylo = xlo, yhi = -xlo;
  for (const auto& [x, y] : pts) {
    xlo = std::min(xlo, x);
    xhi = std::max(xhi, x);
    ylo = std::min(ylo, y);
    yhi = std::max(yhi, y);
  }
  if (pts.empty()) {
    xlo = ylo = 0;
    xhi = yhi = 1;
  }
  const double padx = 0.08 * (xhi - xlo + 1e-9), pady = 0.15 * (yhi - ylo + 1e-9);
  xlo -= padx;
  xhi += padx;
  ylo -= pady;
  yhi += pady;
  const Box b{60, 40, 560, 380};
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"620\" height=\"430\">\n";
  out << "<!-- " << stamp(hash) << " -->\n";
  out << "<rect x=\"" << b.x0 << "\" y=\"" << b.y0 << "\" width=\"" << b.x1 - b.x0
      << "\" height=\"" << b.y1 - b.y0 << "\" fill=\"white\" stroke=\"black\"/>\n";
  out << "<text x=\"60\" y=\"25\" font-size=\"14\">" << title << "</text>\n";
  out << "<text x=\"250\" y=\"415\" font-size=\"12\">log2 x</text>\n";
  out << "<text x=\"12\" y=\"210\" font-size=\"12\" transform=\"rotate(-90 12 210)\">log2 y</text>\n";
  // fitted line across the x-range
  const double fy0 = slope * xlo + intercept, fy1 = slope * xhi + intercept;
  out << "<line x1=\"" << map_x(xlo, xlo, xhi, b) << "\" y1=\"" << map_y(fy0, ylo, yhi, b)
      << "\" x2=\"" << map_x(xhi, xlo, xhi, b) << "\" y2=\"" << map_y(fy1, ylo, yhi, b)
      << "\" stroke=\"#c44\" stroke-width=\"1.5\"/>\n";
  for (const auto& [x, y] : pts)
    out << "<circle cx=\"" << map_x(x, xlo, xhi, b) << "\" cy=\"" << map_y(y, ylo, yhi, b)
        << "\" r=\"4\" fill=\"#246\"/>\n";
  char lbl[96];
  std::snprintf(lbl, sizeof lbl, "slope = %.4f", slope);
  out << "<text x=\"420\" y=\"60\" font-size=\"12\" fill=\"#c44\">" << lbl << "</text>\n";
  out << "</svg>\n";
}

void write_svg_region_map(std::span<const RegionCell> cells,
                          std::span<const std::array<double, 2>> curve_thm,
                          std::span<const std::array<double, 2>> curve_prior,
                          const std::string& title, const std::string& path,
                          const std::string& hash) {
  auto out = open_or_throw(path);
  const Box bm{50, 50, 370, 370};   // region map of [0,1/2]^2
  const Box bc{430, 50, 750, 370};  // diagonal curves
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"430\">\n";
  out << "<!-- " << stamp(hash) << " -->\n";
  out << "<text x=\"50\" y=\"25\" font-size=\"14\">" << title << "</text>\n";
  const char* fills[3] = {"#9ec9e8", "#f4b183", "#c6e0b4"};
  double cell = 0.5;
  if (cells.size() >= 4) {
    // infer lattice pitch from the data
    double second = 1.0;
    for (const auto& c : cells)
      if (c.u > 0.0) {
        second = std::min(second, c.u);
      }
    cell = second;
  }
  for (const auto& c : cells) {
    const double px = map_x(c.u, 0.0, 0.5, bm);
    const double py = map_y(c.v, 0.0, 0.5, bm);
    const double w = (bm.x1 - bm.x0) * cell / 0.5;
    out << "<rect x=\"" << px - w / 2 << "\" y=\"" << py - w / 2 << "\" width=\"" << w
        << "\" height=\"" << w << "\" fill=\"" << fills[(c.region - 1) % 3]
        << "\" stroke=\"none\"/>\n";
  }
  out << "<rect x=\"" << bm.x0 << "\" y=\"" << bm.y0 << "\" width=\"" << bm.x1 - bm.x0
      << "\" height=\"" << bm.y1 - bm.y0 << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"190\" y=\"395\" font-size=\"12\">u = 1/p</text>\n";
  out << "<text x=\"20\" y=\"220\" font-size=\"12\" transform=\"rotate(-90 20 220)\">v = 1/q</text>\n";

  double ahi = 0.0;
  for (const auto& [u, a] : curve_thm) {
    (void)u;
    ahi = std::max(ahi, a);
  }
  for (const auto& [u, a] : curve_prior) {
    (void)u;
    ahi = std::max(ahi, a);
  }
  ahi = std::max(ahi, 1e-6) * 1.05;
  auto polyline = [&](std::span<const std::array<double, 2>> c, const char* color) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [u, a] : c)
      out << map_x(u, 0.0, 0.5, bc) << "," << map_y(a, 0.0, ahi, bc) << " ";
    out << "\"/>\n";
  };
  polyline(curve_thm, "#246");
  polyline(curve_prior, "#c44");
  out << "<rect x=\"" << bc.x0 << "\" y=\"" << bc.y0 << "\" width=\"" << bc.x1 - bc.x0
      << "\" height=\"" << bc.y1 - bc.y0 << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<text x=\"560\" y=\"395\" font-size=\"12\">1/p (diagonal p = q)</text>\n";
  out << "<text x=\"640\" y=\"70\" font-size=\"12\" fill=\"#246\">this bound</text>\n";
  out << "<text x=\"640\" y=\"88\" font-size=\"12\" fill=\"#c44\">prior bound</text>\n";
  out << "</svg>\n";
}

}  // namespace bbr
