#include "feketelab/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace feketelab {

namespace {

std::string format_tol(double tol) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << tol;
  return os.str();
}

}  // namespace

std::filesystem::path fekete_cache_path(const std::filesystem::path& dir,
                                        const FeketeCacheKey& key) {
  std::ostringstream name;
  name << "fekete_" << key.potential << "_n" << key.n << "_seed" << key.seed
       << "_tol" << format_tol(key.grad_tol) << ".json";
  return dir / name.str();
}

std::optional<FeketeResult> load_fekete_cache(const std::filesystem::path& dir,
                                              const FeketeCacheKey& key) {
  const auto path = fekete_cache_path(dir, key);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
  if (!j.contains("points") || j.value("n", -1) != key.n) return std::nullopt;
  FeketeResult result;
  const auto& pts = j["points"];
  result.config.points.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    result.config.points[i] =
        Complex(pts[i][0].get<double>(), pts[i][1].get<double>());
  result.energy = j.value("energy", 0.0);
  result.first_order_residual = j.value("residual", 0.0);
  result.grad_inf_norm = j.value("grad_inf_norm", 0.0);
  result.iterations = j.value("iterations", 0);
  result.restart_index = j.value("restart_index", 0);
  return result;
}

void store_fekete_cache(const std::filesystem::path& dir,
                        const FeketeCacheKey& key,
                        const FeketeResult& result) {
  std::filesystem::create_directories(dir);
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["potential"] = key.potential;
  j["n"] = key.n;
  j["seed"] = key.seed;
  j["grad_tol"] = key.grad_tol;
  auto pts = nlohmann::json::array();
  for (int i = 0; i < result.config.n(); ++i)
    pts.push_back({result.config.points[i].real(),
                   result.config.points[i].imag()});
  j["points"] = std::move(pts);
  j["energy"] = result.energy;
  j["residual"] = result.first_order_residual;
  j["grad_inf_norm"] = result.grad_inf_norm;
  j["iterations"] = result.iterations;
  j["restart_index"] = result.restart_index;
  std::ofstream out(fekete_cache_path(dir, key));
  out << j.dump(2) << "\n";
}

std::filesystem::path resolve_cache_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("FEKETE_LAB_CACHE"); env && *env)
    return env;
  return ".fekete-cache";
}

FeketeResult solve_fekete_cached(int n, const PotentialModel& model,
                                 const OptimizerSettings& settings,
                                 const std::filesystem::path& cache_dir) {
  const FeketeCacheKey key{model.name, n, settings.rng_seed,
                           settings.grad_tol};
  if (auto cached = load_fekete_cache(cache_dir, key)) return *cached;
  FeketeResult result = solve_fekete(n, model, settings);
  store_fekete_cache(cache_dir, key, result);
  return result;
}

struct CsvWriter::Impl {
  std::ofstream out;
};

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header,
                     const std::string& manifest_ref)
    : impl_(new Impl) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  impl_->out.open(path);
  impl_->out << "# manifest: " << manifest_ref << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    impl_->out << header[i] << (i + 1 < header.size() ? "," : "\n");
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<double>& values) {
  auto& out = impl_->out;
  out << std::setprecision(17);
  for (std::size_t i = 0; i < values.size(); ++i)
    out << values[i] << (i + 1 < values.size() ? "," : "\n");
}

namespace {

struct Extent {
  double lo = 0.0, hi = 1.0;
  void grow(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

}  // namespace

void write_svg_plot(const std::filesystem::path& path,
                    const std::vector<SvgSeries>& series,
                    const std::string& title, const std::string& x_label,
                    const std::string& y_label) {
  const int W = 640, H = 420, ml = 60, mr = 20, mt = 40, mb = 50;
  Extent ex, ey;
  bool have = false;
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!have) {
        ex.lo = ex.hi = s.x[i];
        ey.lo = ey.hi = s.y[i];
        have = true;
      }
      ex.grow(s.x[i]);
      ey.grow(s.y[i]);
    }
  if (ex.hi == ex.lo) ex.hi = ex.lo + 1.0;
  if (ey.hi == ey.lo) ey.hi = ey.lo + 1.0;
  auto px = [&](double x) {
    return ml + (x - ex.lo) / (ex.hi - ex.lo) * (W - ml - mr);
  };
  auto py = [&](double y) {
    return H - mb - (y - ey.lo) / (ey.hi - ey.lo) * (H - mt - mb);
  };

  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  out << std::setprecision(8);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W
      << "' height='" << H << "'>\n";
  out << "<rect width='" << W << "' height='" << H << "' fill='white'/>\n";
  out << "<text x='" << W / 2 << "' y='20' text-anchor='middle' "
      << "font-family='sans-serif' font-size='14'>" << title << "</text>\n";
  // axes
  out << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr
      << "' y2='" << H - mb << "' stroke='black'/>\n";
  out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
      << H - mb << "' stroke='black'/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = ex.lo + (ex.hi - ex.lo) * t / 4;
    const double yv = ey.lo + (ey.hi - ey.lo) * t / 4;
    out << "<text x='" << px(xv) << "' y='" << H - mb + 18
        << "' text-anchor='middle' font-family='sans-serif' font-size='11'>"
        << xv << "</text>\n";
    out << "<text x='" << ml - 8 << "' y='" << py(yv) + 4
        << "' text-anchor='end' font-family='sans-serif' font-size='11'>"
        << yv << "</text>\n";
  }
  out << "<text x='" << (ml + W - mr) / 2 << "' y='" << H - 12
      << "' text-anchor='middle' font-family='sans-serif' font-size='12'>"
      << x_label << "</text>\n";
  out << "<text x='16' y='" << (mt + H - mb) / 2
      << "' text-anchor='middle' font-family='sans-serif' font-size='12' "
      << "transform='rotate(-90 16 " << (mt + H - mb) / 2 << ")'>" << y_label
      << "</text>\n";
  for (const auto& s : series) {
    out << "<polyline fill='none' stroke='" << s.color
        << "' stroke-width='1.5' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << px(s.x[i]) << "," << py(s.y[i]) << " ";
    out << "'/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << "<circle cx='" << px(s.x[i]) << "' cy='" << py(s.y[i])
          << "' r='2.5' fill='" << s.color << "'/>\n";
  }
  out << "</svg>\n";
}

void write_manifest(const std::filesystem::path& path,
                    const std::string& command,
                    const std::vector<std::pair<std::string, std::string>>&
                        params) {
  nlohmann::json j;
  j["schema"] = kSchemaVersion;
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  for (const auto& [k, v] : params) j["params"][k] = v;
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

}  // namespace feketelab
