#include "mm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace mm {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

ModelVariant variant_from(const std::string& s) {
  if (s == "lwr_ftl") return ModelVariant::LwrFtl;
  if (s == "ftl_lwr") return ModelVariant::FtlLwr;
  if (s == "general") return ModelVariant::General;
  throw ParseError("variant: expected lwr_ftl | ftl_lwr | general, got '" + s + "'");
}

std::string variant_name(ModelVariant v) {
  switch (v) {
    case ModelVariant::LwrFtl: return "lwr_ftl";
    case ModelVariant::FtlLwr: return "ftl_lwr";
    case ModelVariant::General: return "general";
  }
  return "general";
}

template <typename T>
T require(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) throw ParseError(path + key + ": missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(path + key + ": wrong type");
  }
}

void validate(const Scenario& sc) {
  if (sc.family != "greenshields")
    throw ParseError("speed_law.family: unknown family '" + sc.family + "'");
  if (!(sc.vmax > 0.0)) throw ParseError("speed_law.vmax: must be positive");
  if (!(sc.ell > 0.0)) throw ParseError("ell: must be positive");
  if (!(sc.grid.dx > 0.0)) throw ParseError("grid.dx: must be positive");
  if (!(sc.grid.x_min < sc.grid.x_max)) throw ParseError("grid: xmin must be < xmax");
  if (!(sc.cfl > 0.0 && sc.cfl <= 1.0)) throw ParseError("cfl: must be in (0,1]");
  if (!(sc.t_end >= 0.0)) throw ParseError("t_end: must be nonnegative");
  if (!(sc.output_every > 0.0)) throw ParseError("output_every: must be positive");

  if (sc.platoons.empty()) throw ParseError("platoons: at least one platoon required");
  if (sc.variant != ModelVariant::General && sc.platoons.size() != 1)
    throw ParseError("platoons: variant " + variant_name(sc.variant) +
                     " requires exactly one platoon");
  for (std::size_t j = 0; j < sc.platoons.size(); ++j) {
    const auto& p = sc.platoons[j];
    const std::string path = "platoons[" + std::to_string(j) + "]";
    if (p.size() < 2) throw ParseError(path + ": at least two vehicles required");
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
      if (!(p[i + 1] - p[i] >= sc.ell))
        throw ParseError(path + "[" + std::to_string(i + 1) + "]: spacing below ell");
    if (p.front() < sc.grid.x_min || p.back() > sc.grid.x_max)
      throw ParseError(path + ": outside the grid extent");
    if (j > 0 && !(sc.platoons[j - 1].back() < p.front()))
      throw ParseError(path + ": overlaps the previous platoon");
  }

  if (sc.variant != ModelVariant::LwrFtl && !sc.leader_w.breakpoints().empty() &&
      sc.leader_w.max_value() > 0.0)
    throw ParseError("leader_w: only meaningful for the lwr_ftl variant");
  for (const auto& [t, w] : sc.leader_w.breakpoints())
    if (!(w >= 0.0 && w <= sc.vmax))
      throw ParseError("leader_w: value outside [0, vmax]");

  std::vector<DensityPiece> sorted = sc.pieces;
  std::sort(sorted.begin(), sorted.end(),
            [](const DensityPiece& x, const DensityPiece& y) { return x.a < y.a; });
  for (std::size_t i = 0; i < sc.pieces.size(); ++i) {
    const auto& pc = sc.pieces[i];
    const std::string path = "density_pieces[" + std::to_string(i) + "]";
    if (!(pc.a < pc.b)) throw ParseError(path + ": empty or reversed interval");
    if (!(pc.value >= 0.0 && pc.value <= 1.0))
      throw ParseError(path + ": value outside [0,1]");
    if (pc.a < sc.grid.x_min || pc.b > sc.grid.x_max)
      throw ParseError(path + ": outside the grid extent");
    for (std::size_t j = 0; j < sc.platoons.size(); ++j)
      if (pc.b > sc.platoons[j].front() && pc.a < sc.platoons[j].back())
        throw ParseError(path + ": overlaps platoon " + std::to_string(j) + " span");
    if (sc.variant == ModelVariant::LwrFtl && pc.b > sc.platoons[0].front())
      throw ParseError(path + ": must lie left of the platoon");
    if (sc.variant == ModelVariant::FtlLwr && pc.a < sc.platoons[0].back())
      throw ParseError(path + ": must lie right of the platoon");
  }
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    if (sorted[i].b > sorted[i + 1].a)
      throw ParseError("density_pieces: intervals overlap");
}

void format_row(std::FILE* f, const std::vector<double>& vals,
                const std::vector<std::string>& prefix = {}) {
  bool first = true;
  std::string line;
  char buf[40];
  for (const auto& s : prefix) {
    if (!first) line += ',';
    line += s;
    first = false;
  }
  for (double v : vals) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    if (!first) line += ',';
    line += buf;
    first = false;
  }
  line += '\n';
  std::fputs(line.c_str(), f);
}

struct FileHandle {
  std::FILE* f = nullptr;
  explicit FileHandle(const std::string& path) {
    f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot open " + path + " for writing");
  }
  ~FileHandle() {
    if (f) std::fclose(f);
  }
};

}  // namespace

SpeedLaw Scenario::make_law() const { return SpeedLaw::greenshields(vmax); }

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("document: ") + e.what());
  }

  Scenario sc;
  sc.variant = variant_from(require<std::string>(j, "", "variant"));
  const json& law = j.contains("speed_law") ? j.at("speed_law") : json::object();
  sc.family = require<std::string>(law, "speed_law.", "family");
  sc.vmax = require<double>(law, "speed_law.", "vmax");
  sc.ell = require<double>(j, "", "ell");

  sc.platoons = require<std::vector<std::vector<double>>>(j, "", "platoons");

  if (j.contains("leader_w")) {
    auto raw = require<std::vector<std::vector<double>>>(j, "", "leader_w");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i].size() != 2)
        throw ParseError("leader_w[" + std::to_string(i) + "]: expected [t, value]");
      pts.emplace_back(raw[i][0], raw[i][1]);
    }
    try {
      sc.leader_w = SpeedProfile::from_breakpoints(std::move(pts));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("leader_w: ") + e.what());
    }
  } else if (sc.variant == ModelVariant::LwrFtl) {
    throw ParseError("leader_w: required for the lwr_ftl variant");
  }

  if (j.contains("density_pieces")) {
    auto raw = require<std::vector<std::vector<double>>>(j, "", "density_pieces");
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i].size() != 3)
        throw ParseError("density_pieces[" + std::to_string(i) +
                         "]: expected [a, b, value]");
      sc.pieces.push_back({raw[i][0], raw[i][1], raw[i][2]});
    }
  }

  const json& grid = j.contains("grid") ? j.at("grid") : json::object();
  sc.grid.x_min = require<double>(grid, "grid.", "xmin");
  sc.grid.x_max = require<double>(grid, "grid.", "xmax");
  sc.grid.dx = require<double>(grid, "grid.", "dx");
  sc.cfl = require<double>(j, "", "cfl");
  sc.t_end = require<double>(j, "", "t_end");
  sc.output_every = require<double>(j, "", "output_every");

  validate(sc);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string serialize(const Scenario& sc) {
  json j;
  j["variant"] = variant_name(sc.variant);
  j["speed_law"] = {{"family", sc.family}, {"vmax", sc.vmax}};
  j["ell"] = sc.ell;
  j["platoons"] = sc.platoons;
  if (sc.variant == ModelVariant::LwrFtl) {
    json w = json::array();
    for (const auto& [t, v] : sc.leader_w.breakpoints()) w.push_back({t, v});
    j["leader_w"] = w;
  }
  json pieces = json::array();
  for (const auto& pc : sc.pieces) pieces.push_back({pc.a, pc.b, pc.value});
  j["density_pieces"] = pieces;
  j["grid"] = {{"xmin", sc.grid.x_min}, {"xmax", sc.grid.x_max}, {"dx", sc.grid.dx}};
  j["cfl"] = sc.cfl;
  j["t_end"] = sc.t_end;
  j["output_every"] = sc.output_every;
  return j.dump(2) + "\n";
}

DensityField rasterize_density(const Scenario& sc) {
  DensityField f = DensityField::zeros(sc.grid.x_min, sc.grid.x_max, sc.grid.dx);
  for (const auto& pc : sc.pieces) {
    const int k_lo = std::max(0, f.cell_index(pc.a));
    const int k_hi = std::min(f.cells() - 1, f.cell_index(pc.b));
    for (int k = k_lo; k <= k_hi; ++k) {
      const double cl = f.x_min + k * f.dx;
      const double overlap = std::min(pc.b, cl + f.dx) - std::max(pc.a, cl);
      if (overlap > 0.0) f.rho[k] += pc.value * overlap / f.dx;
    }
  }
  switch (sc.variant) {
    case ModelVariant::LwrFtl:
      f.window_b = sc.platoons[0].front();  // p1 of the single platoon
      break;
    case ModelVariant::FtlLwr:
      f.window_a = sc.platoons[0].back();  // p_n
      break;
    case ModelVariant::General:
      break;
  }
  return f;
}

HybridState make_initial_state(const Scenario& sc) {
  HybridState state;
  state.variant = sc.variant;
  state.time = 0.0;
  state.field = rasterize_density(sc);
  for (const auto& positions : sc.platoons) {
    Platoon pl{VehicleColumn(sc.ell, positions), SpeedProfile(), true, true};
    switch (sc.variant) {
      case ModelVariant::LwrFtl:
        pl.macro_right = false;
        pl.leader_w = sc.leader_w;
        break;
      case ModelVariant::FtlLwr:
        pl.macro_left = false;
        break;
      case ModelVariant::General:
        break;
    }
    state.platoons.push_back(std::move(pl));
  }
  return state;
}

void write_outputs(const std::vector<Snapshot>& history, const std::string& sink) {
  if (history.empty()) throw std::invalid_argument("write_outputs: empty history");
  std::error_code ec;
  std::filesystem::create_directories(sink, ec);
  if (ec) throw IoError("cannot create output directory " + sink);

  FileHandle density(sink + "/density.csv");
  std::fputs("t,x,rho\n", density.f);
  for (const auto& snap : history) {
    const auto& f = snap.state.field;
    for (int k = 0; k < f.cells(); ++k)
      format_row(density.f, {snap.state.time, f.center(k), f.rho[k]});
  }

  FileHandle traj(sink + "/trajectories.csv");
  std::fputs("t,platoon,index,position,velocity\n", traj.f);
  for (const auto& snap : history)
    for (std::size_t j = 0; j < snap.state.platoons.size(); ++j) {
      const auto& col = snap.state.platoons[j].column;
      for (int i = 0; i < col.count(); ++i)
        format_row(traj.f,
                   {snap.state.time, static_cast<double>(j + 1),
                    static_cast<double>(i + 1), col.positions()[i],
                    col.velocities()[i]});
    }

  FileHandle diag(sink + "/diagnostics.csv");
  {
    std::string header = "t,total_mass,min_spacing,tv";
    for (std::size_t s = 0; s < history.front().diag.segment_masses.size(); ++s)
      header += ",segment_mass_" + std::to_string(s + 1);
    header += '\n';
    std::fputs(header.c_str(), diag.f);
  }
  for (const auto& snap : history) {
    std::vector<double> row{snap.diag.time, snap.diag.total_mass,
                            snap.diag.min_spacing, snap.diag.total_variation};
    row.insert(row.end(), snap.diag.segment_masses.begin(),
               snap.diag.segment_masses.end());
    format_row(diag.f, row);
  }
}

}  // namespace mm
